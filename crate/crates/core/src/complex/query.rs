use super::{CellComplex, Hierarchy};
use crate::cells::{CellId, CellRef, Color, Dim};
use crate::error::{Error, Result};
use crate::rulekit::RuleStats;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;
use serde::Serialize;
use std::collections::BTreeSet;

/// Level-`n` tiles by their color and the color of the level-`(n-1)` tile containing them.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TileClassCounts {
    pub ww: u64,
    pub wb: u64,
    pub bw: u64,
    pub bb: u64,
}

impl TileClassCounts {
    pub fn get(&self, color: Color, parent: Color) -> u64 {
        match (color, parent) {
            (Color::White, Color::White) => self.ww,
            (Color::White, Color::Black) => self.wb,
            (Color::Black, Color::White) => self.bw,
            (Color::Black, Color::Black) => self.bb,
        }
    }

    fn bump(&mut self, color: Color, parent: Color) {
        match (color, parent) {
            (Color::White, Color::White) => self.ww += 1,
            (Color::White, Color::Black) => self.wb += 1,
            (Color::Black, Color::White) => self.bw += 1,
            (Color::Black, Color::Black) => self.bb += 1,
        }
    }
}

pub fn tile_class_counts(hier: &Hierarchy, n: u32) -> Result<TileClassCounts> {
    if n == 0 {
        return Err(Error::InvalidArgument("tile classes start at level 1".into()));
    }
    let cx = hier.level(n)?;
    let below = hier.level(n - 1)?;
    let mut counts = TileClassCounts::default();
    for t in &cx.tiles {
        let p = t.parent.expect("tiles above level 0 have parents");
        counts.bump(t.color, below.tiles[p as usize].color);
    }
    Ok(counts)
}

/// Number of white level-`i` tiles inside a level-`m` tile, by enumeration.
pub fn count_white_tiles_in(hier: &Hierarchy, target: CellRef, i: u32) -> Result<u64> {
    if target.dim != Dim::Tile || i < target.level {
        return Err(Error::InvalidArgument(format!("need a tile and a level at least {}", target.level)));
    }
    let cx = hier.level(i)?;
    Ok(hier
        .descendants(target, i)?
        .into_iter()
        .filter(|c| c.dim == Dim::Tile && cx.tiles[c.id as usize].color == Color::White)
        .count() as u64)
}

/// Closed form for the number of white tiles `k` levels below a tile of the given color:
/// `w d^k + b λ^k` inside a white tile and `b d^k - b λ^k` inside a black one.
pub fn white_tile_formula(stats: &RuleStats, color: Color, k: u32) -> BigRational {
    let dk = BigRational::from_integer(BigInt::from(stats.d).pow(k));
    let lk = BigRational::from_integer(BigInt::from(stats.lambda).pow(k));
    match color {
        Color::White => &stats.w * dk + &stats.b * lk,
        Color::Black => &stats.b * dk - &stats.b * lk,
    }
}

/// All cells of a level containing a given vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Flower {
    pub vertex: CellRef,
    pub edges: Vec<u32>,
    pub tiles: Vec<u32>,
}

pub fn flower(hier: &Hierarchy, v: CellRef) -> Result<Flower> {
    if v.dim != Dim::Vertex {
        return Err(Error::InvalidCell(format!("{v} is not a vertex")));
    }
    let cx = hier.check_cell(v)?;
    let tiles = cx
        .tiles
        .iter()
        .enumerate()
        .filter(|(_, t)| t.vertices.contains(&v.id))
        .map(|(i, _)| i as u32)
        .collect();
    let edges = cx
        .edges
        .iter()
        .enumerate()
        .filter(|(_, e)| e.ends.contains(&v.id))
        .map(|(i, _)| i as u32)
        .collect();
    Ok(Flower { vertex: v, edges, tiles })
}

/// Local degree of `f^n` at a level-`n` vertex: half the number of tiles around it.
pub fn local_degree_at(hier: &Hierarchy, v: CellRef) -> Result<u32> {
    Ok(flower(hier, v)?.tiles.len() as u32 / 2)
}

fn sides_met(cx: &CellComplex, tile: u32) -> BTreeSet<u32> {
    let m = cx.m;
    let t = &cx.tiles[tile as usize];
    let mut sides = BTreeSet::new();
    let mut note = |c: CellId| match c.dim {
        Dim::Vertex => {
            sides.insert(c.id);
            sides.insert((c.id + m - 1) % m);
        }
        Dim::Edge => {
            sides.insert(c.id);
        }
        Dim::Tile => {}
    };
    for &v in &t.vertices {
        note(cx.vertices[v as usize].carrier);
    }
    for &e in &t.edges {
        note(cx.edges[e as usize].carrier);
    }
    sides
}

/// Whether a tile meets two disjoint 0-edges (all three when `m = 3`).
pub fn joins_opposite_sides(cx: &CellComplex, tile: u32) -> bool {
    let m = cx.m;
    let sides: Vec<u32> = sides_met(cx, tile).into_iter().collect();
    if m == 3 {
        return sides.len() == 3;
    }
    sides.iter().enumerate().any(|(i, &a)| {
        sides[i + 1..].iter().any(|&b| {
            let gap = (b + m - a) % m;
            gap != 1 && gap != m - 1
        })
    })
}

/// Smallest level `n <= max_n` none of whose tiles joins opposite sides.
pub fn find_expansion_level(hier: &mut Hierarchy, max_n: u32) -> Result<u32> {
    for n in 1..=max_n.min(hier.cap()) {
        hier.ensure(n)?;
        let cx = hier.level(n)?;
        if !(0..cx.tiles.len() as u32).any(|t| joins_opposite_sides(cx, t)) {
            return Ok(n);
        }
    }
    Err(Error::ExpansionNotEstablished { max_level: max_n.min(hier.cap()) })
}

/// Tiles `k` levels below an edge that touch it at a vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeCover {
    pub edge: CellRef,
    pub k: u32,
    /// Level-`(m + k)` vertices on the edge.
    pub vertices: Vec<u32>,
    pub tiles: Vec<u32>,
    /// Whether the edge lies in the interior of the union of the tiles.
    pub contains_edge: bool,
}

impl EdgeCover {
    pub fn card(&self) -> usize {
        self.tiles.len()
    }
}

pub fn cover_edge(hier: &Hierarchy, edge: CellRef, k: u32) -> Result<EdgeCover> {
    if edge.dim != Dim::Edge {
        return Err(Error::InvalidCell(format!("{edge} is not an edge")));
    }
    let level = edge.level + k;
    let cx = hier.level(level)?;
    let inside = hier.descendants(edge, level)?;
    let vertices: Vec<u32> = inside.iter().filter(|c| c.dim == Dim::Vertex).map(|c| c.id).collect();
    let edges: Vec<u32> = inside.iter().filter(|c| c.dim == Dim::Edge).map(|c| c.id).collect();
    let vt = cx.vertex_tiles();
    let tiles: BTreeSet<u32> = vertices.iter().flat_map(|&v| vt[v as usize].iter().copied()).collect();
    let et = cx.edge_tiles();
    let contains_edge = vertices.iter().all(|&v| vt[v as usize].iter().all(|t| tiles.contains(t)))
        && edges.iter().all(|&e| et[e as usize].len() == 2 && et[e as usize].iter().all(|t| tiles.contains(t)));
    Ok(EdgeCover { edge, k, vertices, tiles: tiles.into_iter().collect(), contains_edge })
}
