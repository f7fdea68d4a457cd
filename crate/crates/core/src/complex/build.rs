use super::{CellComplex, EdgeCell, Key, KeyIndex, TileCell, VertexCell};
use crate::cells::{CellId, Color, Dim};
use crate::error::{Error, Result};
use crate::rulekit::RuleCells;
use rayon::prelude::*;

/// Global index of a 1-cell across all dimensions.
fn global(rc: &RuleCells, c: CellId) -> usize {
    match c.dim {
        Dim::Vertex => c.id as usize,
        Dim::Edge => rc.count(Dim::Vertex) + c.id as usize,
        Dim::Tile => rc.count(Dim::Vertex) + rc.count(Dim::Edge) + c.id as usize,
    }
}

fn one_cells(rc: &RuleCells) -> impl Iterator<Item = CellId> + '_ {
    Dim::ALL.into_iter().flat_map(move |dim| (0..rc.count(dim) as u32).map(move |id| CellId::new(dim, id)))
}

pub(crate) fn level0(m: u32) -> CellComplex {
    let vertices = (0..m)
        .map(|j| VertexCell { carrier: CellId::vertex(j), key: None, label: j, parent: None })
        .collect();
    let edges = (0..m)
        .map(|j| EdgeCell { carrier: CellId::edge(j), ends: [j, (j + 1) % m], key: None, label: j, parent: None })
        .collect();
    let white = TileCell {
        color: Color::White,
        edges: (0..m).collect(),
        key: None,
        location: Color::White,
        parent: None,
        vertices: (0..m).collect(),
    };
    let black = TileCell {
        color: Color::Black,
        edges: (0..m).rev().collect(),
        key: None,
        location: Color::Black,
        parent: None,
        vertices: (0..m).map(|k| (m - k) % m).collect(),
    };
    let mut c = CellComplex {
        edges,
        level: 0,
        m,
        posts: (0..m).collect(),
        tiles: vec![white, black],
        vertices,
        index: KeyIndex::default(),
    };
    build_groups(&mut c);
    c
}

fn build_groups(c: &mut CellComplex) {
    let codes = 2 * c.m as usize + 2;
    for dim in Dim::ALL {
        let mut groups = vec![Vec::new(); codes];
        let mut rank = Vec::with_capacity(c.count(dim));
        for id in 0..c.count(dim) as u32 {
            let g = &mut groups[c.carrier_code(c.carrier(CellId::new(dim, id)))];
            rank.push(g.len() as u32);
            g.push(id);
        }
        c.index.groups[dim.index()] = groups;
        c.index.rank[dim.index()] = rank;
    }
}

fn build_blocks(c: &mut CellComplex, rc: &RuleCells) {
    let total = one_cells(rc).count();
    for dim in Dim::ALL {
        let mut starts = vec![u32::MAX; total];
        for id in 0..c.count(dim) as u32 {
            if let Some(k) = c.key(CellId::new(dim, id)) {
                let g = global(rc, k.cell1);
                if starts[g] == u32::MAX {
                    starts[g] = id;
                }
            }
        }
        c.index.block_start[dim.index()] = starts;
    }
}

/// Recomputes the lookup tables of a deserialized complex.
pub(crate) fn rebuild_index(c: &mut CellComplex, rc: &RuleCells) {
    c.index = KeyIndex::default();
    build_groups(c);
    if c.level > 0 {
        build_blocks(c, rc);
    }
}

impl CellComplex {
    /// Id of the cell with key `(cell1, below)`, where `below_rank` is the rank of `below` in its
    /// carrier group one level down.
    pub(crate) fn id_from_rank(&self, dim: Dim, cell1: CellId, below_rank: u32, rc: &RuleCells) -> Option<u32> {
        let start = *self.index.block_start[dim.index()].get(global(rc, cell1))?;
        (start != u32::MAX).then(|| start + below_rank)
    }

    /// Rank of a cell within its carrier group.
    pub(crate) fn rank(&self, c: CellId) -> u32 {
        self.index.rank[c.dim.index()][c.id as usize]
    }

    pub(crate) fn group(&self, dim: Dim, carrier: CellId) -> &[u32] {
        &self.index.groups[dim.index()][self.carrier_code(carrier)]
    }
}

/// Builds level `prev.level + 1`; `grand` is level `prev.level - 1` when `prev.level >= 1`.
pub(crate) fn subdivide(prev: &CellComplex, grand: Option<&CellComplex>, rc: &RuleCells) -> Result<CellComplex> {
    let m = prev.m;
    let level = prev.level + 1;

    // Block layout of the new ids.
    let total = one_cells(rc).count();
    let mut block_start: [Vec<u32>; 3] = Default::default();
    let mut keys: [Vec<Key>; 3] = Default::default();
    for dim in Dim::ALL {
        let mut starts = vec![u32::MAX; total];
        let mut list = Vec::new();
        for c1 in one_cells(rc).filter(|c| c.dim >= dim) {
            let members = prev.group(dim, rc.image(c1));
            if members.is_empty() {
                continue;
            }
            starts[global(rc, c1)] = list.len() as u32;
            list.extend(members.iter().map(|&z| Key { cell1: c1, below: z }));
        }
        block_start[dim.index()] = starts;
        keys[dim.index()] = list;
    }
    let id_of = |dim: Dim, c1: CellId, rank: u32| -> Option<u32> {
        let s = block_start[dim.index()][global(rc, c1)];
        (s != u32::MAX).then(|| s + rank)
    };
    // Lift of a level-`prev.level` cell on the boundary of the image of `c1`.
    let lift = |c1: CellId, z: CellId| -> Result<u32> {
        let face = rc.face_over(c1, prev.carrier(z)).ok_or_else(|| {
            Error::Gluing(format!("1-cell {c1} has no face over the carrier of level-{} cell {z}", prev.level))
        })?;
        id_of(z.dim, face, prev.rank(z))
            .ok_or_else(|| Error::Gluing(format!("no level-{level} cell lifts {z} through {face}")))
    };
    let parent_of = |c1: CellId, z: CellId| -> Result<CellId> {
        if prev.level == 0 {
            return Ok(rc.carrier(c1));
        }
        let p = prev.parent(z).ok_or_else(|| Error::Gluing(format!("cell {z} has no parent")))?;
        let grand = grand.ok_or_else(|| Error::Gluing("missing level below the previous one".into()))?;
        prev.id_from_rank(p.dim, c1, grand.rank(p), rc)
            .map(|id| CellId::new(p.dim, id))
            .ok_or_else(|| Error::Gluing(format!("parent of ({c1}, {z}) is missing")))
    };

    let vertices = keys[0]
        .iter()
        .map(|k| {
            let z = CellId::vertex(k.below);
            Ok(VertexCell {
                carrier: rc.carrier(k.cell1),
                key: Some(*k),
                label: prev.vertices[k.below as usize].label,
                parent: Some(parent_of(k.cell1, z)?),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let edges = keys[1]
        .par_iter()
        .map(|k| {
            let z = &prev.edges[k.below as usize];
            Ok(EdgeCell {
                carrier: rc.carrier(k.cell1),
                ends: [lift(k.cell1, CellId::vertex(z.ends[0]))?, lift(k.cell1, CellId::vertex(z.ends[1]))?],
                key: Some(*k),
                label: z.label,
                parent: Some(parent_of(k.cell1, CellId::edge(k.below))?),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let tiles = keys[2]
        .par_iter()
        .map(|k| {
            let z = &prev.tiles[k.below as usize];
            let vertices = z.vertices.iter().map(|&v| lift(k.cell1, CellId::vertex(v))).collect::<Result<Vec<_>>>()?;
            let edges = z.edges.iter().map(|&e| lift(k.cell1, CellId::edge(e))).collect::<Result<Vec<_>>>()?;
            Ok(TileCell {
                color: z.color,
                edges,
                key: Some(*k),
                location: rc.tile_location[k.cell1.id as usize],
                parent: Some(parent_of(k.cell1, CellId::tile(k.below))?.id),
                vertices,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let posts = (0..m as usize)
        .map(|j| {
            let p1 = rc.posts[j];
            let below = prev.posts[rc.vertex_label[p1 as usize] as usize];
            id_of(Dim::Vertex, CellId::vertex(p1), prev.rank(CellId::vertex(below)))
                .ok_or_else(|| Error::Gluing(format!("post {j} does not lift to level {level}")))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut c = CellComplex { edges, level, m, posts, tiles, vertices, index: KeyIndex::default() };
    build_groups(&mut c);
    c.index.block_start = block_start;
    Ok(c)
}
