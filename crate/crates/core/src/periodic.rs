//! Fixed, periodic and preperiodic points.
//!
//! Fixed points of `F = f^N` are found on the level-`N` complex, read as the level-1 complex of
//! `F`, once no level-`N` tile meets two disjoint 0-edges. Every tile of `F` whose color equals
//! its location then contains exactly one fixed point, and so does every curve edge mapped onto
//! its own carrier; every 0-vertex fixed by `F` is a fixed point. A tile or edge whose
//! fixed point lies on its boundary is merged with that boundary site. Requests for `f^n` with
//! `n` below the expansion level are answered from a multiple of `n` and filtered by period.

use crate::cells::{CellId, CellRef, Dim};
use crate::complex::{find_expansion_level, CellComplex, Hierarchy};
use crate::dynamics::{analyze_critical, local_degree_along_orbit, preimages, PointAddress};
use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Locus {
    Vertex,
    CurveEdge,
    Tile,
}

impl Locus {
    pub fn name(self) -> &'static str {
        match self {
            Locus::Vertex => "vertex",
            Locus::CurveEdge => "curve-edge",
            Locus::Tile => "tile",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPoint {
    pub address: PointAddress,
    /// Local degree of the requested iterate at the point.
    pub weight: u64,
    pub locus: Locus,
    /// Smallest level-`iterate` cell containing the point.
    pub site: CellRef,
    /// Level-`iterate` tiles of matching color and location that contain the point.
    pub tiles: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPointSet {
    /// The requested iterate `n`.
    pub n: u32,
    /// Iterate actually analysed, a multiple of `n`.
    pub iterate: u32,
    pub points: Vec<FixedPoint>,
}

impl FixedPointSet {
    pub fn total_weight(&self) -> u64 {
        self.points.iter().map(|p| p.weight).sum()
    }
}

/// Candidate tiles: level-`iterate` tiles whose color equals their location.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Candidates {
    pub n: u32,
    pub iterate: u32,
    pub tiles: Vec<u32>,
}

/// Smallest multiple of `n` at or above the combinatorial expansion level.
pub fn expanding_iterate(hier: &mut Hierarchy, n: u32) -> Result<u32> {
    if n == 0 {
        return Err(Error::InvalidArgument("the iterate must be positive".into()));
    }
    let n0 = find_expansion_level(hier, hier.cap())?;
    let iterate = if n >= n0 { n } else { n * n0.div_ceil(n) };
    hier.ensure(iterate)?;
    Ok(iterate)
}

pub fn fixed_candidate_tiles(hier: &mut Hierarchy, n: u32) -> Result<Candidates> {
    let iterate = expanding_iterate(hier, n)?;
    let cx = hier.level(iterate)?;
    let tiles = (0..cx.tiles.len() as u32).filter(|&t| is_candidate(cx, t)).collect();
    Ok(Candidates { n, iterate, tiles })
}

fn is_candidate(cx: &CellComplex, t: u32) -> bool {
    let tile = &cx.tiles[t as usize];
    tile.color == tile.location
}

fn vertex_fixed(cx: &CellComplex, v: u32) -> bool {
    cx.posts.get(cx.vertices[v as usize].label as usize) == Some(&v)
}

/// Curve edge mapped by the iterate onto the 0-edge carrying it.
fn edge_self_covering(cx: &CellComplex, e: u32) -> bool {
    let edge = &cx.edges[e as usize];
    edge.carrier == CellId::edge(edge.label)
}

/// Smallest cell containing the fixed point of a candidate site.
fn resolve_site(cx: &CellComplex, site: CellId) -> Result<CellId> {
    match site.dim {
        Dim::Vertex => Ok(site),
        Dim::Edge => {
            let ends = cx.edges[site.id as usize].ends;
            let fixed: Vec<u32> = ends.into_iter().filter(|&v| vertex_fixed(cx, v)).collect();
            match fixed.as_slice() {
                [] => Ok(site),
                [v] => Ok(CellId::vertex(*v)),
                _ => Err(Error::InconsistentRule(format!("edge {} holds two fixed points", site.id))),
            }
        }
        Dim::Tile => {
            let tile = &cx.tiles[site.id as usize];
            let mut found: BTreeSet<CellId> = BTreeSet::new();
            for &v in &tile.vertices {
                if vertex_fixed(cx, v) {
                    found.insert(CellId::vertex(v));
                }
            }
            for &e in &tile.edges {
                if edge_self_covering(cx, e) {
                    found.insert(resolve_site(cx, CellId::edge(e))?);
                }
            }
            match found.len() {
                0 => Ok(site),
                1 => Ok(*found.iter().next().expect("one site")),
                _ => Err(Error::InconsistentRule(format!("tile {} holds several fixed points", site.id))),
            }
        }
    }
}

/// Address of the fixed point of `f^iterate` in a candidate tile, from nested pullbacks of the tile.
pub fn locate_fixed_point(hier: &Hierarchy, iterate: u32, tile: u32, depth: usize) -> Result<PointAddress> {
    let cx = hier.level(iterate)?;
    if tile as usize >= cx.tiles.len() || !is_candidate(cx, tile) {
        return Err(Error::InvalidCell(format!("level-{iterate} tile {tile} maps onto another 0-tile")));
    }
    let site = resolve_site(cx, CellId::tile(tile))?;
    PointAddress::periodic(hier, site.at(iterate), depth.max(iterate as usize))
}

/// All fixed points of `f^n` with their local degrees; the degrees sum to `1 + d^n`.
pub fn enumerate_fixed_points(hier: &mut Hierarchy, n: u32, depth: usize) -> Result<FixedPointSet> {
    let iterate = expanding_iterate(hier, n)?;
    let hier: &Hierarchy = hier;
    let cx = hier.level(iterate)?;
    let depth = depth.max(iterate as usize);

    let mut sites: BTreeSet<CellId> = BTreeSet::new();
    for &v in &cx.posts {
        if vertex_fixed(cx, v) {
            sites.insert(CellId::vertex(v));
        }
    }
    for e in 0..cx.edges.len() as u32 {
        if edge_self_covering(cx, e) {
            sites.insert(resolve_site(cx, CellId::edge(e))?);
        }
    }
    let mut tiles_at: std::collections::BTreeMap<CellId, Vec<u32>> = Default::default();
    for t in 0..cx.tiles.len() as u32 {
        if is_candidate(cx, t) {
            let s = resolve_site(cx, CellId::tile(t))?;
            sites.insert(s);
            tiles_at.entry(s).or_default().push(t);
        }
    }

    let mut points = Vec::new();
    for site in sites {
        let address = PointAddress::periodic(hier, site.at(iterate), depth)?;
        let word = &address.letters()[..iterate as usize];
        let step = n as usize;
        if (0..word.len() - step).any(|k| word[k] != word[k + step]) {
            continue;
        }
        let weight = local_degree_along_orbit(hier.cells(), &address, n as usize)?;
        let locus = match site.dim {
            Dim::Vertex => Locus::Vertex,
            Dim::Edge => Locus::CurveEdge,
            Dim::Tile => Locus::Tile,
        };
        points.push(FixedPoint {
            address,
            weight,
            locus,
            site: site.at(iterate),
            tiles: tiles_at.remove(&site).unwrap_or_default(),
        });
    }
    Ok(FixedPointSet { n, iterate, points })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Preserve,
    Reverse,
    Fold,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CircleSite {
    pub cell: CellRef,
    pub orientation: Orientation,
}

/// Fixed points of the iterate on the curve, classified by how the iterate moves the curve near them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CircleAnalysis {
    pub iterate: u32,
    pub sites: Vec<CircleSite>,
    pub preserve: usize,
    pub reverse: usize,
    pub fold: usize,
    /// Degree of the iterate on the curve, from the winding of its image.
    pub degree_on_curve: i64,
}

/// Circle analysis of `f^n` using the level-`n` complex.
pub fn circle_analysis_at(hier: &Hierarchy, n: u32) -> Result<CircleAnalysis> {
    let cx = hier.level(n)?;
    let m = cx.m as usize;
    let paths = cx.curve_paths();
    let mut sites = Vec::new();
    let mut signed = 0i64;
    for (j, (path, verts)) in paths.iter().enumerate() {
        let p = cx.posts[j];
        if vertex_fixed(cx, p) {
            let before = *paths[(j + m - 1) % m].0.last().expect("nonempty curve path");
            let after = path[0];
            let (a, b) = (cx.edges[before as usize].label as usize, cx.edges[after as usize].label as usize);
            let orientation = if (a, b) == ((j + m - 1) % m, j) {
                Orientation::Preserve
            } else if (a, b) == (j, (j + m - 1) % m) {
                Orientation::Reverse
            } else {
                Orientation::Fold
            };
            sites.push(CircleSite { cell: CellRef { level: n, dim: Dim::Vertex, id: p }, orientation });
        }
        for (k, &e) in path.iter().enumerate() {
            let forward = cx.edges[e as usize].ends[0] == verts[k];
            signed += if forward { 1 } else { -1 };
            if edge_self_covering(cx, e) && resolve_site(cx, CellId::edge(e))?.dim == Dim::Edge {
                let orientation = if forward { Orientation::Preserve } else { Orientation::Reverse };
                sites.push(CircleSite { cell: CellRef { level: n, dim: Dim::Edge, id: e }, orientation });
            }
        }
    }
    if signed % m as i64 != 0 {
        return Err(Error::InconsistentRule("image of the curve is not a closed loop".into()));
    }
    let count = |o: Orientation| sites.iter().filter(|s| s.orientation == o).count();
    Ok(CircleAnalysis {
        iterate: n,
        preserve: count(Orientation::Preserve),
        reverse: count(Orientation::Reverse),
        fold: count(Orientation::Fold),
        sites,
        degree_on_curve: signed / m as i64,
    })
}

/// Circle analysis of the map itself.
pub fn circle_analysis(rule: &crate::rulekit::SubdivisionRule) -> Result<CircleAnalysis> {
    let hier = Hierarchy::new(rule.clone())?;
    circle_analysis_at(&hier, 1)
}

/// The set `f^{-m}(Fix f^{n-m})` of points with `f^n(x) = f^m(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreperiodicSet {
    pub m: u32,
    pub n: u32,
    /// Points with the local degree of `f^n` at each.
    pub points: Vec<(PointAddress, u64)>,
}

impl PreperiodicSet {
    /// Sum of local degrees.
    pub fn weighted(&self) -> u64 {
        self.points.iter().map(|(_, w)| w).sum()
    }

    /// Number of distinct points.
    pub fn distinct(&self) -> usize {
        self.points.len()
    }
}

/// Expected weighted size `d^n + d^m`.
pub fn preperiodic_count_formula(d: u32, m: u32, n: u32) -> u64 {
    u64::from(d).pow(n) + u64::from(d).pow(m)
}

pub fn preperiodic_census(hier: &mut Hierarchy, m: u32, n: u32, depth: usize) -> Result<PreperiodicSet> {
    if m >= n {
        return Err(Error::InvalidArgument(format!("need m < n, got m = {m}, n = {n}")));
    }
    let fixed = enumerate_fixed_points(hier, n - m, depth.max(n as usize))?;
    let cells = hier.cells();
    let mut layer: Vec<(PointAddress, u64)> = fixed.points.into_iter().map(|p| (p.address, p.weight)).collect();
    for _ in 0..m {
        layer = layer
            .iter()
            .flat_map(|(p, w)| preimages(cells, p).into_iter().map(move |(q, k)| (q, w * u64::from(k))))
            .collect();
    }
    for (p, w) in &layer {
        debug_assert_eq!(*w, local_degree_along_orbit(cells, p, n as usize).unwrap_or(0));
    }
    layer.sort();
    Ok(PreperiodicSet { m, n, points: layer })
}

/// The Möbius function.
pub fn moebius(mut n: u64) -> i64 {
    let mut result = 1i64;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Number of points of exact period `n` predicted from fixed-point counts: `1 + d` for `n = 1`,
/// otherwise `Σ_{t | n} μ(t) d^{n/t}`.
pub fn moebius_period_count(hier: &Hierarchy, n: u32) -> Result<i128> {
    if analyze_critical(hier.cells()).has_periodic_critical {
        return Err(Error::PeriodicCriticalPresent);
    }
    moebius_formula(hier.d(), n)
}

pub fn moebius_formula(d: u32, n: u32) -> Result<i128> {
    if n == 0 {
        return Err(Error::InvalidArgument("periods are positive".into()));
    }
    let d = i128::from(d);
    if n == 1 {
        return Ok(1 + d);
    }
    Ok((1..=n).filter(|t| n % t == 0).map(|t| i128::from(moebius(u64::from(t))) * d.pow(n / t)).sum())
}

/// Smallest `t` dividing `n` with `f^t(x) = x`, read off a periodic address.
pub fn exact_period(address: &PointAddress, n: u32) -> Option<u32> {
    let word = address.letters();
    (1..=n).filter(|t| n % t == 0).find(|&t| {
        let t = t as usize;
        word.len() > t && (0..word.len() - t).all(|k| word[k] == word[k + t])
    })
}

/// Points of exact period `n`, counted by enumeration.
pub fn exact_period_points(hier: &mut Hierarchy, n: u32, depth: usize) -> Result<Vec<FixedPoint>> {
    let set = enumerate_fixed_points(hier, n, depth.max(2 * n as usize))?;
    Ok(set.points.into_iter().filter(|p| exact_period(&p.address, n) == Some(n)).collect())
}
