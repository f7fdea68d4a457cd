use super::cells::walk_curve;
use super::SubdivisionRule;
use crate::cells::{CellId, Color};
use serde::Serialize;
use std::collections::{BTreeSet, HashSet};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    Degenerate,
    TileCount,
    EdgeCount,
    VertexCount,
    TileShape,
    EdgePreimage,
    EdgeLabels,
    Orientation,
    Manifold,
    Curve,
    Location,
    Disk,
    Euler,
    RiemannHurwitz,
    PostConsistency,
}

impl ViolationKind {
    pub fn name(self) -> &'static str {
        match self {
            ViolationKind::Degenerate => "degenerate",
            ViolationKind::TileCount => "tile-count",
            ViolationKind::EdgeCount => "edge-count",
            ViolationKind::VertexCount => "vertex-count",
            ViolationKind::TileShape => "tile-shape",
            ViolationKind::EdgePreimage => "edge-preimage",
            ViolationKind::EdgeLabels => "edge-labels",
            ViolationKind::Orientation => "orientation",
            ViolationKind::Manifold => "manifold",
            ViolationKind::Curve => "curve",
            ViolationKind::Location => "location",
            ViolationKind::Disk => "disk",
            ViolationKind::Euler => "euler",
            ViolationKind::RiemannHurwitz => "riemann-hurwitz",
            ViolationKind::PostConsistency => "post-consistency",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
    pub cells: Vec<CellId>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind.name(), self.message)?;
        if !self.cells.is_empty() {
            let cells: Vec<String> = self.cells.iter().map(|c| c.to_string()).collect();
            write!(f, " [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    fn push(&mut self, kind: ViolationKind, message: impl Into<String>, cells: Vec<CellId>) {
        self.violations.push(Violation { kind, message: message.into(), cells });
    }
}

/// Checks the combinatorial conditions a two-tile subdivision rule must satisfy.
pub fn validate(rule: &SubdivisionRule) -> ValidationReport {
    use ViolationKind::*;
    let mut r = ValidationReport::default();
    let m = rule.m as usize;
    let d = rule.d as usize;
    let [nv, ne, nt] = rule.cell_counts();

    if m < 3 || d < 2 {
        r.push(Degenerate, format!("need m >= 3 and d >= 2, got m = {m}, d = {d}"), vec![]);
        return r;
    }
    let whites = rule.tiles.iter().filter(|t| t.color == Color::White).count();
    if nt != 2 * d || whites != d {
        r.push(TileCount, format!("expected {d} white and {d} black tiles, found {whites} and {}", nt - whites), vec![]);
    }
    if ne != m * d {
        r.push(EdgeCount, format!("expected {} edges, found {ne}", m * d), vec![]);
    }
    if nv > m * d {
        r.push(VertexCount, format!("at most {} vertices allowed, found {nv}", m * d), vec![]);
    }

    // Tile shape and orientation.
    let mut shape_ok = true;
    for (t, tile) in rule.tiles.iter().enumerate() {
        let cid = CellId::tile(t as u32);
        let vs: Vec<u32> = tile.vertices().collect();
        let es: Vec<u32> = tile.edges().collect();
        if vs.len() != m || es.len() != m {
            r.push(TileShape, format!("tile {t} has {} corners, expected {m}", vs.len()), vec![cid]);
            shape_ok = false;
            continue;
        }
        let distinct_v: HashSet<_> = vs.iter().collect();
        let distinct_e: HashSet<_> = es.iter().collect();
        if distinct_v.len() != m || distinct_e.len() != m {
            r.push(TileShape, format!("tile {t} repeats a boundary cell"), vec![cid]);
            shape_ok = false;
        }
        for k in 0..m {
            let (a, b) = (vs[k], vs[(k + 1) % m]);
            let ends = rule.edges[es[k] as usize].ends;
            if !(ends == [a, b] || ends == [b, a]) {
                r.push(TileShape, format!("edge {} of tile {t} does not join vertices {a} and {b}", es[k]), vec![cid]);
                shape_ok = false;
            }
        }
        let step = if tile.color == Color::White { 1 } else { m - 1 };
        let mut consistent = true;
        for k in 0..m {
            let la = rule.vertices[vs[k] as usize].label as usize;
            let lb = rule.vertices[vs[(k + 1) % m] as usize].label as usize;
            let expected_edge = if tile.color == Color::White { la } else { lb };
            if lb != (la + step) % m || rule.edges[es[k] as usize].image as usize != expected_edge {
                consistent = false;
            }
        }
        if !consistent {
            r.push(
                Orientation,
                format!("boundary of tile {t} does not map counterclockwise onto the {} 0-tile", tile.color),
                vec![cid],
            );
        }
    }

    // Each 0-edge has d preimages; edge ends carry the labels of the image ends.
    let mut per_image = vec![0usize; m];
    for (e, edge) in rule.edges.iter().enumerate() {
        per_image[edge.image as usize] += 1;
        let tail = edge.image as usize;
        let head = (tail + 1) % m;
        let (l0, l1) = (rule.vertices[edge.ends[0] as usize].label as usize, rule.vertices[edge.ends[1] as usize].label as usize);
        let ok = if edge.forward { (l0, l1) == (tail, head) } else { (l0, l1) == (head, tail) };
        if !ok {
            r.push(EdgeLabels, format!("ends of edge {e} are not labelled like 0-edge {tail}"), vec![CellId::edge(e as u32)]);
        }
    }
    for (j, &k) in per_image.iter().enumerate() {
        if k != d {
            r.push(EdgePreimage, format!("0-edge {j} has {k} preimage edges, expected {d}"), vec![CellId::edge(j as u32)]);
        }
    }

    // Every edge borders exactly two tiles.
    let mut edge_tiles: Vec<Vec<usize>> = vec![Vec::new(); ne];
    for (t, tile) in rule.tiles.iter().enumerate() {
        for e in tile.edges() {
            edge_tiles[e as usize].push(t);
        }
    }
    for (e, ts) in edge_tiles.iter().enumerate() {
        if ts.len() != 2 {
            r.push(Manifold, format!("edge {e} borders {} tiles, expected 2", ts.len()), vec![CellId::edge(e as u32)]);
            shape_ok = false;
        }
    }

    // The curve.
    let mut curve_edges: BTreeSet<u32> = BTreeSet::new();
    let mut curve_ok = rule.curve.posts.len() == m && rule.curve.edges.len() == m;
    if !curve_ok {
        r.push(Curve, format!("curve must have {m} posts and {m} edge paths"), vec![]);
    } else {
        let mut visited: Vec<u32> = Vec::new();
        for j in 0..m {
            match walk_curve(rule, j) {
                Ok(seen) => visited.extend_from_slice(&seen[..seen.len() - 1]),
                Err(msg) => {
                    r.push(Curve, msg, vec![]);
                    curve_ok = false;
                }
            }
            for &e in &rule.curve.edges[j] {
                if !curve_edges.insert(e) {
                    r.push(Curve, format!("curve edge {e} is listed twice"), vec![CellId::edge(e)]);
                    curve_ok = false;
                }
            }
        }
        let distinct: HashSet<_> = visited.iter().collect();
        if curve_ok && distinct.len() != visited.len() {
            r.push(Curve, "curve is not a simple closed path", vec![]);
            curve_ok = false;
        }
        if curve_ok {
            let mut labels: Vec<u32> = rule.curve.posts.clone();
            labels.sort_unstable();
            labels.dedup();
            if labels.len() != m {
                r.push(Curve, "posts are not distinct", vec![]);
                curve_ok = false;
            }
        }
    }

    // Tile locations: opposite across the curve, equal elsewhere; white on the left of the curve.
    if shape_ok && curve_ok {
        let mut along: std::collections::HashMap<u32, (u32, u32)> = std::collections::HashMap::new();
        for j in 0..m {
            if let Ok(seen) = walk_curve(rule, j) {
                for (k, &e) in rule.curve.edges[j].iter().enumerate() {
                    along.insert(e, (seen[k], seen[k + 1]));
                }
            }
        }
        for (e, ts) in edge_tiles.iter().enumerate() {
            let (a, b) = (&rule.tiles[ts[0]], &rule.tiles[ts[1]]);
            let cells = vec![CellId::tile(ts[0] as u32), CellId::tile(ts[1] as u32)];
            match along.get(&(e as u32)) {
                None if a.location != b.location => {
                    r.push(Location, format!("tiles on both sides of edge {e} lie in different 0-tiles"), cells);
                }
                Some(&(s, t)) => {
                    if a.location == b.location {
                        r.push(Location, format!("curve edge {e} separates tiles of the same 0-tile"), cells);
                        continue;
                    }
                    let white = if a.location == Color::White { a } else { b };
                    let m2 = white.boundary.len();
                    let forward = (0..m2).step_by(2).any(|p| {
                        white.boundary[p] == s && white.boundary[p + 1] == e as u32 && white.boundary[(p + 2) % m2] == t
                    });
                    if !forward {
                        r.push(Location, format!("white side of curve edge {e} is not on the left of the curve"), cells);
                    }
                }
                _ => {}
            }
        }
    }

    // Euler characteristics.
    if shape_ok {
        let euler = |filter: &dyn Fn(Color) -> bool| -> i64 {
            let mut vs = HashSet::new();
            let mut es = HashSet::new();
            let mut f = 0i64;
            for t in rule.tiles.iter().filter(|t| filter(t.location)) {
                f += 1;
                vs.extend(t.vertices());
                es.extend(t.edges());
            }
            vs.len() as i64 - es.len() as i64 + f
        };
        let total = euler(&|_| true);
        let all_vertices_used = rule.tiles.iter().flat_map(|t| t.vertices()).collect::<HashSet<_>>().len() == nv;
        if total != 2 || !all_vertices_used {
            r.push(Euler, format!("complex has Euler characteristic {total} (or unused vertices), expected 2"), vec![]);
        }
        for side in Color::ALL {
            let chi = euler(&|c| c == side);
            if chi != 1 {
                r.push(Disk, format!("{side} side has Euler characteristic {chi}, expected 1"), vec![]);
            }
        }
    }

    // Riemann-Hurwitz and postcritical consistency.
    let mut incident = vec![0u32; nv];
    for t in &rule.tiles {
        for v in t.vertices() {
            incident[v as usize] += 1;
        }
    }
    let mut excess = 0i64;
    let mut critical = Vec::new();
    for (v, &k) in incident.iter().enumerate() {
        if k % 2 != 0 || k == 0 {
            r.push(RiemannHurwitz, format!("vertex {v} meets {k} tiles; an even positive count is required"), vec![CellId::vertex(v as u32)]);
            continue;
        }
        if k > 2 {
            critical.push(v);
        }
        excess += i64::from(k / 2) - 1;
    }
    if excess != 2 * d as i64 - 2 {
        r.push(RiemannHurwitz, format!("sum of (degree - 1) is {excess}, expected {}", 2 * d - 2), vec![]);
    }
    if rule.curve.posts.len() == m {
        let mut post: BTreeSet<u32> = BTreeSet::new();
        for &c in &critical {
            let mut j = rule.vertices[c].label;
            while post.insert(j) {
                j = rule.vertices[rule.curve.posts[j as usize] as usize].label;
            }
        }
        if post.len() != m {
            let missing: Vec<CellId> = (0..m as u32).filter(|j| !post.contains(j)).map(CellId::vertex).collect();
            r.push(PostConsistency, "some 0-vertices are not postcritical", missing);
        }
    }
    r
}
