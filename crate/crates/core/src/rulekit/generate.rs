use super::{Curve, RuleEdge, RuleTile, RuleVertex, SubdivisionRule};
use crate::cells::Color;
use crate::error::{Error, Result};
use std::collections::HashMap;

/// Corner of the unit square (grid parity) as a 0-vertex index, counterclockwise from the origin.
fn corner(i: u32, j: u32) -> u32 {
    match (i % 2, j % 2) {
        (0, 0) => 0,
        (1, 0) => 1,
        (1, 1) => 2,
        _ => 3,
    }
}

/// Rule of the flexible Lattès-type map scaling the square pillow by `a` horizontally
/// and `b` vertically. Degree `a * b`, four postcritical points at the corners.
pub fn checkerboard(a: u32, b: u32) -> Result<SubdivisionRule> {
    if a == 0 || b == 0 || a.saturating_mul(b) < 2 {
        return Err(Error::DegenerateRule(format!("checkerboard {a}x{b} has degree below 2")));
    }
    let on_boundary = |i: u32, j: u32| i == 0 || i == a || j == 0 || j == b;

    // Boundary grid points are shared by both sheets; sheet 0 is the front.
    let mut vid: HashMap<(u32, u32, u32), u32> = HashMap::new();
    let mut vertices = Vec::new();
    let mut vertex = |sheet: u32, i: u32, j: u32, vertices: &mut Vec<RuleVertex>| -> u32 {
        let key = if on_boundary(i, j) { (2, i, j) } else { (sheet, i, j) };
        *vid.entry(key).or_insert_with(|| {
            vertices.push(RuleVertex { label: corner(i, j) });
            vertices.len() as u32 - 1
        })
    };

    let mut eid: HashMap<(bool, u32, u32, u32), u32> = HashMap::new();
    let mut edges = Vec::new();
    // Horizontal edge from (i, j) to (i + 1, j), or vertical from (i, j) to (i, j + 1).
    let mut edge = |horizontal: bool, sheet: u32, i: u32, j: u32, ends: [u32; 2], edges: &mut Vec<RuleEdge>| -> u32 {
        let shared = if horizontal { j == 0 || j == b } else { i == 0 || i == a };
        let key = (horizontal, if shared { 2 } else { sheet }, i, j);
        *eid.entry(key).or_insert_with(|| {
            let image = if horizontal {
                if j % 2 == 0 { 0 } else { 2 }
            } else if i % 2 == 1 {
                1
            } else {
                3
            };
            let forward = corner(i, j) == image;
            edges.push(RuleEdge { ends, forward, image });
            edges.len() as u32 - 1
        })
    };

    let mut tiles = Vec::new();
    for sheet in 0..2u32 {
        for j in 0..b {
            for i in 0..a {
                let v00 = vertex(sheet, i, j, &mut vertices);
                let v10 = vertex(sheet, i + 1, j, &mut vertices);
                let v11 = vertex(sheet, i + 1, j + 1, &mut vertices);
                let v01 = vertex(sheet, i, j + 1, &mut vertices);
                let bottom = edge(true, sheet, i, j, [v00, v10], &mut edges);
                let top = edge(true, sheet, i, j + 1, [v01, v11], &mut edges);
                let left = edge(false, sheet, i, j, [v00, v01], &mut edges);
                let right = edge(false, sheet, i + 1, j, [v10, v11], &mut edges);
                let even = (i + j) % 2 == 0;
                let (boundary, color, location) = if sheet == 0 {
                    let c = if even { Color::White } else { Color::Black };
                    (vec![v00, bottom, v10, right, v11, top, v01, left], c, Color::White)
                } else {
                    let c = if even { Color::Black } else { Color::White };
                    (vec![v00, left, v01, top, v11, right, v10, bottom], c, Color::Black)
                };
                tiles.push(RuleTile { boundary, color, location });
            }
        }
    }

    let bv = |i: u32, j: u32| vid[&(2, i, j)];
    let be = |horizontal: bool, i: u32, j: u32| eid[&(horizontal, 2, i, j)];
    let posts = vec![bv(0, 0), bv(a, 0), bv(a, b), bv(0, b)];
    let curve_edges = vec![
        (0..a).map(|i| be(true, i, 0)).collect(),
        (0..b).map(|j| be(false, a, j)).collect(),
        (0..a).rev().map(|i| be(true, i, b)).collect(),
        (0..b).rev().map(|j| be(false, 0, j)).collect(),
    ];

    let mut rule = SubdivisionRule {
        m: 4,
        d: a * b,
        vertices,
        edges,
        tiles,
        curve: Curve { edges: curve_edges, posts },
    };
    rule.normalize();
    Ok(rule)
}

/// Rule of the real quadratic map `z -> 1 - 2/z^2` with the extended real line as curve.
///
/// Postcritical points -1, 1 and infinity; the upper half plane is the white 0-tile.
pub fn real_quadratic() -> SubdivisionRule {
    // Vertices: -1, 0, 1, infinity.
    let (a, b, c, d) = (0, 1, 2, 3);
    let vertices = [0, 2, 0, 1].iter().map(|&label| RuleVertex { label }).collect();
    let e = |ends: [u32; 2], image: u32, forward: bool| RuleEdge { ends, forward, image };
    let edges = vec![
        e([a, b], 2, false), // [-1, 0]
        e([b, c], 2, true),  // [0, 1]
        e([c, d], 0, true),  // [1, inf]
        e([d, a], 0, false), // [inf, -1]
        e([b, d], 1, false), // upper imaginary axis
        e([b, d], 1, false), // lower imaginary axis
    ];
    let t = |boundary: Vec<u32>, color, location| RuleTile { boundary, color, location };
    let tiles = vec![
        t(vec![b, 1, c, 2, d, 4], Color::White, Color::White),
        t(vec![b, 4, d, 3, a, 0], Color::Black, Color::White),
        t(vec![b, 0, a, 3, d, 5], Color::White, Color::Black),
        t(vec![b, 5, d, 2, c, 1], Color::Black, Color::Black),
    ];
    let mut rule = SubdivisionRule {
        m: 3,
        d: 2,
        vertices,
        edges,
        tiles,
        curve: Curve { edges: vec![vec![0, 1], vec![2], vec![3]], posts: vec![a, c, d] },
    };
    rule.normalize();
    rule
}

pub fn bundled_names() -> &'static [&'static str] {
    &["lattes2x2", "lattes3x3", "quadratic3"]
}

/// Looks up a bundled rule by name.
pub fn bundled(name: &str) -> Option<SubdivisionRule> {
    match name {
        "lattes2x2" => checkerboard(2, 2).ok(),
        "lattes3x3" => checkerboard(3, 3).ok(),
        "quadratic3" => Some(real_quadratic()),
        _ => None,
    }
}
