//! Subdivision rules: file format, bundled examples, validation and summary statistics.
//!
//! A rule records the level-1 complex of a map together with the data describing how
//! each 1-cell maps onto the two-tile level-0 complex. The level-0 complex has a white
//! and a black tile, `m` vertices and `m` edges; 0-edge `j` runs from 0-vertex `j` to
//! 0-vertex `j + 1` along the invariant curve, which keeps the white tile on its left.

mod cells;
mod generate;
mod schema;
mod stats;
mod validate;

pub use cells::RuleCells;
pub use generate::{bundled, bundled_names, checkerboard, real_quadratic};
pub use schema::{parse_rule, parse_rule_raw, save_rule};
pub use stats::{rule_stats, winding_degree, RuleStats};
pub use validate::{validate, ValidationReport, Violation, ViolationKind};

use crate::cells::Color;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleVertex {
    /// 0-vertex this 1-vertex maps to.
    pub label: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleEdge {
    pub ends: [u32; 2],
    /// True when `ends[0]` maps to the tail of the image 0-edge.
    pub forward: bool,
    /// 0-edge this 1-edge maps onto.
    pub image: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleTile {
    /// Counterclockwise cycle `[v0, e0, v1, e1, ...]`, edge `e_k` joining `v_k` and `v_{k+1}`.
    pub boundary: Vec<u32>,
    pub color: Color,
    /// The 0-tile containing this tile.
    pub location: Color,
}

impl RuleTile {
    pub fn vertices(&self) -> impl Iterator<Item = u32> + '_ {
        self.boundary.iter().step_by(2).copied()
    }
    pub fn edges(&self) -> impl Iterator<Item = u32> + '_ {
        self.boundary.iter().skip(1).step_by(2).copied()
    }
}

/// The invariant curve at level 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Curve {
    /// Edges subdividing each 0-edge, listed from its tail to its head.
    pub edges: Vec<Vec<u32>>,
    /// The 1-vertex sitting at each 0-vertex.
    pub posts: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdivisionRule {
    pub m: u32,
    pub d: u32,
    pub vertices: Vec<RuleVertex>,
    pub edges: Vec<RuleEdge>,
    pub tiles: Vec<RuleTile>,
    pub curve: Curve,
}

impl SubdivisionRule {
    /// Renumbers vertices and edges so that curve cells come first, each group ordered by
    /// first appearance in the tile cycles. Idempotent.
    pub fn normalize(&mut self) {
        let nv = self.vertices.len();
        let ne = self.edges.len();
        let mut v_curve = vec![false; nv];
        let mut e_curve = vec![false; ne];
        for &p in &self.curve.posts {
            if let Some(x) = v_curve.get_mut(p as usize) {
                *x = true;
            }
        }
        for &e in self.curve.edges.iter().flatten() {
            if let Some(x) = e_curve.get_mut(e as usize) {
                *x = true;
            }
            if let Some(edge) = self.edges.get(e as usize) {
                for &v in &edge.ends {
                    if let Some(x) = v_curve.get_mut(v as usize) {
                        *x = true;
                    }
                }
            }
        }
        let mut v_first = vec![usize::MAX; nv];
        let mut e_first = vec![usize::MAX; ne];
        let mut pos = 0usize;
        for t in &self.tiles {
            for (k, &c) in t.boundary.iter().enumerate() {
                let slot = if k % 2 == 0 { v_first.get_mut(c as usize) } else { e_first.get_mut(c as usize) };
                if let Some(s) = slot {
                    if *s == usize::MAX {
                        *s = pos;
                    }
                }
                pos += 1;
            }
        }
        let order = |flags: &[bool], first: &[usize]| -> Vec<u32> {
            let mut ids: Vec<usize> = (0..flags.len()).collect();
            ids.sort_by_key(|&i| (!flags[i], first[i], i));
            let mut new_id = vec![0u32; flags.len()];
            for (new, &old) in ids.iter().enumerate() {
                new_id[old] = new as u32;
            }
            new_id
        };
        let vmap = order(&v_curve, &v_first);
        let emap = order(&e_curve, &e_first);
        let rv = |v: u32| vmap.get(v as usize).copied().unwrap_or(v);
        let re = |e: u32| emap.get(e as usize).copied().unwrap_or(e);

        let mut vertices = self.vertices.clone();
        for (old, v) in self.vertices.iter().enumerate() {
            vertices[vmap[old] as usize] = v.clone();
        }
        let mut edges = self.edges.clone();
        for (old, e) in self.edges.iter().enumerate() {
            edges[emap[old] as usize] = RuleEdge { ends: [rv(e.ends[0]), rv(e.ends[1])], ..e.clone() };
        }
        for t in &mut self.tiles {
            for (k, c) in t.boundary.iter_mut().enumerate() {
                *c = if k % 2 == 0 { rv(*c) } else { re(*c) };
            }
        }
        for p in &mut self.curve.posts {
            *p = rv(*p);
        }
        for e in self.curve.edges.iter_mut().flatten() {
            *e = re(*e);
        }
        self.vertices = vertices;
        self.edges = edges;
    }

    /// Number of level-1 cells in each dimension.
    pub fn cell_counts(&self) -> [usize; 3] {
        [self.vertices.len(), self.edges.len(), self.tiles.len()]
    }
}
