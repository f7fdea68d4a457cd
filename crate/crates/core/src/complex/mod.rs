//! Cell complexes of every level and the hierarchy relating them.
//!
//! A cell of level `n + 1` is identified by the pair `(c, z)` of a 1-cell `c` and a level-`n`
//! cell `z` whose carrying 0-cell equals the image of `c`; it is the lift of `z` through `c`
//! and has the dimension of `z`. Ids are the positions of these pairs in lexicographic
//! order, so every build of a level is identical.

mod build;
mod check;
mod hierarchy;
mod iterate;
mod query;

pub use check::check_complex;
pub use hierarchy::{Hierarchy, DEFAULT_LEVEL_CAP};
pub use iterate::{complex_to_rule, iterate_rule};
pub use query::{
    count_white_tiles_in, cover_edge, find_expansion_level, flower, joins_opposite_sides,
    local_degree_at, tile_class_counts, white_tile_formula, EdgeCover, Flower, TileClassCounts,
};

use crate::cells::{CellId, Color, Dim};
use serde::{Deserialize, Serialize};

/// Identifying pair of a cell above level 0: the 1-cell it lies in and its image one level down.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Key {
    pub cell1: CellId,
    pub below: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexCell {
    pub carrier: CellId,
    pub key: Option<Key>,
    /// The 0-vertex reached after `level` iterations.
    pub label: u32,
    pub parent: Option<CellId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCell {
    pub carrier: CellId,
    /// Ordered so that `ends[k]` maps onto end `k` of the image edge.
    pub ends: [u32; 2],
    pub key: Option<Key>,
    /// The 0-edge reached after `level` iterations.
    pub label: u32,
    pub parent: Option<CellId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileCell {
    pub color: Color,
    /// Counterclockwise; `edges[k]` joins `vertices[k]` and `vertices[k + 1]`.
    pub edges: Vec<u32>,
    pub key: Option<Key>,
    pub location: Color,
    pub parent: Option<u32>,
    pub vertices: Vec<u32>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct KeyIndex {
    /// `[dim][code of carrier]`: ids sharing a carrier, ascending.
    pub groups: [Vec<Vec<u32>>; 3],
    /// `[dim][id]`: position within its carrier group.
    pub rank: [Vec<u32>; 3],
    /// `[dim][global 1-cell index]`: first id whose key uses that 1-cell.
    pub block_start: [Vec<u32>; 3],
}

/// The level-`level` complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellComplex {
    pub edges: Vec<EdgeCell>,
    pub level: u32,
    pub m: u32,
    /// Vertex sitting at each 0-vertex.
    pub posts: Vec<u32>,
    pub tiles: Vec<TileCell>,
    pub vertices: Vec<VertexCell>,
    #[serde(skip)]
    pub(crate) index: KeyIndex,
}

impl CellComplex {
    pub fn count(&self, dim: Dim) -> usize {
        match dim {
            Dim::Vertex => self.vertices.len(),
            Dim::Edge => self.edges.len(),
            Dim::Tile => self.tiles.len(),
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.tiles.len() as i64
    }

    pub fn key(&self, c: CellId) -> Option<Key> {
        match c.dim {
            Dim::Vertex => self.vertices[c.id as usize].key,
            Dim::Edge => self.edges[c.id as usize].key,
            Dim::Tile => self.tiles[c.id as usize].key,
        }
    }

    pub fn carrier(&self, c: CellId) -> CellId {
        match c.dim {
            Dim::Vertex => self.vertices[c.id as usize].carrier,
            Dim::Edge => self.edges[c.id as usize].carrier,
            Dim::Tile => CellId::tile(self.tiles[c.id as usize].location.index()),
        }
    }

    /// The level-(`level - 1`) cell whose interior contains this cell's interior.
    pub fn parent(&self, c: CellId) -> Option<CellId> {
        match c.dim {
            Dim::Vertex => self.vertices[c.id as usize].parent,
            Dim::Edge => self.edges[c.id as usize].parent,
            Dim::Tile => self.tiles[c.id as usize].parent.map(CellId::tile),
        }
    }

    /// The image cell one level down; `None` at level 0.
    pub fn image(&self, c: CellId) -> Option<CellId> {
        self.key(c).map(|k| CellId::new(c.dim, k.below))
    }

    /// The 0-cell reached after `level` iterations.
    pub fn image0(&self, c: CellId) -> CellId {
        match c.dim {
            Dim::Vertex => CellId::vertex(self.vertices[c.id as usize].label),
            Dim::Edge => CellId::edge(self.edges[c.id as usize].label),
            Dim::Tile => CellId::tile(self.tiles[c.id as usize].color.index()),
        }
    }

    /// Cells on the closed boundary of a cell, excluding the cell itself.
    pub fn boundary(&self, c: CellId) -> Vec<CellId> {
        match c.dim {
            Dim::Vertex => Vec::new(),
            Dim::Edge => self.edges[c.id as usize].ends.iter().map(|&v| CellId::vertex(v)).collect(),
            Dim::Tile => {
                let t = &self.tiles[c.id as usize];
                t.vertices.iter().map(|&v| CellId::vertex(v)).chain(t.edges.iter().map(|&e| CellId::edge(e))).collect()
            }
        }
    }

    pub fn contains(&self, c: CellId) -> bool {
        (c.id as usize) < self.count(c.dim)
    }

    /// Tiles incident to each vertex.
    pub fn vertex_tiles(&self) -> Vec<Vec<u32>> {
        let mut inc = vec![Vec::new(); self.vertices.len()];
        for (t, tile) in self.tiles.iter().enumerate() {
            for &v in &tile.vertices {
                inc[v as usize].push(t as u32);
            }
        }
        inc
    }

    /// Edges incident to each vertex.
    pub fn vertex_edges(&self) -> Vec<Vec<u32>> {
        let mut inc = vec![Vec::new(); self.vertices.len()];
        for (e, edge) in self.edges.iter().enumerate() {
            for &v in &edge.ends {
                inc[v as usize].push(e as u32);
            }
        }
        inc
    }

    /// Tiles on either side of each edge.
    pub fn edge_tiles(&self) -> Vec<Vec<u32>> {
        let mut inc = vec![Vec::new(); self.edges.len()];
        for (t, tile) in self.tiles.iter().enumerate() {
            for &e in &tile.edges {
                inc[e as usize].push(t as u32);
            }
        }
        inc
    }

    /// Edges along each 0-edge, in order from its tail, with the vertices between them.
    pub fn curve_paths(&self) -> Vec<(Vec<u32>, Vec<u32>)> {
        let m = self.m as usize;
        let inc = self.vertex_edges();
        (0..m)
            .map(|j| {
                let on = |e: u32| self.edges[e as usize].carrier == CellId::edge(j as u32);
                let stop = self.posts[(j + 1) % m];
                let mut at = self.posts[j];
                let mut verts = vec![at];
                let mut path = Vec::new();
                let mut prev = u32::MAX;
                while at != stop || path.is_empty() {
                    let Some(&e) = inc[at as usize].iter().find(|&&e| e != prev && on(e)) else { break };
                    let ends = self.edges[e as usize].ends;
                    at = if ends[0] == at { ends[1] } else { ends[0] };
                    prev = e;
                    path.push(e);
                    verts.push(at);
                }
                (path, verts)
            })
            .collect()
    }

    pub(crate) fn carrier_code(&self, c: CellId) -> usize {
        carrier_code(self.m, c)
    }
}

pub(crate) fn carrier_code(m: u32, c: CellId) -> usize {
    let m = m as usize;
    match c.dim {
        Dim::Vertex => c.id as usize,
        Dim::Edge => m + c.id as usize,
        Dim::Tile => 2 * m + c.id as usize,
    }
}
