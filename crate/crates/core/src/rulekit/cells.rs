use super::SubdivisionRule;
use crate::cells::{CellId, Color, Dim};
use crate::error::{Error, Result};

/// Per-cell data derived from a rule: the 0-cell carrying each 1-cell, edge ends ordered
/// to match their image, and for each tile the boundary cell over each 0-vertex and 0-edge.
#[derive(Clone, Debug)]
pub struct RuleCells {
    pub m: u32,
    pub d: u32,
    pub vertex_label: Vec<u32>,
    pub vertex_carrier: Vec<CellId>,
    pub edge_image: Vec<u32>,
    /// `ends[k]` maps to 0-vertex `image + k`.
    pub edge_ends: Vec<[u32; 2]>,
    pub edge_carrier: Vec<CellId>,
    pub tile_color: Vec<Color>,
    pub tile_location: Vec<Color>,
    pub tile_vertices: Vec<Vec<u32>>,
    pub tile_edges: Vec<Vec<u32>>,
    /// `[tile][j]`: boundary vertex over 0-vertex `j`.
    pub vertex_over: Vec<Vec<u32>>,
    /// `[tile][j]`: boundary edge over 0-edge `j`.
    pub edge_over: Vec<Vec<u32>>,
    /// Vertices along each 0-edge from its tail to its head, endpoints included.
    pub curve_vertices: Vec<Vec<u32>>,
    /// The 1-vertex at each 0-vertex.
    pub posts: Vec<u32>,
    /// Local degree of the map at each 1-vertex.
    pub vertex_degree: Vec<u32>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidRule(msg.into())
}

/// Walks the curve edges of 0-edge `j`, returning the vertices passed.
pub(crate) fn walk_curve(rule: &SubdivisionRule, j: usize) -> std::result::Result<Vec<u32>, String> {
    let m = rule.m as usize;
    let (Some(&start), Some(&stop), Some(path)) =
        (rule.curve.posts.get(j), rule.curve.posts.get((j + 1) % m), rule.curve.edges.get(j))
    else {
        return Err(format!("curve data for 0-edge {j} is missing"));
    };
    let mut at = start;
    let mut seen = vec![at];
    for &e in path {
        let edge = rule.edges.get(e as usize).ok_or_else(|| format!("curve edge {e} does not exist"))?;
        at = if edge.ends[0] == at {
            edge.ends[1]
        } else if edge.ends[1] == at {
            edge.ends[0]
        } else {
            return Err(format!("curve edge {e} does not continue the path along 0-edge {j} at vertex {at}"));
        };
        seen.push(at);
    }
    if at != stop {
        return Err(format!("curve path along 0-edge {j} ends at vertex {at}, not at post {stop}"));
    }
    Ok(seen)
}

impl RuleCells {
    pub fn new(rule: &SubdivisionRule) -> Result<Self> {
        let m = rule.m as usize;
        let [nv, ne, nt] = rule.cell_counts();
        if rule.curve.posts.len() != m || rule.curve.edges.len() != m {
            return Err(bad("curve must list one post and one edge path per 0-cell"));
        }

        let mut vertex_carrier: Vec<Option<CellId>> = vec![None; nv];
        let mut edge_carrier: Vec<Option<CellId>> = vec![None; ne];
        let mut curve_vertices = Vec::with_capacity(m);
        for j in 0..m {
            let seen = walk_curve(rule, j).map_err(bad)?;
            for &v in &seen[1..seen.len() - 1] {
                vertex_carrier[v as usize] = Some(CellId::edge(j as u32));
            }
            for &e in &rule.curve.edges[j] {
                edge_carrier[e as usize] = Some(CellId::edge(j as u32));
            }
            curve_vertices.push(seen);
        }
        for (j, &p) in rule.curve.posts.iter().enumerate() {
            vertex_carrier[p as usize] = Some(CellId::vertex(j as u32));
        }

        let mut tile_vertices = Vec::with_capacity(nt);
        let mut tile_edges = Vec::with_capacity(nt);
        let mut vertex_over = Vec::with_capacity(nt);
        let mut edge_over = Vec::with_capacity(nt);
        for (t, tile) in rule.tiles.iter().enumerate() {
            let vs: Vec<u32> = tile.vertices().collect();
            let es: Vec<u32> = tile.edges().collect();
            if vs.len() != m {
                return Err(bad(format!("tile {t} is not an {m}-gon")));
            }
            let loc = CellId::tile(tile.location.index());
            let mut vo = vec![u32::MAX; m];
            let mut eo = vec![u32::MAX; m];
            for &v in &vs {
                let j = rule.vertices[v as usize].label as usize;
                if vo[j] != u32::MAX {
                    return Err(bad(format!("tile {t} has two vertices over 0-vertex {j}")));
                }
                vo[j] = v;
                vertex_carrier[v as usize].get_or_insert(loc);
            }
            for &e in &es {
                let j = rule.edges[e as usize].image as usize;
                if eo[j] != u32::MAX {
                    return Err(bad(format!("tile {t} has two edges over 0-edge {j}")));
                }
                eo[j] = e;
                edge_carrier[e as usize].get_or_insert(loc);
            }
            tile_vertices.push(vs);
            tile_edges.push(es);
            vertex_over.push(vo);
            edge_over.push(eo);
        }

        let vertex_carrier = vertex_carrier
            .into_iter()
            .enumerate()
            .map(|(v, c)| c.ok_or_else(|| bad(format!("vertex {v} lies on no tile"))))
            .collect::<Result<Vec<_>>>()?;
        let edge_carrier = edge_carrier
            .into_iter()
            .enumerate()
            .map(|(e, c)| c.ok_or_else(|| bad(format!("edge {e} lies on no tile"))))
            .collect::<Result<Vec<_>>>()?;
        let edge_ends = rule
            .edges
            .iter()
            .map(|e| if e.forward { e.ends } else { [e.ends[1], e.ends[0]] })
            .collect();

        Ok(RuleCells {
            m: rule.m,
            d: rule.d,
            vertex_label: rule.vertices.iter().map(|v| v.label).collect(),
            vertex_carrier,
            edge_image: rule.edges.iter().map(|e| e.image).collect(),
            edge_ends,
            edge_carrier,
            tile_color: rule.tiles.iter().map(|t| t.color).collect(),
            tile_location: rule.tiles.iter().map(|t| t.location).collect(),
            tile_vertices,
            tile_edges,
            vertex_over,
            edge_over,
            curve_vertices,
            posts: rule.curve.posts.clone(),
            vertex_degree: Vec::new(),
        }
        .with_degrees())
    }

    fn with_degrees(mut self) -> Self {
        self.vertex_degree = self.vertex_degrees();
        self
    }

    /// Local degree of the map on the interior of a 1-cell.
    pub fn local_degree(&self, c: CellId) -> u32 {
        match c.dim {
            Dim::Vertex => self.vertex_degree[c.id as usize],
            _ => 1,
        }
    }

    pub fn count(&self, dim: Dim) -> usize {
        match dim {
            Dim::Vertex => self.vertex_label.len(),
            Dim::Edge => self.edge_image.len(),
            Dim::Tile => self.tile_color.len(),
        }
    }

    /// The 0-cell a 1-cell maps onto.
    pub fn image(&self, c: CellId) -> CellId {
        match c.dim {
            Dim::Vertex => CellId::vertex(self.vertex_label[c.id as usize]),
            Dim::Edge => CellId::edge(self.edge_image[c.id as usize]),
            Dim::Tile => CellId::tile(self.tile_color[c.id as usize].index()),
        }
    }

    /// The 0-cell whose interior contains the interior of a 1-cell.
    pub fn carrier(&self, c: CellId) -> CellId {
        match c.dim {
            Dim::Vertex => self.vertex_carrier[c.id as usize],
            Dim::Edge => self.edge_carrier[c.id as usize],
            Dim::Tile => CellId::tile(self.tile_location[c.id as usize].index()),
        }
    }

    /// Local degree of the map at a 1-vertex: half the number of incident tiles.
    pub fn vertex_degrees(&self) -> Vec<u32> {
        let mut inc = vec![0u32; self.vertex_label.len()];
        for vs in &self.tile_vertices {
            for &v in vs {
                inc[v as usize] += 1;
            }
        }
        inc.into_iter().map(|k| k / 2).collect()
    }

    /// Face of 1-cell `c` mapping onto 0-cell `target`, which must lie in the image of `c`.
    pub fn face_over(&self, c: CellId, target: CellId) -> Option<CellId> {
        let m = self.m;
        match c.dim {
            Dim::Tile => {
                let t = c.id as usize;
                match target.dim {
                    Dim::Tile => (target.id == self.tile_color[t].index()).then_some(c),
                    Dim::Edge => self.edge_over[t].get(target.id as usize).map(|&e| CellId::edge(e)),
                    Dim::Vertex => self.vertex_over[t].get(target.id as usize).map(|&v| CellId::vertex(v)),
                }
            }
            Dim::Edge => {
                let e = c.id as usize;
                let image = self.edge_image[e];
                match target.dim {
                    Dim::Tile => None,
                    Dim::Edge => (target.id == image).then_some(c),
                    Dim::Vertex => {
                        if target.id == image {
                            Some(CellId::vertex(self.edge_ends[e][0]))
                        } else if target.id == (image + 1) % m {
                            Some(CellId::vertex(self.edge_ends[e][1]))
                        } else {
                            None
                        }
                    }
                }
            }
            Dim::Vertex => (target == self.image(c)).then_some(c),
        }
    }
}
