//! Points of the sphere as addresses, and the action of the map on them.
//!
//! A point is recorded by its itinerary: the 1-cells whose interiors contain `x, f(x), f²(x), …`.
//! The first `i` letters determine the level-`i` cell whose interior contains `x`, so an address
//! of depth `D` pins the point down to a level-`D` cell. Applying the map drops the first letter;
//! a preimage prepends one.

use crate::cells::{CellId, CellRef, Dim};
use crate::complex::Hierarchy;
use crate::error::{Error, Result};
use crate::rulekit::RuleCells;
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;

/// Depth used when a caller does not choose one.
pub const DEFAULT_DEPTH: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PointAddress {
    root: CellId,
    letters: Vec<CellId>,
}

impl PointAddress {
    /// Checks admissibility: each letter lies over the image of the one before it.
    pub fn new(cells: &RuleCells, root: CellId, letters: Vec<CellId>) -> Result<Self> {
        let in_range = |c: &CellId| (c.id as usize) < cells.count(c.dim);
        if root.id as usize >= match root.dim {
            Dim::Tile => 2,
            _ => cells.m as usize,
        } {
            return Err(Error::InvalidCell(format!("{root} is not a 0-cell")));
        }
        if let Some(k) = letters.iter().position(|c| !in_range(c)) {
            return Err(Error::InvalidCell(format!("letter {k} is not a 1-cell")));
        }
        if let Some(&first) = letters.first() {
            if cells.carrier(first) != root {
                return Err(Error::InvalidCell("first letter does not lie in the root cell".into()));
            }
        }
        for (k, w) in letters.windows(2).enumerate() {
            if cells.image(w[0]) != cells.carrier(w[1]) {
                return Err(Error::InvalidCell(format!("letters {k} and {} are not admissible", k + 1)));
            }
        }
        Ok(PointAddress { root, letters })
    }

    pub(crate) fn from_parts_unchecked(root: CellId, letters: Vec<CellId>) -> Self {
        PointAddress { root, letters }
    }

    /// The 0-cell whose interior contains the point.
    pub fn root(&self) -> CellId {
        self.root
    }

    pub fn letters(&self) -> &[CellId] {
        &self.letters
    }

    pub fn depth(&self) -> usize {
        self.letters.len()
    }

    /// Dimension of the smallest known cell containing the point.
    pub fn dim(&self) -> Dim {
        self.letters.last().map_or(self.root.dim, |c| c.dim)
    }

    /// Whether every known cell is a tile.
    pub fn is_generic(&self) -> bool {
        self.root.dim == Dim::Tile && self.letters.iter().all(|c| c.dim == Dim::Tile)
    }

    /// The level-`level` cell whose interior contains the point.
    pub fn cell(&self, hier: &Hierarchy, level: usize) -> Result<CellRef> {
        if level > self.depth() {
            return Err(Error::DepthExhausted { depth: self.depth(), needed: level });
        }
        if level == 0 {
            return Ok(self.root.at(0));
        }
        hier.cell_of_itinerary(&self.letters[..level])
    }

    /// Cells of levels `0..=upto`.
    pub fn cells(&self, hier: &Hierarchy, upto: usize) -> Result<Vec<CellRef>> {
        (0..=upto).map(|k| self.cell(hier, k)).collect()
    }

    pub fn truncated(&self, depth: usize) -> Self {
        PointAddress { root: self.root, letters: self.letters[..depth.min(self.depth())].to_vec() }
    }

    /// Itinerary words: `dim.id` letters separated by spaces.
    pub fn itinerary_string(&self) -> String {
        let mut s = format!("{}", self.root);
        for c in &self.letters {
            s.push(' ');
            s.push_str(&c.to_string());
        }
        s
    }

    /// Address of the points of a level-`n` cell's interior, to depth `n`.
    pub fn of_cell(hier: &Hierarchy, c: CellRef) -> Result<Self> {
        let cx = hier.check_cell(c)?;
        let root = cx.carrier(c.cell());
        let letters = hier.itinerary(c)?;
        Ok(PointAddress { root, letters })
    }

    /// Address of a level-`n` vertex to the given depth. Past level `n` the point
    /// follows the postcritical orbit.
    pub fn of_vertex(hier: &Hierarchy, v: CellRef, depth: usize) -> Result<Self> {
        if v.dim != Dim::Vertex {
            return Err(Error::InvalidCell(format!("{v} is not a vertex")));
        }
        let cx = hier.check_cell(v)?;
        let cells = hier.cells();
        let mut addr = Self::of_cell(hier, v)?;
        let mut j = cx.vertices[v.id as usize].label;
        while addr.letters.len() < depth {
            let p = cells.posts[j as usize];
            addr.letters.push(CellId::vertex(p));
            j = cells.vertex_label[p as usize];
        }
        addr.letters.truncate(depth.max(v.level as usize));
        Ok(addr)
    }

    /// Periodic address repeating a level-`n` cell's itinerary up to `depth` letters.
    pub fn periodic(hier: &Hierarchy, c: CellRef, depth: usize) -> Result<Self> {
        let cx = hier.check_cell(c)?;
        let root = cx.carrier(c.cell());
        let word = hier.itinerary(c)?;
        if word.is_empty() {
            return Err(Error::InvalidArgument("a periodic address needs a cell above level 0".into()));
        }
        let cells = hier.cells();
        if cells.image(*word.last().expect("nonempty")) != cells.carrier(word[0]) {
            return Err(Error::InvalidCell(format!("{c} does not map back over itself")));
        }
        let letters = word.iter().cycle().take(depth).copied().collect();
        Ok(PointAddress { root, letters })
    }
}

impl fmt::Display for PointAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.itinerary_string())
    }
}

/// Image of a point: its itinerary shifted by one.
pub fn apply_map(cells: &RuleCells, p: &PointAddress) -> Result<PointAddress> {
    let Some((&first, rest)) = p.letters.split_first() else {
        return Err(Error::DepthExhausted { depth: 0, needed: 1 });
    };
    Ok(PointAddress { root: cells.image(first), letters: rest.to_vec() })
}

/// The preimages of a point with the local degree of the map at each; the degrees sum to `d`.
pub fn preimages(cells: &RuleCells, p: &PointAddress) -> Vec<(PointAddress, u32)> {
    letters_over(cells, p.root)
        .map(|y| {
            let mut letters = Vec::with_capacity(p.depth() + 1);
            letters.push(y);
            letters.extend_from_slice(&p.letters);
            (PointAddress { root: cells.carrier(y), letters }, cells.local_degree(y))
        })
        .collect()
}

/// 1-cells mapping onto a 0-cell.
pub(crate) fn letters_over(cells: &RuleCells, target: CellId) -> impl Iterator<Item = CellId> + '_ {
    (0..cells.count(target.dim) as u32).map(move |id| CellId::new(target.dim, id)).filter(move |&c| cells.image(c) == target)
}

/// Local degree of `f^n` at a point, the product of the degrees along its first `n` letters.
pub fn local_degree_along_orbit(cells: &RuleCells, p: &PointAddress, n: usize) -> Result<u64> {
    if n > p.depth() {
        return Err(Error::DepthExhausted { depth: p.depth(), needed: n });
    }
    Ok(p.letters[..n].iter().map(|&c| u64::from(cells.local_degree(c))).product())
}

/// Critical points and the orbit structure of the postcritical set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalStructure {
    /// Critical 1-vertices with their local degrees.
    pub critical: Vec<(u32, u32)>,
    /// The map restricted to 0-vertices.
    pub post_map: Vec<u32>,
    /// Periodic cycles of `post_map`.
    pub cycles: Vec<Vec<u32>>,
    /// Critical points that are periodic, as 0-vertex and period.
    pub periodic_critical: Vec<(u32, u32)>,
    pub has_periodic_critical: bool,
    /// Product of the periods of the periodic critical points (1 when there are none).
    pub kappa: u64,
}

pub fn analyze_critical(cells: &RuleCells) -> CriticalStructure {
    let m = cells.m as usize;
    let critical: Vec<(u32, u32)> = cells
        .vertex_degree
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 1)
        .map(|(v, &k)| (v as u32, k))
        .collect();
    let post_map: Vec<u32> = cells.posts.iter().map(|&p| cells.vertex_label[p as usize]).collect();
    let period = |j: u32| -> Option<u32> {
        let mut x = post_map[j as usize];
        for k in 1..=m as u32 {
            if x == j {
                return Some(k);
            }
            x = post_map[x as usize];
        }
        None
    };
    let mut cycles = Vec::new();
    let mut seen = BTreeSet::new();
    for j in 0..m as u32 {
        if period(j).is_some() && !seen.contains(&j) {
            let mut cyc = vec![j];
            seen.insert(j);
            let mut x = post_map[j as usize];
            while x != j {
                seen.insert(x);
                cyc.push(x);
                x = post_map[x as usize];
            }
            cycles.push(cyc);
        }
    }
    let periodic_critical: Vec<(u32, u32)> = critical
        .iter()
        .filter_map(|&(v, _)| match cells.vertex_carrier[v as usize] {
            c if c.dim == Dim::Vertex => period(c.id).map(|p| (c.id, p)),
            _ => None,
        })
        .collect();
    let kappa = periodic_critical.iter().map(|&(_, p)| u64::from(p)).product();
    CriticalStructure {
        critical,
        post_map,
        cycles,
        has_periodic_critical: !periodic_critical.is_empty(),
        periodic_critical,
        kappa,
    }
}
