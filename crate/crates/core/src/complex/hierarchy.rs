use super::build::{level0, rebuild_index, subdivide};
use super::CellComplex;
use crate::cells::{CellId, CellRef, Dim};
use crate::error::{Error, Result};
use crate::rulekit::{validate, RuleCells, SubdivisionRule};

/// Deepest level built unless raised with [`Hierarchy::with_cap`].
pub const DEFAULT_LEVEL_CAP: u32 = 10;

/// The complexes of levels `0..=top` for one rule, built on demand.
#[derive(Clone, Debug)]
pub struct Hierarchy {
    rule: SubdivisionRule,
    cells: RuleCells,
    levels: Vec<CellComplex>,
    cap: u32,
}

impl Hierarchy {
    /// Validates the rule and builds levels 0 and 1.
    pub fn new(rule: SubdivisionRule) -> Result<Self> {
        let report = validate(&rule);
        if let Some(v) = report.violations.first() {
            return Err(Error::InvalidRule(v.to_string()));
        }
        let cells = RuleCells::new(&rule)?;
        let levels = vec![level0(rule.m)];
        let mut h = Hierarchy { rule, cells, levels, cap: DEFAULT_LEVEL_CAP };
        h.ensure(1)?;
        Ok(h)
    }

    pub fn with_cap(mut self, cap: u32) -> Self {
        self.cap = cap.max(1);
        self
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn rule(&self) -> &SubdivisionRule {
        &self.rule
    }

    pub fn cells(&self) -> &RuleCells {
        &self.cells
    }

    pub fn m(&self) -> u32 {
        self.rule.m
    }

    pub fn d(&self) -> u32 {
        self.rule.d
    }

    /// Highest level currently built.
    pub fn top(&self) -> u32 {
        self.levels.len() as u32 - 1
    }

    /// Builds every level up to `n`.
    pub fn ensure(&mut self, n: u32) -> Result<()> {
        if n > self.cap {
            return Err(Error::LevelCap { requested: n, cap: self.cap });
        }
        while self.top() < n {
            let k = self.levels.len();
            let grand = if k >= 2 { Some(&self.levels[k - 2]) } else { None };
            let next = subdivide(&self.levels[k - 1], grand, &self.cells)?;
            self.levels.push(next);
        }
        Ok(())
    }

    /// Appends a complex loaded from elsewhere; it must be the next level.
    pub fn push_level(&mut self, mut c: CellComplex) -> Result<()> {
        if c.level != self.top() + 1 || c.m != self.rule.m {
            return Err(Error::InvalidArgument(format!("complex of level {} does not follow level {}", c.level, self.top())));
        }
        rebuild_index(&mut c, &self.cells);
        self.levels.push(c);
        Ok(())
    }

    /// Drops levels above `n` (levels 0 and 1 are kept).
    pub fn truncate(&mut self, n: u32) {
        self.levels.truncate(n.max(1) as usize + 1);
    }

    pub fn level(&self, n: u32) -> Result<&CellComplex> {
        self.levels.get(n as usize).ok_or(Error::LevelUnavailable { requested: n, available: self.top() })
    }

    pub fn levels(&self) -> &[CellComplex] {
        &self.levels
    }

    pub fn check_cell(&self, c: CellRef) -> Result<&CellComplex> {
        let cx = self.level(c.level)?;
        if !cx.contains(c.cell()) {
            return Err(Error::InvalidCell(format!("{c} does not exist")));
        }
        Ok(cx)
    }

    /// The level-`k` ancestor of a cell, for `k <= c.level`.
    pub fn ancestor(&self, c: CellRef, k: u32) -> Result<CellRef> {
        self.check_cell(c)?;
        let mut cur = c.cell();
        for n in (k + 1..=c.level).rev() {
            cur = self.level(n)?.parent(cur).expect("cells above level 0 have parents");
        }
        Ok(cur.at(k))
    }

    /// The 1-cells containing `X, f(X), ..., f^{n-1}(X)` for a level-`n` cell `X`.
    pub fn itinerary(&self, c: CellRef) -> Result<Vec<CellId>> {
        self.check_cell(c)?;
        let mut out = Vec::with_capacity(c.level as usize);
        let mut cur = c.cell();
        for n in (1..=c.level).rev() {
            let k = self.level(n)?.key(cur).expect("cells above level 0 have keys");
            out.push(k.cell1);
            cur = CellId::new(cur.dim, k.below);
        }
        Ok(out)
    }

    /// Inverse of [`Hierarchy::itinerary`]: the level-`letters.len()` cell with that itinerary.
    pub fn cell_of_itinerary(&self, letters: &[CellId]) -> Result<CellRef> {
        let n = letters.len() as u32;
        let Some(&last) = letters.last() else {
            return Err(Error::InvalidArgument("empty itinerary has no cell".into()));
        };
        self.level(n)?;
        let invalid = |k: usize| Error::InvalidCell(format!("itinerary is not admissible at letter {k}"));
        if (last.id as usize) >= self.cells.count(last.dim) {
            return Err(invalid(n as usize - 1));
        }
        let dim = last.dim;
        let mut cur = last.id;
        for (k, &a) in letters.iter().enumerate().rev().skip(1) {
            let level = n - 1 - k as u32;
            let below = self.level(level)?;
            let here = self.level(level + 1)?;
            let z = CellId::new(dim, cur);
            if a.dim < dim || (a.id as usize) >= self.cells.count(a.dim) || self.cells.image(a) != below.carrier(z) {
                return Err(invalid(k));
            }
            cur = here.id_from_rank(dim, a, below.rank(z), &self.cells).ok_or_else(|| invalid(k))?;
        }
        Ok(CellRef { level: n, dim, id: cur })
    }

    /// Level-`level` cells inside the closed cell `c`, for `level >= c.level`.
    pub fn descendants(&self, c: CellRef, level: u32) -> Result<Vec<CellId>> {
        let cx = self.check_cell(c)?;
        let mut current = vec![c.cell()];
        current.extend(cx.boundary(c.cell()));
        for n in c.level + 1..=level {
            let next_cx = self.level(n)?;
            let mut marks: [Vec<bool>; 3] = Dim::ALL.map(|d| vec![false; self.level(n - 1).map(|p| p.count(d)).unwrap_or(0)]);
            for x in &current {
                marks[x.dim.index()][x.id as usize] = true;
            }
            let mut next = Vec::new();
            for dim in Dim::ALL {
                for id in 0..next_cx.count(dim) as u32 {
                    let cell = CellId::new(dim, id);
                    let p = next_cx.parent(cell).expect("parent");
                    if marks[p.dim.index()][p.id as usize] {
                        next.push(cell);
                    }
                }
            }
            current = next;
        }
        Ok(current)
    }
}
