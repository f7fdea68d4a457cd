//! The measure of maximal entropy on tile algebras, the Markov operator `Q` and its adjoint,
//! equidistribution measures, and the random backward orbit.

use crate::cells::{CellId, Color, Dim};
use crate::complex::Hierarchy;
use crate::dynamics::{analyze_critical, letters_over, preimages, PointAddress, DEFAULT_DEPTH};
use crate::error::{Error, Result};
use crate::periodic::{enumerate_fixed_points, preperiodic_census, Locus};
use crate::rulekit::{rule_stats, RuleCells};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Window of coarse letters kept by the backward-orbit sampler.
pub const SAMPLER_WINDOW: usize = 32;

fn ratio(n: i64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn pow(d: u32, k: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(d).pow(k))
}

fn ser_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ser_ratios<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

/// Rational masses on the level-`level` tiles, plus the mass of the 1-skeleton.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TileMeasure {
    pub level: u32,
    #[serde(serialize_with = "ser_ratios")]
    pub masses: Vec<BigRational>,
    #[serde(serialize_with = "ser_ratio")]
    pub skeleton_mass: BigRational,
}

impl TileMeasure {
    pub fn zero(level: u32, tiles: usize) -> Self {
        TileMeasure { level, masses: vec![BigRational::zero(); tiles], skeleton_mass: BigRational::zero() }
    }

    pub fn total(&self) -> BigRational {
        self.masses.iter().fold(self.skeleton_mass.clone(), |acc, x| acc + x)
    }

    /// Masses summed over the level-`k` ancestors, `k <= level`.
    pub fn coarsen(&self, hier: &Hierarchy, k: u32) -> Result<TileMeasure> {
        if k > self.level {
            return Err(Error::InvalidArgument(format!("cannot refine a level-{} measure to level {k}", self.level)));
        }
        let mut cur = self.clone();
        while cur.level > k {
            let cx = hier.level(cur.level)?;
            let mut next = TileMeasure::zero(cur.level - 1, hier.level(cur.level - 1)?.tiles.len());
            next.skeleton_mass = cur.skeleton_mass.clone();
            for (t, mass) in cur.masses.iter().enumerate() {
                let p = cx.tiles[t].parent.expect("tiles above level 0 have parents");
                next.masses[p as usize] += mass;
            }
            cur = next;
        }
        Ok(cur)
    }

    /// Mass of the union of level-`(level + 1)` tiles mapping onto each level-`level` tile.
    pub fn of_preimages(&self, hier: &Hierarchy) -> Result<TileMeasure> {
        let cx = hier.level(self.level + 1)?;
        let mut out = TileMeasure::zero(self.level, self.masses.len());
        let fine = mome(hier, self.level + 1)?;
        for (a, tile) in cx.tiles.iter().enumerate() {
            let below = tile.key.expect("tiles above level 0 have keys").below;
            out.masses[below as usize] += &fine.masses[a];
        }
        Ok(out)
    }
}

/// The measure of maximal entropy on level-`level` tiles: `w d^-level` on white tiles, `b d^-level` on black ones.
pub fn mome(hier: &Hierarchy, level: u32) -> Result<TileMeasure> {
    let stats = rule_stats(hier.rule())?;
    let cx = hier.level(level)?;
    let scale = pow(hier.d(), level);
    let white = &stats.w / &scale;
    let black = &stats.b / &scale;
    let masses = cx
        .tiles
        .iter()
        .map(|t| match t.color {
            Color::White => white.clone(),
            Color::Black => black.clone(),
        })
        .collect();
    Ok(TileMeasure { level, masses, skeleton_mass: BigRational::zero() })
}

/// A function constant on the interiors of level-`level` tiles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepFunction {
    pub level: u32,
    #[serde(serialize_with = "ser_ratios")]
    pub values: Vec<BigRational>,
}

impl StepFunction {
    pub fn constant(hier: &Hierarchy, level: u32, c: BigRational) -> Result<Self> {
        Ok(StepFunction { level, values: vec![c; hier.level(level)?.tiles.len()] })
    }

    /// Indicator of the level-`level` tiles inside the 0-tile of the given color.
    pub fn indicator_of(hier: &Hierarchy, level: u32, location: Color) -> Result<Self> {
        let cx = hier.level(level)?;
        let values = cx
            .tiles
            .iter()
            .map(|t| if t.location == location { BigRational::one() } else { BigRational::zero() })
            .collect();
        Ok(StepFunction { level, values })
    }

    pub fn integral(&self, mu: &TileMeasure) -> Result<BigRational> {
        if mu.level != self.level {
            return Err(Error::InvalidArgument(format!("levels {} and {} differ", self.level, mu.level)));
        }
        Ok(self.values.iter().zip(&mu.masses).fold(BigRational::zero(), |acc, (v, m)| acc + v * m))
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }
}

/// `Qφ(x) = (1/d) Σ_{f(y) = x} deg_f(y) φ(y)`, evaluated on the level-`m` tiles where `φ` lives.
pub fn apply_q(hier: &Hierarchy, phi: &StepFunction) -> Result<StepFunction> {
    let cx = hier.level(phi.level + 1)?;
    let mut values = vec![BigRational::zero(); phi.values.len()];
    for tile in &cx.tiles {
        let below = tile.key.expect("tiles above level 0 have keys").below;
        let parent = tile.parent.expect("tiles above level 0 have parents");
        values[below as usize] += &phi.values[parent as usize];
    }
    let d = pow(hier.d(), 1);
    for v in &mut values {
        *v /= &d;
    }
    Ok(StepFunction { level: phi.level, values })
}

/// Adjoint of `Q`: a level-`m` measure pulled back to level `m + 1`, `ρ'(A) = ρ(f(A))/d`.
pub fn apply_q_star(hier: &Hierarchy, rho: &TileMeasure) -> Result<TileMeasure> {
    let cx = hier.level(rho.level + 1)?;
    let d = pow(hier.d(), 1);
    let masses = cx
        .tiles
        .iter()
        .map(|t| &rho.masses[t.key.expect("tiles above level 0 have keys").below as usize] / &d)
        .collect();
    Ok(TileMeasure { level: rho.level + 1, masses, skeleton_mass: rho.skeleton_mass.clone() })
}

/// A finite weighted set of points.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EmpiricalMeasure {
    pub atoms: Vec<(PointAddress, BigRational)>,
}

impl EmpiricalMeasure {
    pub fn total(&self) -> BigRational {
        self.atoms.iter().fold(BigRational::zero(), |acc, (_, w)| acc + w)
    }

    /// Books each atom on the level-`level` cell containing it; atoms on edges or vertices go to the skeleton.
    pub fn evaluate(&self, hier: &Hierarchy, level: u32) -> Result<TileMeasure> {
        let mut out = TileMeasure::zero(level, hier.level(level)?.tiles.len());
        for (p, w) in &self.atoms {
            let c = p.cell(hier, level as usize)?;
            if c.dim == Dim::Tile {
                out.masses[c.id as usize] += w;
            } else {
                out.skeleton_mass += w;
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquidistKind {
    PreimageWeighted,
    PreimagePlain,
    PreperiodicWeighted,
    PreperiodicPlain,
}

impl EquidistKind {
    pub const ALL: [EquidistKind; 4] =
        [EquidistKind::PreimageWeighted, EquidistKind::PreimagePlain, EquidistKind::PreperiodicWeighted, EquidistKind::PreperiodicPlain];

    pub fn name(self) -> &'static str {
        match self {
            EquidistKind::PreimageWeighted => "preimage-weighted",
            EquidistKind::PreimagePlain => "preimage-plain",
            EquidistKind::PreperiodicWeighted => "preperiodic-weighted",
            EquidistKind::PreperiodicPlain => "preperiodic-plain",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown equidistribution kind `{s}`")))
    }
}

/// An interior point of the 0-tile of the given color: a fixed point of some iterate whose
/// smallest cells are all tiles.
pub fn generic_point(hier: &mut Hierarchy, color: Color, depth: usize) -> Result<PointAddress> {
    for n in 1..=3 {
        let set = enumerate_fixed_points(hier, n, depth)?;
        if let Some(p) = set.points.into_iter().find(|p| p.locus == Locus::Tile && p.address.root() == CellId::tile(color.index())) {
            return Ok(p.address);
        }
    }
    Err(Error::NonGenericBasePoint(format!("no interior periodic point found in the {color} 0-tile")))
}

/// `f^{-i}(p)` with each point weighted by the local degree of `f^i` there (or by 1 when `weighted` is false),
/// normalized to total mass 1.
pub fn preimage_measure(hier: &Hierarchy, p: &PointAddress, i: u32, weighted: bool) -> EmpiricalMeasure {
    let cells = hier.cells();
    let mut layer: Vec<(PointAddress, u64)> = vec![(p.clone(), 1)];
    for _ in 0..i {
        layer = layer
            .iter()
            .flat_map(|(q, w)| preimages(cells, q).into_iter().map(move |(y, k)| (y, w * u64::from(k))))
            .collect();
    }
    let z: u64 = if weighted { layer.iter().map(|(_, w)| w).sum() } else { layer.len() as u64 };
    let atoms = layer.into_iter().map(|(q, w)| (q, ratio(if weighted { w as i64 } else { 1 }, z))).collect();
    EmpiricalMeasure { atoms }
}

/// Points of `f^{-m}(Fix f^{n-m})`, weighted by the local degree of `f^n` or uniformly.
pub fn preperiodic_measure(hier: &mut Hierarchy, m: u32, n: u32, weighted: bool, depth: usize) -> Result<EmpiricalMeasure> {
    let census = preperiodic_census(hier, m, n, depth)?;
    let z = if weighted { census.weighted() } else { census.distinct() as u64 };
    let atoms = census
        .points
        .into_iter()
        .map(|(q, w)| (q, ratio(if weighted { w as i64 } else { 1 }, z)))
        .collect();
    Ok(EmpiricalMeasure { atoms })
}

/// Parameters of an equidistribution measure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquidistParams {
    /// Base point and number of preimage steps.
    Preimage { base: PointAddress, i: u32 },
    /// Preperiod `m` and `n` with `m < n`.
    Preperiodic { m: u32, n: u32 },
}

pub fn equidist_measure(hier: &mut Hierarchy, kind: EquidistKind, params: &EquidistParams) -> Result<EmpiricalMeasure> {
    let weighted = matches!(kind, EquidistKind::PreimageWeighted | EquidistKind::PreperiodicWeighted);
    match (kind, params) {
        (EquidistKind::PreimageWeighted | EquidistKind::PreimagePlain, EquidistParams::Preimage { base, i }) => {
            Ok(preimage_measure(hier, base, *i, weighted))
        }
        (EquidistKind::PreperiodicWeighted | EquidistKind::PreperiodicPlain, EquidistParams::Preperiodic { m, n }) => {
            preperiodic_measure(hier, *m, *n, weighted, DEFAULT_DEPTH)
        }
        _ => Err(Error::InvalidArgument(format!("parameters do not match kind {}", kind.name()))),
    }
}

/// Signed deviations `a - b` per tile and the total variation distance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    pub level: u32,
    #[serde(serialize_with = "ser_ratios")]
    pub deviations: Vec<BigRational>,
    #[serde(serialize_with = "ser_ratio")]
    pub skeleton_deviation: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub tv: BigRational,
}

pub fn compare(a: &TileMeasure, b: &TileMeasure) -> Result<ComparisonReport> {
    if a.level != b.level || a.masses.len() != b.masses.len() {
        return Err(Error::InvalidArgument(format!("measures of levels {} and {} are not comparable", a.level, b.level)));
    }
    let deviations: Vec<BigRational> = a.masses.iter().zip(&b.masses).map(|(x, y)| x - y).collect();
    let skeleton_deviation = &a.skeleton_mass - &b.skeleton_mass;
    let half = ratio(1, 2);
    let tv = deviations.iter().fold(skeleton_deviation.abs(), |acc, x| acc + x.abs()) * half;
    Ok(ComparisonReport { level: a.level, deviations, skeleton_deviation, tv })
}

pub fn compare_empirical(hier: &Hierarchy, a: &EmpiricalMeasure, b: &TileMeasure) -> Result<ComparisonReport> {
    compare(&a.evaluate(hier, b.level)?, b)
}

/// Size of each per-tile deviation of `ν_i` from the measure of maximal entropy on level `m`:
/// `b |w_w - b_w|^{i-m} d^{-i}`.
pub fn equidist_deviation(hier: &Hierarchy, i: u32, m: u32) -> Result<BigRational> {
    if i < m {
        return Err(Error::InvalidArgument(format!("need i >= m, got i = {i}, m = {m}")));
    }
    let stats = rule_stats(hier.rule())?;
    let lk = BigRational::from_integer(BigInt::from(stats.lambda.unsigned_abs()).pow(i - m));
    Ok(&stats.b * lk / pow(hier.d(), i))
}

/// Total variation distance of `ν_i` from the measure of maximal entropy on level `m`: one
/// per-tile deviation times the `d^m` tiles of each color.
pub fn equidist_tv(hier: &Hierarchy, i: u32, m: u32) -> Result<BigRational> {
    Ok(equidist_deviation(hier, i, m)? * pow(hier.d(), m))
}

/// Preimage choice table for the sampler: for each 0-cell, the 1-cells over it with cumulative degrees.
#[derive(Clone, Debug)]
pub struct BackwardSampler {
    choices: [Vec<Vec<(CellId, u32)>>; 3],
    d: u32,
    window: usize,
}

impl BackwardSampler {
    pub fn new(cells: &RuleCells, window: usize) -> Self {
        let m = cells.m as usize;
        let choices = Dim::ALL.map(|dim| {
            let targets = if dim == Dim::Tile { 2 } else { m };
            (0..targets as u32)
                .map(|t| {
                    let mut acc = 0;
                    letters_over(cells, CellId::new(dim, t))
                        .map(|y| {
                            acc += cells.local_degree(y);
                            (y, acc)
                        })
                        .collect()
                })
                .collect()
        });
        BackwardSampler { choices, d: cells.d, window }
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// One step of the chain: a preimage chosen with probability `deg_f(y)/d`. Only the
    /// first `window` letters of the result are kept.
    pub fn step(&self, cells: &RuleCells, p: &PointAddress, rng: &mut ChaCha8Rng) -> PointAddress {
        let options = &self.choices[p.root().dim.index()][p.root().id as usize];
        let u = rng.gen_range(0..self.d);
        let &(y, _) = options.iter().find(|&&(_, acc)| acc > u).expect("degrees over a cell sum to d");
        let mut letters = Vec::with_capacity(self.window);
        letters.push(y);
        letters.extend(p.letters().iter().take(self.window - 1));
        PointAddress::from_parts_unchecked(cells.carrier(y), letters)
    }
}

/// One preimage sampled with probability proportional to its local degree. The result is one
/// letter deeper; `max_depth` bounds that growth.
pub fn markov_step(hier: &Hierarchy, p: &PointAddress, rng: &mut ChaCha8Rng, max_depth: usize) -> Result<PointAddress> {
    if p.depth() + 1 > max_depth {
        return Err(Error::DepthBudgetExceeded { needed: p.depth() + 1, window: max_depth });
    }
    let u = rng.gen_range(0..hier.d());
    let mut acc = 0;
    for (q, w) in preimages(hier.cells(), p) {
        acc += w;
        if acc > u {
            return Ok(q);
        }
    }
    unreachable!("degrees over a point sum to d")
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_orbit_args(steps: usize, level: usize, window: usize) -> Result<()> {
    if steps == 0 {
        return Err(Error::InvalidArgument("the orbit needs at least one step".into()));
    }
    if level > window || window == 0 {
        return Err(Error::DepthBudgetExceeded { needed: level, window });
    }
    Ok(())
}

/// Birkhoff measure of the orbit `q_0 = z, q_{j+1}` a random preimage of `q_j`, for `steps` points.
/// Addresses keep the first `window` letters, enough to evaluate on levels up to `window`.
pub fn run_backward_orbit(hier: &Hierarchy, z: &PointAddress, steps: usize, seed: u64, window: usize) -> Result<EmpiricalMeasure> {
    check_orbit_args(steps, 0, window)?;
    let cells = hier.cells();
    let sampler = BackwardSampler::new(cells, window);
    let mut rng = seeded_rng(seed);
    let weight = ratio(1, steps as u64);
    let mut q = z.truncated(window);
    let mut atoms = Vec::with_capacity(steps);
    for _ in 0..steps {
        let next = sampler.step(cells, &q, &mut rng);
        atoms.push((std::mem::replace(&mut q, next), weight.clone()));
    }
    Ok(EmpiricalMeasure { atoms })
}

/// Level-`level` tile counts along a backward orbit, without storing the orbit. Entry
/// `masses.len()` of the result counts skeleton visits. `checkpoints` lists step counts at which
/// a copy of the counts is recorded.
pub fn backward_orbit_counts(
    hier: &Hierarchy,
    z: &PointAddress,
    steps: usize,
    seed: u64,
    level: u32,
    checkpoints: &[usize],
) -> Result<Vec<(usize, Vec<u64>)>> {
    check_orbit_args(steps, level as usize, SAMPLER_WINDOW)?;
    let cells = hier.cells();
    let tiles = hier.level(level)?.tiles.len();
    let sampler = BackwardSampler::new(cells, SAMPLER_WINDOW);
    let mut rng = seeded_rng(seed);
    let mut counts = vec![0u64; tiles + 1];
    let mut q = z.truncated(SAMPLER_WINDOW);
    let mut out = Vec::new();
    for j in 1..=steps {
        let c = q.cell(hier, level as usize)?;
        counts[if c.dim == Dim::Tile { c.id as usize } else { tiles }] += 1;
        if checkpoints.contains(&j) {
            out.push((j, counts.clone()));
        }
        q = sampler.step(cells, &q, &mut rng);
    }
    if out.last().map(|(j, _)| *j) != Some(steps) {
        out.push((steps, counts));
    }
    Ok(out)
}

/// Converts visit counts into a measure.
pub fn counts_to_measure(level: u32, counts: &[u64]) -> TileMeasure {
    let total: u64 = counts.iter().sum();
    let (tiles, skeleton) = counts.split_at(counts.len() - 1);
    TileMeasure {
        level,
        masses: tiles.iter().map(|&c| ratio(c as i64, total)).collect(),
        skeleton_mass: ratio(skeleton[0] as i64, total),
    }
}

/// Tolerance for the sampler's distance to the measure of maximal entropy: `3 sqrt(cells / steps)`.
pub fn tv_envelope(cells: usize, steps: usize) -> f64 {
    3.0 * (cells as f64 / steps as f64).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundCase {
    /// No periodic critical points.
    NoPeriodicCritical,
    /// Every periodic critical point is fixed.
    FixedCritical,
    /// Periodic critical points of higher period; handled through `f^κ`.
    PeriodicCritical,
}

/// `d^-n Σ_{x ∈ M} deg_{f^n}(x)` against `C max{(|M|/d^n)^α, |M|/d^n}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: u32,
    pub card: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub lhs: BigRational,
    pub case: BoundCase,
    pub c: f64,
    pub alpha: f64,
    pub rhs: f64,
    /// Exact right-hand side when `α = 1`.
    #[serde(skip)]
    pub rhs_exact: Option<BigRational>,
    pub holds: bool,
}

/// Product of local degrees over the critical points of `f^k`, and the number of those fixed by `f^k`.
fn critical_data(hier: &mut Hierarchy, k: u32) -> Result<(BigInt, usize)> {
    hier.ensure(k)?;
    let cx = hier.level(k)?;
    let mut tiles_at = vec![0u32; cx.vertices.len()];
    for t in &cx.tiles {
        for &v in &t.vertices {
            tiles_at[v as usize] += 1;
        }
    }
    let mut prod = BigInt::one();
    let mut fixed = 0;
    for (v, &c) in tiles_at.iter().enumerate() {
        let deg = c / 2;
        if deg > 1 {
            prod *= deg;
            let vx = &cx.vertices[v];
            if cx.posts.get(vx.label as usize) == Some(&(v as u32)) {
                fixed += 1;
            }
        }
    }
    Ok((prod, fixed))
}

pub fn degree_sum_bound_check(hier: &mut Hierarchy, vertices: &[u32], n: u32) -> Result<BoundReport> {
    if vertices.is_empty() {
        return Err(Error::EmptySet);
    }
    hier.ensure(n)?;
    let cx = hier.level(n)?;
    let mut tiles_at = vec![0u64; cx.vertices.len()];
    for t in &cx.tiles {
        for &v in &t.vertices {
            tiles_at[v as usize] += 1;
        }
    }
    let mut sum = BigInt::zero();
    for &v in vertices {
        let count = tiles_at.get(v as usize).ok_or_else(|| Error::InvalidCell(format!("level-{n} vertex {v} does not exist")))?;
        sum += count / 2;
    }
    let dn = pow(hier.d(), n);
    let lhs = BigRational::from_integer(sum) / &dn;
    let card = vertices.len();
    let x = BigRational::from_integer(BigInt::from(card)) / &dn;
    let xf = x.to_f64().unwrap_or(f64::INFINITY);
    let crit = analyze_critical(hier.cells());
    let d = f64::from(hier.d());

    let (case, c, alpha, rhs_exact) = if !crit.has_periodic_critical {
        let (dd, _) = critical_data(hier, 1)?;
        let rhs = BigRational::from_integer(dd.clone()) * &x;
        (BoundCase::NoPeriodicCritical, dd.to_f64().unwrap_or(f64::INFINITY), 1.0, Some(rhs))
    } else if crit.kappa == 1 {
        let (dd, t0) = critical_data(hier, 1)?;
        let e = 2.0 * dd.to_f64().unwrap_or(f64::INFINITY) * t0 as f64 * d * d / (d - 1.0);
        (BoundCase::FixedCritical, e, (d / (d - 1.0)).log(d), None)
    } else {
        let kappa = u32::try_from(crit.kappa).map_err(|_| Error::LevelCap { requested: u32::MAX, cap: hier.cap() })?;
        let (dd, t0) = critical_data(hier, kappa)?;
        let dk = d.powi(kappa as i32);
        let e = 2.0 * dd.to_f64().unwrap_or(f64::INFINITY) * t0 as f64 * dk * dk / (dk - 1.0);
        (BoundCase::PeriodicCritical, dk * e, (dk / (dk - 1.0)).log(dk), None)
    };
    let rhs = c * xf.powf(alpha).max(xf);
    let holds = match &rhs_exact {
        Some(r) => &lhs <= r,
        None => lhs.to_f64().unwrap_or(f64::INFINITY) <= rhs * (1.0 + 1e-12),
    };
    Ok(BoundReport { n, card, lhs, case, c, alpha, rhs, rhs_exact, holds })
}
