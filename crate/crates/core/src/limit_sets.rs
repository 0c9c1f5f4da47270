//! Finite-resolution approximations of limit sets, recurrent and
//! nonwandering points, plus the exact periodic-point census.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::backward::{count_branches, par_walk_branches, preimage_sets, sample_branches, Branch, BranchVisitor};
use crate::cells::{CellGrid, EpsSet};
use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalUnion};
use crate::plmap::PLMap;
use crate::rat::Rat;
use crate::sampler::BranchSampler;

/// Denominator of the jitter added to grid seeds and cell midpoints. Dyadic
/// points are special for maps with dyadic breakpoints (every dyadic point is
/// eventually fixed under the tent map), so seeds are nudged off the grid.
pub const JITTER_DEN: i64 = 1_000_003;

fn grid_for(f: &PLMap, eps: &Rat) -> Result<CellGrid> {
    CellGrid::new(f.domain(), eps)
}

// ---------------------------------------------------------------- periodic

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicOrbit {
    pub period: usize,
    /// Ascending.
    pub points: Vec<Rat>,
}

impl PeriodicOrbit {
    pub fn contains(&self, x: &Rat) -> bool {
        self.points.binary_search(x).is_ok()
    }
}

/// A segment on which `f^period` is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicBand {
    pub period: usize,
    pub segment: Interval,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicCensus {
    pub p_max: usize,
    /// Sorted by period, then by smallest point.
    pub orbits: Vec<PeriodicOrbit>,
    pub bands: Vec<PeriodicBand>,
    /// `isolated_solutions[p-1]` = number of isolated solutions of `f^p(x) = x`.
    pub isolated_solutions: Vec<usize>,
    pub laps_per_iterate: Vec<usize>,
}

impl PeriodicCensus {
    pub fn points(&self) -> impl Iterator<Item = &Rat> {
        self.orbits.iter().flat_map(|o| o.points.iter())
    }

    pub fn orbits_of_period(&self, p: usize) -> impl Iterator<Item = &PeriodicOrbit> {
        self.orbits.iter().filter(move |o| o.period == p)
    }

    pub fn contains(&self, x: &Rat) -> bool {
        self.orbits.iter().any(|o| o.contains(x)) || self.bands.iter().any(|b| b.segment.contains(x))
    }

    pub fn cells(&self, grid: &CellGrid) -> EpsSet {
        let mut s = EpsSet::from_points(grid.clone(), self.points());
        for b in &self.bands {
            s.insert_interval(&b.segment);
        }
        s
    }
}

fn minimal_period(f: &PLMap, q: &Rat, p: usize) -> Result<usize> {
    let mut cur = q.clone();
    for k in 1..=p {
        cur = f.eval(&cur)?;
        if &cur == q {
            return Ok(k);
        }
    }
    unreachable!("{q} is a fixed point of the {p}-th iterate")
}

/// Every periodic point of minimal period `<= p_max`, grouped into orbits,
/// plus the segments on which some iterate is the identity.
pub fn periodic_points(f: &PLMap, p_max: usize, lap_cap: usize) -> Result<PeriodicCensus> {
    if p_max == 0 {
        return Err(Error::InvalidParameter("p_max must be at least 1".into()));
    }
    let mut orbits: Vec<PeriodicOrbit> = Vec::new();
    let mut bands: Vec<PeriodicBand> = Vec::new();
    let mut isolated_solutions = Vec::with_capacity(p_max);
    let mut laps_per_iterate = Vec::with_capacity(p_max);
    let mut g = f.clone();
    for p in 1..=p_max {
        if p > 1 {
            g = f.compose_after(&g)?;
        }
        if g.lap_count() > lap_cap {
            return Err(Error::LapCapExceeded {
                cap: lap_cap,
                completed: p - 1,
            });
        }
        laps_per_iterate.push(g.lap_count());
        let fp = g.fixed_points();
        isolated_solutions.push(fp.points.len());
        let mut seen: BTreeSet<Rat> = BTreeSet::new();
        for q in &fp.points {
            if seen.contains(q) || minimal_period(f, q, p)? != p {
                continue;
            }
            let mut pts = f.orbit(q, p - 1)?;
            pts.sort();
            seen.extend(pts.iter().cloned());
            orbits.push(PeriodicOrbit { period: p, points: pts });
        }
        for s in fp.segments {
            let covered = bands
                .iter()
                .any(|b| p % b.period == 0 && b.segment.contains_interval(&s));
            if !covered {
                bands.push(PeriodicBand { period: p, segment: s });
            }
        }
    }
    orbits.sort_by(|a, b| (a.period, &a.points[0]).cmp(&(b.period, &b.points[0])));
    Ok(PeriodicCensus {
        p_max,
        orbits,
        bands,
        isolated_solutions,
        laps_per_iterate,
    })
}

// ---------------------------------------------------------------- pointwise

/// Cells visited by `f^n(x)` for `n_skip <= n < n_skip + n_keep`.
pub fn omega_approx(f: &PLMap, x: &Rat, n_skip: usize, n_keep: usize, eps: &Rat) -> Result<EpsSet> {
    if n_keep == 0 {
        return Err(Error::InvalidParameter("n_keep must be at least 1".into()));
    }
    let grid = grid_for(f, eps)?;
    let mut cur = f.eval_iter(x, n_skip)?;
    let mut s = EpsSet::empty(grid);
    for i in 0..n_keep {
        s.insert_point(&cur);
        if i + 1 < n_keep {
            cur = f.eval(&cur)?;
        }
    }
    Ok(s)
}

/// Cells holding at least `min_hits` branch points of index `>= tail_start`.
/// `min_hits = 1` gives every tail cell.
pub fn alpha_branch_approx(
    f: &PLMap,
    branch: &Branch,
    tail_start: usize,
    min_hits: usize,
    eps: &Rat,
) -> Result<EpsSet> {
    if branch.points.len() <= tail_start {
        return Err(Error::BranchTooShort {
            len: branch.points.len(),
            tail_start,
        });
    }
    let grid = grid_for(f, eps)?;
    let mut counts: HashMap<i64, usize> = HashMap::new();
    for p in &branch.points[tail_start..] {
        *counts.entry(grid.cell_of(p)).or_default() += 1;
    }
    let mut s = EpsSet::empty(grid);
    for (k, c) in counts {
        if c >= min_hits.max(1) {
            s.insert(k);
        }
    }
    Ok(s)
}

/// Cells met by the level sets `f^-n(x)` for at least `min_hits` distinct
/// `n` in `[tail_start, depth]`.
pub fn alpha_approx(
    f: &PLMap,
    x: &Rat,
    depth: usize,
    tail_start: usize,
    min_hits: usize,
    eps: &Rat,
    node_cap: usize,
) -> Result<EpsSet> {
    if depth <= tail_start {
        return Err(Error::InvalidParameter(format!(
            "depth {depth} must exceed tail_start {tail_start}"
        )));
    }
    if min_hits < 2 {
        return Err(Error::InvalidParameter("min_hits must be at least 2".into()));
    }
    let grid = grid_for(f, eps)?;
    let levels = preimage_sets(f, x, depth, node_cap)?;
    let per_level: Vec<BTreeSet<i64>> = levels[tail_start..]
        .par_iter()
        .map(|lvl| lvl.iter().map(|v| grid.cell_of(v)).collect())
        .collect();
    let mut counts: HashMap<i64, usize> = HashMap::new();
    for cells in per_level {
        for k in cells {
            *counts.entry(k).or_default() += 1;
        }
    }
    let mut s = EpsSet::empty(grid);
    for (k, c) in counts {
        if c >= min_hits {
            s.insert(k);
        }
    }
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SalphaMode {
    /// Every branch; errors past `branch_cap` leaves.
    Exhaustive { branch_cap: usize },
    /// `n` branches from `BranchSampler::new(seed)`.
    Sampled { n: usize, seed: u64 },
}

impl SalphaMode {
    pub fn label(&self) -> &'static str {
        match self {
            SalphaMode::Exhaustive { .. } => "exhaustive",
            SalphaMode::Sampled { .. } => "sampled",
        }
    }
}

struct TailCells<'g> {
    grid: &'g CellGrid,
    tail_start: usize,
    min_hits: usize,
    counts: HashMap<i64, usize>,
    stack: Vec<Option<i64>>,
    out: BTreeSet<i64>,
}

impl BranchVisitor for TailCells<'_> {
    fn enter(&mut self, index: usize, value: &Rat) {
        if index < self.tail_start {
            self.stack.push(None);
            return;
        }
        let k = self.grid.cell_of(value);
        let c = self.counts.entry(k).or_default();
        *c += 1;
        if *c >= self.min_hits {
            self.out.insert(k);
        }
        self.stack.push(Some(k));
    }

    fn leave(&mut self, _index: usize, _value: &Rat) {
        if let Some(Some(k)) = self.stack.pop() {
            *self.counts.get_mut(&k).unwrap() -= 1;
        }
    }
}

/// Union of [`alpha_branch_approx`] over all branches (exhaustive) or over
/// sampled branches.
pub fn salpha_approx(
    f: &PLMap,
    x: &Rat,
    depth: usize,
    tail_start: usize,
    min_hits: usize,
    eps: &Rat,
    mode: SalphaMode,
) -> Result<EpsSet> {
    if depth <= tail_start {
        return Err(Error::InvalidParameter(format!(
            "depth {depth} must exceed tail_start {tail_start}"
        )));
    }
    let grid = grid_for(f, eps)?;
    let mut s = EpsSet::empty(grid.clone());
    match mode {
        SalphaMode::Exhaustive { branch_cap } => {
            count_branches(f, x, depth, branch_cap)?;
            let (parts, _) = par_walk_branches(f, x, depth, usize::MAX, || TailCells {
                grid: &grid,
                tail_start,
                min_hits: min_hits.max(1),
                counts: HashMap::new(),
                stack: Vec::new(),
                out: BTreeSet::new(),
            })?;
            for p in parts {
                for k in p.out {
                    s.insert(k);
                }
            }
        }
        SalphaMode::Sampled { n, seed } => {
            let bs = sample_branches(f, x, depth, n, &BranchSampler::new(seed))?;
            for b in &bs {
                s.union_with(&alpha_branch_approx(f, b, tail_start, min_hits, eps)?);
            }
        }
    }
    Ok(s)
}

// ---------------------------------------------------------------- global

/// Cells `C` with `f^n(C) ∩ C ≠ ∅` for some `1 <= n <= n_max`, images taken
/// exactly on the closed cell hull.
pub fn nonwandering_cells(f: &PLMap, eps: &Rat, n_max: usize) -> Result<EpsSet> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    let grid = grid_for(f, eps)?;
    let ks: Vec<i64> = grid.cell_range().collect();
    let flags: Vec<Result<bool>> = ks
        .par_iter()
        .map(|&k| {
            let c = grid.cell_bounds(k);
            let mut j = c.clone();
            for _ in 0..n_max {
                let next = f.image_interval(&j)?;
                if next.intersects(&c) {
                    return Ok(true);
                }
                if next == j {
                    break;
                }
                j = next;
            }
            Ok(false)
        })
        .collect();
    let mut s = EpsSet::empty(grid);
    for (k, fl) in ks.into_iter().zip(flags) {
        if fl? {
            s.insert(k);
        }
    }
    Ok(s)
}

pub fn nonwandering_approx(f: &PLMap, eps: &Rat, n_max: usize) -> Result<IntervalUnion> {
    Ok(nonwandering_cells(f, eps, n_max)?.to_interval_union())
}

/// Period bound and lap cap for the periodic seeds mixed into grid-based
/// approximations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicSeeds {
    pub p_max: usize,
    pub lap_cap: usize,
}

impl Default for PeriodicSeeds {
    fn default() -> Self {
        PeriodicSeeds {
            p_max: 3,
            lap_cap: 4096,
        }
    }
}

/// Cells whose (jittered) midpoint returns to the cell at some step
/// `n_skip < n <= n_skip + n_keep`, together with the cells of the exact
/// periodic points from `seeds`.
pub fn recurrent_approx(f: &PLMap, eps: &Rat, n_skip: usize, n_keep: usize, seeds: PeriodicSeeds) -> Result<EpsSet> {
    let grid = grid_for(f, eps)?;
    let ks: Vec<i64> = grid.cell_range().collect();
    let jitter = eps / Rat::from_int(JITTER_DEN);
    let flags: Vec<Result<bool>> = ks
        .par_iter()
        .map(|&k| {
            let mid = grid.cell_midpoint(k) + &jitter;
            let mut cur = f.eval_iter(&mid, n_skip)?;
            for _ in 0..n_keep {
                cur = f.eval(&cur)?;
                if grid.cell_of(&cur) == k {
                    return Ok(true);
                }
            }
            Ok(false)
        })
        .collect();
    let mut s = periodic_points(f, seeds.p_max, seeds.lap_cap)?.cells(&grid);
    for (k, fl) in ks.into_iter().zip(flags) {
        if fl? {
            s.insert(k);
        }
    }
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum LimitKind {
    Omega,
    Alpha,
    Salpha,
}

impl LimitKind {
    pub fn name(&self) -> &'static str {
        match self {
            LimitKind::Omega => "OMEGA",
            LimitKind::Alpha => "ALPHA",
            LimitKind::Salpha => "SALPHA",
        }
    }
}

impl std::str::FromStr for LimitKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "OMEGA" => Ok(LimitKind::Omega),
            "ALPHA" => Ok(LimitKind::Alpha),
            "SALPHA" | "SA" => Ok(LimitKind::Salpha),
            _ => Err(Error::InvalidParameter(format!("unknown limit-set kind `{s}`"))),
        }
    }
}

/// Per-point parameters shared by the aggregate approximations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointParams {
    pub eps: Rat,
    pub n_skip: usize,
    pub n_keep: usize,
    pub depth: usize,
    pub tail_start: usize,
    pub min_hits: usize,
    pub node_cap: usize,
    pub salpha_mode: SalphaMode,
    pub periodic: PeriodicSeeds,
}

impl PointParams {
    pub fn new(eps: Rat) -> Self {
        PointParams {
            eps,
            n_skip: 64,
            n_keep: 128,
            depth: 14,
            tail_start: 6,
            min_hits: 2,
            node_cap: 1_000_000,
            salpha_mode: SalphaMode::Exhaustive { branch_cap: 1_000_000 },
            periodic: PeriodicSeeds::default(),
        }
    }
}

fn grid_seeds(domain: &Interval, step: &Rat, jitter: bool) -> Vec<Rat> {
    let mut out = Vec::new();
    let offset = if jitter {
        step / Rat::from_int(JITTER_DEN)
    } else {
        Rat::zero()
    };
    let mut k = 0i64;
    loop {
        let x = &domain.lo + step * Rat::from_int(k) + &offset;
        if x > domain.hi {
            break;
        }
        out.push(x);
        k += 1;
    }
    if !jitter && out.last() != Some(&domain.hi) {
        out.push(domain.hi.clone());
    }
    out
}

/// Seed points used by [`aggregate`]: the grid (jittered for `Omega`) plus
/// every periodic point of period `<= params.periodic.p_max` and the
/// endpoints and midpoints of identity bands.
pub fn aggregate_seeds(f: &PLMap, kind: LimitKind, grid_step: &Rat, params: &PointParams) -> Result<Vec<Rat>> {
    if !grid_step.is_positive() {
        return Err(Error::InvalidParameter("grid_step must be positive".into()));
    }
    let mut seeds: BTreeSet<Rat> = grid_seeds(f.domain(), grid_step, kind == LimitKind::Omega)
        .into_iter()
        .collect();
    let census = periodic_points(f, params.periodic.p_max, params.periodic.lap_cap)?;
    seeds.extend(census.points().cloned());
    for b in &census.bands {
        seeds.insert(b.segment.lo.clone());
        seeds.insert(b.segment.hi.clone());
        seeds.insert(b.segment.lo.midpoint(&b.segment.hi));
    }
    Ok(seeds.into_iter().collect())
}

/// One limit set of a single point at the given parameters.
pub fn point_limit_set(f: &PLMap, kind: LimitKind, x: &Rat, params: &PointParams) -> Result<EpsSet> {
    match kind {
        LimitKind::Omega => omega_approx(f, x, params.n_skip, params.n_keep, &params.eps),
        LimitKind::Alpha => alpha_approx(
            f,
            x,
            params.depth,
            params.tail_start,
            params.min_hits,
            &params.eps,
            params.node_cap,
        ),
        LimitKind::Salpha => salpha_approx(
            f,
            x,
            params.depth,
            params.tail_start,
            params.min_hits,
            &params.eps,
            params.salpha_mode,
        ),
    }
}

/// Union of the per-point approximations over [`aggregate_seeds`].
pub fn aggregate(f: &PLMap, kind: LimitKind, grid_step: &Rat, params: &PointParams) -> Result<EpsSet> {
    let seeds = aggregate_seeds(f, kind, grid_step, params)?;
    let parts: Vec<Result<EpsSet>> = seeds.par_iter().map(|x| point_limit_set(f, kind, x, params)).collect();
    let mut s = EpsSet::empty(grid_for(f, &params.eps)?);
    for p in parts {
        s.union_with(&p?);
    }
    Ok(s)
}
