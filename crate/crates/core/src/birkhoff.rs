//! Uniform bound on the number of points of a backward branch outside a
//! neighborhood of the α-limit points: excursion counting, two-point
//! neighborhoods, the greedy finite subcover and the certified `M = 2m`.

use rayon::prelude::*;
use serde::Serialize;

use crate::backward::{count_branches, par_walk_branches, sample_branch, walk_branches, Branch, BranchVisitor};
use crate::cells::CellGrid;
use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalUnion};
use crate::limit_sets::{aggregate, LimitKind, PointParams};
use crate::plmap::PLMap;
use crate::rat::Rat;
use crate::sampler::BranchSampler;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NeighborhoodLabel {
    A,
    SA,
    OMEGA,
    NW,
    Custom,
}

/// Open neighborhood `U`; membership is exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Neighborhood {
    pub u: IntervalUnion,
    pub label: NeighborhoodLabel,
}

impl Neighborhood {
    pub fn new(u: IntervalUnion, label: NeighborhoodLabel) -> Self {
        Neighborhood { u, label }
    }

    /// Union of the open intervals `(lo, hi)`.
    pub fn open_union(parts: &[(Rat, Rat)], label: NeighborhoodLabel) -> Result<Self> {
        let mut v = Vec::with_capacity(parts.len());
        for (lo, hi) in parts {
            if lo >= hi {
                return Err(Error::InvalidParameter(format!("empty open interval ({lo}, {hi})")));
            }
            v.push(Interval::open(lo.clone(), hi.clone()));
        }
        Ok(Neighborhood::new(IntervalUnion::from_parts(v), label))
    }

    /// An open set containing the whole domain.
    pub fn everything(domain: &Interval) -> Self {
        let one = Rat::one();
        Neighborhood::new(
            IntervalUnion::from_parts([Interval::open(&domain.lo - &one, &domain.hi + &one)]),
            NeighborhoodLabel::Custom,
        )
    }

    pub fn contains(&self, x: &Rat) -> bool {
        self.u.contains(x)
    }
}

/// Number of branch points outside `U`, with their indices.
pub fn count_outside(branch: &Branch, u: &Neighborhood) -> (usize, Vec<usize>) {
    let w: Vec<usize> = branch
        .points
        .iter()
        .enumerate()
        .filter(|(_, p)| !u.contains(p))
        .map(|(i, _)| i)
        .collect();
    (w.len(), w)
}

// ---------------------------------------------------------------- radii

/// Parameters of the two-point radius search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RadiusSearch {
    /// Largest radius tried; the schedule halves it down to `2^-20`.
    pub largest: Rat,
    pub depth: usize,
    pub samples: usize,
    pub seed: u64,
    /// Exhaustive depth is `min(depth, exhaustive_depth)`.
    pub exhaustive_depth: usize,
    /// Per-root leaf budget for the exhaustive phase; above it only samples are used.
    pub exhaustive_budget: usize,
}

impl RadiusSearch {
    pub fn new(depth: usize, samples: usize, seed: u64) -> Self {
        RadiusSearch {
            largest: Rat::dyadic(2),
            depth,
            samples,
            seed,
            exhaustive_depth: 12,
            exhaustive_budget: 10_000,
        }
    }

    fn schedule(&self) -> Vec<Rat> {
        let floor = Rat::dyadic(20);
        (2..=20u32)
            .map(Rat::dyadic)
            .filter(|d| d <= &self.largest)
            .chain(std::iter::once(floor))
            .fold(Vec::new(), |mut acc, d| {
                if acc.last() != Some(&d) {
                    acc.push(d);
                }
                acc
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoPointRadius {
    pub center: Rat,
    /// Zero when no radius of the schedule qualifies.
    pub delta: Rat,
    /// Largest number of scanned branch points inside the ball of radius
    /// `delta` (or inside the smallest ball, when `delta` is zero).
    pub max_in_ball: usize,
}

impl TwoPointRadius {
    pub fn flagged(&self) -> bool {
        self.delta.is_zero()
    }
}

struct BallCount<'a> {
    ball: &'a Interval,
    cur: usize,
    stack: Vec<bool>,
    max: usize,
    stop_above: Option<usize>,
}

impl BranchVisitor for BallCount<'_> {
    fn enter(&mut self, _index: usize, value: &Rat) {
        let inside = self.ball.contains(value);
        self.cur += inside as usize;
        self.stack.push(inside);
    }

    fn leave(&mut self, _index: usize, _value: &Rat) {
        if self.stack.pop().unwrap() {
            self.cur -= 1;
        }
    }

    fn leaf(&mut self, _points: &[Rat], _path: &[usize]) -> bool {
        self.max = self.max.max(self.cur);
        self.stop_above.is_none_or(|s| self.max <= s)
    }
}

/// Largest number of points inside `ball` over the scanned branches of the
/// roots; with `stop_above`, scanning stops once that number is exceeded.
fn scan_ball(f: &PLMap, roots: &[Rat], ball: &Interval, s: &RadiusSearch, stop_above: Option<usize>) -> Result<usize> {
    let mut max = 0usize;
    let ex_depth = s.depth.min(s.exhaustive_depth);
    for root in roots {
        if count_branches(f, root, ex_depth, s.exhaustive_budget).is_err() {
            continue;
        }
        let mut v = BallCount {
            ball,
            cur: 0,
            stack: Vec::new(),
            max: 0,
            stop_above,
        };
        walk_branches(f, root, ex_depth, usize::MAX, &mut v)?;
        max = max.max(v.max);
        if stop_above.is_some_and(|lim| max > lim) {
            return Ok(max);
        }
    }
    let sampler = BranchSampler::new(s.seed);
    let counts: Vec<Result<usize>> = (0..s.samples)
        .into_par_iter()
        .map(|i| {
            let root = &roots[i % roots.len()];
            let b = sample_branch(f, root, s.depth, &sampler.derive(i as u64))?;
            Ok(b.points.iter().filter(|p| ball.contains(p)).count())
        })
        .collect();
    for c in counts {
        max = max.max(c?);
    }
    Ok(max)
}

fn ball_roots(f: &PLMap, center: &Rat, delta: &Rat) -> Vec<Rat> {
    let dom = f.domain();
    let mut roots = vec![center.clone()];
    for k in 1..=3 {
        let off = delta * Rat::new(k, 4);
        for c in [center - &off, center + &off] {
            if dom.contains(&c) {
                roots.push(c);
            }
        }
    }
    roots
}

/// Largest dyadic radius whose open ball around `x_prime` holds at most two
/// points of every scanned backward branch.
pub fn two_point_radius_with(f: &PLMap, x_prime: &Rat, s: &RadiusSearch) -> Result<TwoPointRadius> {
    f.eval(x_prime)?;
    let schedule = s.schedule();
    for delta in &schedule {
        let ball = Interval::open(x_prime - delta, x_prime + delta);
        let roots = ball_roots(f, x_prime, delta);
        let max = scan_ball(f, &roots, &ball, s, Some(2))?;
        if max <= 2 {
            return Ok(TwoPointRadius {
                center: x_prime.clone(),
                delta: delta.clone(),
                max_in_ball: max,
            });
        }
    }
    let delta = schedule.last().unwrap();
    let ball = Interval::open(x_prime - delta, x_prime + delta);
    let max = scan_ball(f, &ball_roots(f, x_prime, delta), &ball, s, None)?;
    Ok(TwoPointRadius {
        center: x_prime.clone(),
        delta: Rat::zero(),
        max_in_ball: max,
    })
}

pub fn two_point_radius(f: &PLMap, x_prime: &Rat, depth: usize, samples: usize, seed: u64) -> Result<TwoPointRadius> {
    two_point_radius_with(f, x_prime, &RadiusSearch::new(depth, samples, seed))
}

// ---------------------------------------------------------------- subcover

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverPiece {
    pub center: Rat,
    pub radius: Rat,
    pub v: Interval,
    pub max_in_ball: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubcoverCertificate {
    /// Domain minus `U`.
    pub complement: IntervalUnion,
    pub pieces: Vec<CoverPiece>,
    pub m: usize,
    #[serde(rename = "M")]
    pub big_m: usize,
    pub scan_params: RadiusSearch,
}

impl SubcoverCertificate {
    /// Exact check that the pieces together with `U` cover the domain.
    pub fn covers(&self, u: &Neighborhood, domain: &Interval) -> bool {
        let vs = IntervalUnion::from_parts(self.pieces.iter().map(|p| p.v.clone()));
        vs.union(&u.u).covers(domain)
    }
}

/// Greedy left-to-right cover of `domain \ U` by validated two-point
/// intervals. Each probe sits at the current uncovered frontier; the next
/// frontier is the right end of the interval just placed.
pub fn subcover(f: &PLMap, u: &Neighborhood, s: &RadiusSearch) -> Result<SubcoverCertificate> {
    let complement = u.u.complement_within(f.domain());
    let mut pieces = Vec::new();
    for part in complement.parts() {
        let mut p = part.lo.clone();
        while p <= part.hi {
            let r = two_point_radius_with(f, &p, s)?;
            if r.flagged() {
                return Err(Error::CoverFailed { probe: p });
            }
            let v = Interval::open(&p - &r.delta, &p + &r.delta);
            let next = v.hi.clone();
            pieces.push(CoverPiece {
                center: p,
                radius: r.delta,
                v,
                max_in_ball: r.max_in_ball,
            });
            p = next;
        }
    }
    let m = pieces.len();
    Ok(SubcoverCertificate {
        complement,
        pieces,
        m,
        big_m: 2 * m,
        scan_params: s.clone(),
    })
}

// ---------------------------------------------------------------- excursions

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ScanVerdict {
    Plateau,
    Growing,
}

impl ScanVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            ScanVerdict::Plateau => "PLATEAU",
            ScanVerdict::Growing => "GROWING",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchKind {
    Exhaustive,
    Sampled,
    /// Extended by always taking a preimage outside `U` when one exists.
    Greedy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchId {
    pub seed_index: usize,
    pub kind: BranchKind,
    /// Sample index, or the lap path for exhaustive branches.
    pub index: usize,
    pub path: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchExcursion {
    pub id: BranchId,
    pub outside_count: usize,
    pub witnesses: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExcursionReport {
    pub seeds: Vec<Rat>,
    pub depth_max: usize,
    pub samples: usize,
    pub seed: u64,
    /// Worst exhaustive branch per seed, the greedy branches, then every
    /// sampled branch.
    #[serde(skip)]
    pub per_branch: Vec<BranchExcursion>,
    /// The branches with the largest outside counts (report view).
    pub worst: Vec<BranchExcursion>,
    /// `max_by_depth[d]`: largest outside count among branch prefixes of length `d + 1`.
    pub max_by_depth: Vec<usize>,
    /// Seeds whose exhaustive phase was skipped for exceeding the leaf budget.
    pub exhaustive_skipped: Vec<usize>,
    pub empirical_m: usize,
    pub certified_m: Option<usize>,
    pub verdict: ScanVerdict,
}

/// Parameters of [`excursion_scan`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanParams {
    pub depth_max: usize,
    pub samples: usize,
    pub seed: u64,
    pub exhaustive_depth: usize,
    pub exhaustive_budget: usize,
}

impl ScanParams {
    pub fn new(depth_max: usize, samples: usize, seed: u64) -> Self {
        ScanParams {
            depth_max,
            samples,
            seed,
            exhaustive_depth: 12,
            exhaustive_budget: 1 << 14,
        }
    }
}

struct Outside<'a> {
    u: &'a Neighborhood,
    cur: usize,
    stack: Vec<bool>,
    max_by_depth: Vec<usize>,
    worst: Option<(usize, Vec<Rat>, Vec<usize>)>,
}

impl BranchVisitor for Outside<'_> {
    fn enter(&mut self, index: usize, value: &Rat) {
        let out = !self.u.contains(value);
        self.cur += out as usize;
        self.stack.push(out);
        if self.max_by_depth.len() <= index {
            self.max_by_depth.resize(index + 1, 0);
        }
        self.max_by_depth[index] = self.max_by_depth[index].max(self.cur);
    }

    fn leave(&mut self, _index: usize, _value: &Rat) {
        if self.stack.pop().unwrap() {
            self.cur -= 1;
        }
    }

    fn leaf(&mut self, points: &[Rat], path: &[usize]) -> bool {
        if self.worst.as_ref().is_none_or(|w| self.cur > w.0) {
            self.worst = Some((self.cur, points.to_vec(), path.to_vec()));
        }
        true
    }
}

const WORST_SHOWN: usize = 16;

/// Extends `start` to `depth` points past the root, at each step taking the
/// lowest-lap preimage outside `U`, or the lowest-lap preimage if all are inside.
fn greedy_extend(f: &PLMap, u: &Neighborhood, mut b: Branch, depth: usize) -> Branch {
    while b.depth() < depth {
        let pre = f.preimages_with_laps(b.deepest());
        let (x, lap) = pre.iter().find(|(x, _)| !u.contains(x)).unwrap_or(&pre[0]).clone();
        b.points.push(x);
        b.path.push(lap);
    }
    b
}

fn prefix_counts(b: &Branch, u: &Neighborhood) -> Vec<usize> {
    let mut c = 0;
    b.points
        .iter()
        .map(|q| {
            c += !u.contains(q) as usize;
            c
        })
        .collect()
}

fn merge_max(into: &mut Vec<usize>, from: &[usize]) {
    if into.len() < from.len() {
        into.resize(from.len(), 0);
    }
    for (a, b) in into.iter_mut().zip(from) {
        *a = (*a).max(*b);
    }
}

/// Outside counts of exhaustive shallow branches, greedy outside-seeking
/// branches and sampled deep branches from every seed, with the per-depth
/// running maximum.
pub fn excursion_scan(f: &PLMap, u: &Neighborhood, seeds: &[Rat], p: &ScanParams) -> Result<ExcursionReport> {
    let ex_depth = p.depth_max.min(p.exhaustive_depth);
    let mut per_branch = Vec::new();
    let mut max_by_depth = vec![0usize; p.depth_max + 1];
    let mut exhaustive_skipped = Vec::new();
    let mut greedy_starts: Vec<(usize, usize, Branch)> = Vec::new();
    for (si, x) in seeds.iter().enumerate() {
        f.eval(x)?;
        match count_branches(f, x, ex_depth, p.exhaustive_budget) {
            Err(Error::BranchCapExceeded { .. }) => exhaustive_skipped.push(si),
            Err(e) => return Err(e),
            Ok(_) => {
                let (parts, _) = par_walk_branches(f, x, ex_depth, usize::MAX, || Outside {
                    u,
                    cur: 0,
                    stack: Vec::new(),
                    max_by_depth: Vec::new(),
                    worst: None,
                })?;
                let mut worst: Option<(usize, Vec<Rat>, Vec<usize>)> = None;
                for v in parts {
                    merge_max(&mut max_by_depth, &v.max_by_depth);
                    if let Some(w) = v.worst {
                        if worst.as_ref().is_none_or(|b| w.0 > b.0) {
                            worst = Some(w);
                        }
                    }
                }
                if let Some((_, points, path)) = worst {
                    let b = Branch { points, path };
                    let (c, wit) = count_outside(&b, u);
                    per_branch.push(BranchExcursion {
                        id: BranchId {
                            seed_index: si,
                            kind: BranchKind::Exhaustive,
                            index: 0,
                            path: b.path.clone(),
                        },
                        outside_count: c,
                        witnesses: wit,
                    });
                    if p.depth_max > ex_depth {
                        greedy_starts.push((si, 1, b));
                    }
                }
            }
        }
        greedy_starts.push((
            si,
            0,
            Branch {
                points: vec![x.clone()],
                path: Vec::new(),
            },
        ));
    }
    greedy_starts.sort_by_key(|g| (g.0, g.1));
    for (si, idx, start) in greedy_starts {
        let b = greedy_extend(f, u, start, p.depth_max);
        merge_max(&mut max_by_depth, &prefix_counts(&b, u));
        let (count, witnesses) = count_outside(&b, u);
        per_branch.push(BranchExcursion {
            id: BranchId {
                seed_index: si,
                kind: BranchKind::Greedy,
                index: idx,
                path: b.path,
            },
            outside_count: count,
            witnesses,
        });
    }
    let sampler = BranchSampler::new(p.seed);
    let jobs: Vec<(usize, usize)> = (0..seeds.len())
        .flat_map(|si| (0..p.samples).map(move |i| (si, i)))
        .collect();
    let sampled: Vec<Result<(BranchExcursion, Vec<usize>)>> = jobs
        .par_iter()
        .map(|&(si, i)| {
            let b = sample_branch(f, &seeds[si], p.depth_max, &sampler.derive(si as u64).derive(i as u64))?;
            let prefix = prefix_counts(&b, u);
            let (count, witnesses) = count_outside(&b, u);
            Ok((
                BranchExcursion {
                    id: BranchId {
                        seed_index: si,
                        kind: BranchKind::Sampled,
                        index: i,
                        path: b.path,
                    },
                    outside_count: count,
                    witnesses,
                },
                prefix,
            ))
        })
        .collect();
    for s in sampled {
        let (e, prefix) = s?;
        merge_max(&mut max_by_depth, &prefix);
        per_branch.push(e);
    }
    for d in 1..max_by_depth.len() {
        max_by_depth[d] = max_by_depth[d].max(max_by_depth[d - 1]);
    }
    let d = p.depth_max;
    let window_start = (2 * d).div_ceil(3);
    let verdict = if max_by_depth[window_start] == max_by_depth[d] {
        ScanVerdict::Plateau
    } else {
        ScanVerdict::Growing
    };
    let mut worst = per_branch.clone();
    // stable: ties keep scan order
    worst.sort_by_key(|b| std::cmp::Reverse(b.outside_count));
    worst.truncate(WORST_SHOWN);
    Ok(ExcursionReport {
        seeds: seeds.to_vec(),
        depth_max: d,
        samples: p.samples,
        seed: p.seed,
        per_branch,
        worst,
        empirical_m: max_by_depth[d],
        max_by_depth,
        exhaustive_skipped,
        certified_m: None,
        verdict,
    })
}

// ---------------------------------------------------------------- pipeline

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Target {
    A,
    SA,
}

impl std::str::FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(Target::A),
            "SA" => Ok(Target::SA),
            _ => Err(Error::InvalidParameter(format!(
                "unknown target `{s}` (expected A or SA)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyParams {
    /// Resolution of the limit-set approximation that `U` inflates.
    pub point: PointParams,
    pub grid_step: Rat,
    pub radius: RadiusSearch,
    pub scan: ScanParams,
    /// Spacing of the excursion-scan seeds.
    pub seed_step: Rat,
}

impl VerifyParams {
    pub fn new(depth: usize, samples: usize, seed: u64) -> Self {
        let eps = Rat::new(1, 64);
        VerifyParams {
            grid_step: Rat::new(1, 32),
            point: PointParams::new(eps),
            radius: RadiusSearch::new(depth, samples, seed),
            scan: ScanParams::new(depth, samples, seed),
            seed_step: Rat::new(1, 16),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub target: Target,
    pub margin: Rat,
    pub neighborhood: Neighborhood,
    /// Whether `U` contains the ω(f) approximation's cells.
    pub covers_omega: bool,
    pub certificate: Option<SubcoverCertificate>,
    pub cover_failed_at: Option<Rat>,
    pub scan: Option<ExcursionReport>,
    pub verdict: crate::chain::Verdict,
}

/// Evenly spaced points of the domain, both ends included.
pub fn grid_points(domain: &Interval, step: &Rat) -> Vec<Rat> {
    let mut out = Vec::new();
    let mut x = domain.lo.clone();
    while x < domain.hi {
        out.push(x.clone());
        x = x + step;
    }
    out.push(domain.hi.clone());
    out
}

/// Outcome of [`verify_neighborhood`].
#[derive(Clone, Debug, Serialize)]
pub struct NeighborhoodCheck {
    pub certificate: Option<SubcoverCertificate>,
    /// First probe without a two-point neighborhood, when the subcover failed.
    pub cover_failed_at: Option<Rat>,
    pub scan: Option<ExcursionReport>,
    pub verdict: crate::chain::Verdict,
}

/// Subcover then excursion scan for an explicit neighborhood.
pub fn verify_neighborhood(f: &PLMap, u: &Neighborhood, params: &VerifyParams) -> Result<NeighborhoodCheck> {
    use crate::chain::Verdict;
    let cert = match subcover(f, u, &params.radius) {
        Ok(c) => c,
        Err(Error::CoverFailed { probe }) => {
            return Ok(NeighborhoodCheck {
                certificate: None,
                cover_failed_at: Some(probe),
                scan: None,
                verdict: Verdict::Fail,
            })
        }
        Err(e) => return Err(e),
    };
    let seeds = grid_points(f.domain(), &params.seed_step);
    let mut scan = excursion_scan(f, u, &seeds, &params.scan)?;
    scan.certified_m = Some(cert.big_m);
    let ok = scan.verdict == ScanVerdict::Plateau && scan.empirical_m <= cert.big_m;
    Ok(NeighborhoodCheck {
        certificate: Some(cert),
        cover_failed_at: None,
        scan: Some(scan),
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
    })
}

/// `U` = `margin`-inflation of the approximated target set (for SA also the
/// ω(f) approximation), then [`verify_neighborhood`].
pub fn verify_theorem(f: &PLMap, target: Target, margin: &Rat, params: &VerifyParams) -> Result<TheoremReport> {
    if !margin.is_positive() {
        return Err(Error::InvalidParameter("margin must be positive".into()));
    }
    let kind = match target {
        Target::A => LimitKind::Alpha,
        Target::SA => LimitKind::Salpha,
    };
    let approx = aggregate(f, kind, &params.grid_step, &params.point)?;
    let omega = aggregate(f, LimitKind::Omega, &params.grid_step, &params.point)?;
    let mut u = approx.inflate(margin);
    if target == Target::SA {
        u = u.union(&omega.inflate(margin));
    }
    let grid = CellGrid::new(f.domain(), &params.point.eps)?;
    let covers_omega = omega.cells().iter().all(|&k| u.contains_interval(&grid.cell_bounds(k)));
    let label = match target {
        Target::A => NeighborhoodLabel::A,
        Target::SA => NeighborhoodLabel::SA,
    };
    let neighborhood = Neighborhood::new(u, label);
    let check = verify_neighborhood(f, &neighborhood, params)?;
    Ok(TheoremReport {
        target,
        margin: margin.clone(),
        neighborhood,
        covers_omega,
        certificate: check.certificate,
        cover_failed_at: check.cover_failed_at,
        scan: check.scan,
        verdict: check.verdict,
    })
}
