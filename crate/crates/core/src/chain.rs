//! Inclusion chain Fix ⊂ Per ⊂ Rec ⊂ SA ⊂ cl(Rec) ⊂ ω(f) ⊂ NW ⊂ A and the
//! periodic-orbit property "α(x) meets P implies sα(x) contains P".

use serde::Serialize;

use crate::cells::{CellGrid, EpsSet};
use crate::error::Result;
use crate::limit_sets::{
    aggregate, alpha_approx, nonwandering_cells, periodic_points, recurrent_approx, salpha_approx, LimitKind,
    PeriodicOrbit, PointParams, SalphaMode,
};
use crate::plmap::PLMap;
use crate::rat::Rat;

/// Which side an approximation errs on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Computed exactly (up to cell resolution).
    Exact,
    /// May miss cells of the true set.
    Inner,
    /// May contain extra cells.
    Outer,
    /// Neither.
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Vacuous,
    Skipped,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Vacuous => "VACUOUS",
            Verdict::Skipped => "SKIPPED",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainSet {
    pub name: &'static str,
    pub direction: Direction,
    /// Contains the cells of every periodic point of small period by construction.
    pub seeded: bool,
    pub set: EpsSet,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairCheck {
    pub left: &'static str,
    pub right: &'static str,
    pub status: Verdict,
    /// Cells of the left set with no right cell within the slack.
    pub excess: Vec<i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub eps: Rat,
    pub slack: i64,
    pub sets: Vec<ChainSet>,
    pub pairs: Vec<PairCheck>,
    /// Cells of the A approximation missing from NW: witnesses for NW ⊉ A.
    pub a_minus_nw: Vec<i64>,
    pub verdict: Verdict,
}

impl ChainReport {
    pub fn set(&self, name: &str) -> Option<&EpsSet> {
        self.sets.iter().find(|s| s.name == name).map(|s| &s.set)
    }

    pub fn pair(&self, left: &str, right: &str) -> Option<&PairCheck> {
        self.pairs.iter().find(|p| p.left == left && p.right == right)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainParams {
    pub point: PointParams,
    pub grid_step: Rat,
    pub nw_n_max: usize,
    pub rec_n_skip: usize,
    pub rec_n_keep: usize,
    pub slack: i64,
}

impl ChainParams {
    pub fn new(eps: Rat) -> Self {
        ChainParams {
            grid_step: eps.clone(),
            point: PointParams::new(eps),
            nw_n_max: 32,
            rec_n_skip: 0,
            rec_n_keep: 32,
            slack: 1,
        }
    }
}

/// Whether `left ⊂ right` can be certified from approximations with these
/// directions.
fn comparable(left: &ChainSet, right: &ChainSet) -> bool {
    let right_upper = matches!(right.direction, Direction::Exact | Direction::Outer);
    (right_upper && left.direction != Direction::Mixed) || (left.direction == Direction::Exact && right.seeded)
}

pub fn chain_check(f: &PLMap, params: &ChainParams) -> Result<ChainReport> {
    let eps = &params.point.eps;
    let grid = CellGrid::new(f.domain(), eps)?;
    let fp = f.fixed_points();
    let mut fix = EpsSet::from_points(grid.clone(), fp.points.iter());
    for s in &fp.segments {
        fix.insert_interval(s);
    }
    let per = periodic_points(f, params.point.periodic.p_max, params.point.periodic.lap_cap)?.cells(&grid);
    let rec = recurrent_approx(f, eps, params.rec_n_skip, params.rec_n_keep, params.point.periodic)?;
    let sa = aggregate(f, LimitKind::Salpha, &params.grid_step, &params.point)?;
    let omega = aggregate(f, LimitKind::Omega, &params.grid_step, &params.point)?;
    let nw = nonwandering_cells(f, eps, params.nw_n_max)?;
    let a = aggregate(f, LimitKind::Alpha, &params.grid_step, &params.point)?;
    let a_minus_nw = a.difference(&nw);

    let mk = |name, direction, seeded, set| ChainSet {
        name,
        direction,
        seeded,
        set,
    };
    let sets = vec![
        mk("Fix", Direction::Exact, true, fix),
        mk("Per", Direction::Exact, true, per),
        mk("Rec", Direction::Inner, true, rec.clone()),
        mk("SA", Direction::Mixed, true, sa),
        mk("clRec", Direction::Inner, true, rec),
        mk("omega", Direction::Inner, true, omega),
        mk("NW", Direction::Outer, false, nw),
        mk("A", Direction::Outer, true, a),
    ];
    let mut pairs = Vec::new();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            let (l, r) = (&sets[i], &sets[j]);
            let (status, excess) = if comparable(l, r) {
                let ex = l.set.excess_over(&r.set, params.slack);
                (if ex.is_empty() { Verdict::Pass } else { Verdict::Fail }, ex)
            } else {
                (Verdict::Skipped, Vec::new())
            };
            pairs.push(PairCheck {
                left: l.name,
                right: r.name,
                status,
                excess,
            });
        }
    }
    let verdict = if pairs.iter().any(|p| p.status == Verdict::Fail) {
        Verdict::Fail
    } else {
        Verdict::Pass
    };
    Ok(ChainReport {
        eps: eps.clone(),
        slack: params.slack,
        sets,
        pairs,
        a_minus_nw,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KmsParams {
    pub eps: Rat,
    pub depth: usize,
    pub tail_start: usize,
    pub min_hits: usize,
    pub node_cap: usize,
    pub mode: SalphaMode,
    pub slack: i64,
}

impl KmsParams {
    pub fn new(eps: Rat) -> Self {
        KmsParams {
            eps,
            depth: 16,
            tail_start: 6,
            min_hits: 2,
            node_cap: 1_000_000,
            mode: SalphaMode::Exhaustive { branch_cap: 1 << 20 },
            slack: 1,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KmsReport {
    pub orbit: PeriodicOrbit,
    pub x: Rat,
    pub alpha: EpsSet,
    pub salpha: EpsSet,
    pub orbit_cells: EpsSet,
    /// Orbit cells not covered by the sα approximation.
    pub missing: Vec<i64>,
    pub verdict: Verdict,
}

/// If the α approximation of `x` meets the orbit's cells, checks that the
/// sα approximation covers every one of them.
pub fn kms_check(f: &PLMap, orbit: &PeriodicOrbit, x: &Rat, params: &KmsParams) -> Result<KmsReport> {
    let grid = CellGrid::new(f.domain(), &params.eps)?;
    let orbit_cells = EpsSet::from_points(grid, orbit.points.iter());
    let alpha = alpha_approx(
        f,
        x,
        params.depth,
        params.tail_start,
        params.min_hits,
        &params.eps,
        params.node_cap,
    )?;
    let salpha = salpha_approx(
        f,
        x,
        params.depth,
        params.tail_start,
        params.min_hits,
        &params.eps,
        params.mode,
    )?;
    let (missing, verdict) = if !alpha.intersects(&orbit_cells) {
        (Vec::new(), Verdict::Vacuous)
    } else {
        let m = orbit_cells.excess_over(&salpha, params.slack);
        let v = if m.is_empty() { Verdict::Pass } else { Verdict::Fail };
        (m, v)
    };
    Ok(KmsReport {
        orbit: orbit.clone(),
        x: x.clone(),
        alpha,
        salpha,
        orbit_cells,
        missing,
        verdict,
    })
}
