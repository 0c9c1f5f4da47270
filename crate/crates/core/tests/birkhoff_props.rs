//! Properties of neighborhoods, subcovers and excursion scans.

use proptest::prelude::*;

use backlimit::backward::sample_branch;
use backlimit::birkhoff::{
    count_outside, excursion_scan, grid_points, subcover, two_point_radius, Neighborhood, NeighborhoodLabel,
    RadiusSearch, ScanParams, ScanVerdict,
};
use backlimit::cells::CellGrid;
use backlimit::fixtures::fixture_map;
use backlimit::limit_sets::{aggregate, LimitKind, PointParams};
use backlimit::sampler::BranchSampler;
use backlimit::{Interval, IntervalUnion, Rat};

mod common;
use common::arb_unit;

fn fig1_u() -> Neighborhood {
    Neighborhood::open_union(
        &[
            (Rat::new(-1, 100), Rat::new(1, 100)),
            (Rat::new(49, 100), Rat::new(203, 300)),
            (Rat::new(99, 100), Rat::new(101, 100)),
        ],
        NeighborhoodLabel::Custom,
    )
    .unwrap()
}

fn arb_open_intervals() -> impl Strategy<Value = Vec<(Rat, Rat)>> {
    proptest::collection::vec((arb_unit(), arb_unit()), 0..4).prop_map(|v| {
        v.into_iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| if a < b { (a, b) } else { (b, a) })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn count_outside_shrinks_as_u_grows(
        base in arb_open_intervals(),
        extra in arb_open_intervals(),
        x in arb_unit(),
        seed in any::<u64>(),
        tent in any::<bool>(),
    ) {
        let f = fixture_map(if tent { "tent" } else { "fig1" }).unwrap();
        let b = sample_branch(&f, &x, 30, &BranchSampler::new(seed)).unwrap();
        let small = Neighborhood::open_union(&base, NeighborhoodLabel::Custom).unwrap();
        let mut all = base.clone();
        all.extend(extra);
        let big = Neighborhood::open_union(&all, NeighborhoodLabel::Custom).unwrap();
        let (c_small, w_small) = count_outside(&b, &small);
        let (c_big, w_big) = count_outside(&b, &big);
        prop_assert!(c_big <= c_small);
        prop_assert_eq!(w_small.len(), c_small);
        prop_assert!(w_big.iter().all(|i| w_small.contains(i)));
    }
}

#[test]
fn certificate_covers_and_bounds_fresh_scans() {
    let f = fixture_map("fig1").unwrap();
    let u = fig1_u();
    let cert = subcover(&f, &u, &RadiusSearch::new(30, 100, 0)).unwrap();
    assert!(cert.covers(&u, f.domain()));
    assert_eq!(cert.big_m, 2 * cert.m);
    for seed in [17u64, 18] {
        let seeds = grid_points(f.domain(), &Rat::new(1, 12));
        let scan = excursion_scan(&f, &u, &seeds, &ScanParams::new(30, 100, seed)).unwrap();
        assert!(
            scan.empirical_m <= cert.big_m,
            "seed {seed}: {} > {}",
            scan.empirical_m,
            cert.big_m
        );
        assert!(scan.max_by_depth.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn plateau_survives_more_samples_and_a_new_seed() {
    let f = fixture_map("fig1").unwrap();
    let u = fig1_u();
    let seeds = grid_points(f.domain(), &Rat::new(1, 16));
    let a = excursion_scan(&f, &u, &seeds, &ScanParams::new(30, 100, 1)).unwrap();
    let b = excursion_scan(&f, &u, &seeds, &ScanParams::new(30, 200, 2)).unwrap();
    assert_eq!(a.verdict, ScanVerdict::Plateau);
    assert_eq!(b.verdict, a.verdict);
}

#[test]
fn flagged_probes_lie_near_omega() {
    for name in ["fig1", "tent"] {
        let f = fixture_map(name).unwrap();
        let eps = Rat::new(1, 64);
        let grid = CellGrid::new(f.domain(), &eps).unwrap();
        let omega = aggregate(&f, LimitKind::Omega, &Rat::new(1, 32), &PointParams::new(eps.clone())).unwrap();
        let mut flagged = 0;
        for x in grid_points(f.domain(), &Rat::new(1, 16)) {
            let probe = two_point_radius(&f, &x, 24, 60, 3).unwrap();
            if probe.flagged() {
                flagged += 1;
                let k = grid.cell_of(&x);
                assert!(
                    (k - 1..=k + 1).any(|j| omega.contains_cell(j)),
                    "{name}: flagged probe {x} is not within one cell of the omega approximation"
                );
            }
        }
        assert!(flagged > 0, "{name}: no probe flagged");
    }
}

#[test]
fn neighborhood_of_everything_has_no_excursions() {
    let f = fixture_map("tent").unwrap();
    let all = Neighborhood::new(
        IntervalUnion::from_parts([Interval::closed(Rat::zero(), Rat::one())]),
        NeighborhoodLabel::Custom,
    );
    let cert = subcover(&f, &all, &RadiusSearch::new(10, 10, 0)).unwrap();
    assert_eq!((cert.m, cert.big_m), (0, 0));
    let scan = excursion_scan(&f, &all, &[Rat::new(1, 3)], &ScanParams::new(20, 20, 0)).unwrap();
    assert_eq!(scan.empirical_m, 0);
}
