//! Properties of the limit-set approximations.

use proptest::prelude::*;

use backlimit::backward::branches;
use backlimit::cells::{CellGrid, EpsSet};
use backlimit::fixtures::fixture_map;
use backlimit::limit_sets::{
    alpha_approx, alpha_branch_approx, nonwandering_cells, omega_approx, periodic_points, recurrent_approx,
    salpha_approx, PeriodicSeeds, SalphaMode,
};
use backlimit::Rat;

mod common;
use common::{arb_map, arb_unit};

fn fixture_strategy() -> impl Strategy<Value = &'static str> {
    prop_oneof![Just("tent"), Just("fig1"), Just("identity")]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn branch_within_salpha_within_alpha(
        name in fixture_strategy(),
        x in arb_unit(),
        min_hits in 2usize..=3,
    ) {
        let f = fixture_map(name).unwrap();
        let eps = Rat::new(1, 32);
        let (depth, tail) = (10, 4);
        let alpha = alpha_approx(&f, &x, depth, tail, min_hits, &eps, 1_000_000).unwrap();
        let mode = SalphaMode::Exhaustive { branch_cap: 1 << 12 };
        let salpha = salpha_approx(&f, &x, depth, tail, min_hits, &eps, mode).unwrap();
        prop_assert!(salpha.subset_within(&alpha, 0), "{:?} vs {:?}", salpha.cells(), alpha.cells());
        for b in branches(&f, &x, depth, 1 << 12).unwrap() {
            let one = alpha_branch_approx(&f, &b, tail, min_hits, &eps).unwrap();
            prop_assert!(one.subset_within(&salpha, 0));
        }
    }

    #[test]
    fn sampled_salpha_is_inside_exhaustive(x in arb_unit(), seed in any::<u64>()) {
        let f = fixture_map("tent").unwrap();
        let eps = Rat::new(1, 32);
        let full = salpha_approx(&f, &x, 10, 4, 1, &eps, SalphaMode::Exhaustive { branch_cap: 1 << 12 }).unwrap();
        let some = salpha_approx(&f, &x, 10, 4, 1, &eps, SalphaMode::Sampled { n: 20, seed }).unwrap();
        prop_assert!(some.subset_within(&full, 0));
    }

    #[test]
    fn omega_of_cycle_points_is_the_cycle(f in arb_map(4), n_skip in 0usize..12, extra in 0usize..8) {
        let eps = Rat::new(1, 64);
        let grid = CellGrid::new(f.domain(), &eps).unwrap();
        let census = periodic_points(&f, 3, 4096).unwrap();
        for o in &census.orbits {
            let expected = EpsSet::from_points(grid.clone(), o.points.iter());
            for q in &o.points {
                let w = omega_approx(&f, q, n_skip, o.period + extra, &eps).unwrap();
                prop_assert_eq!(w.cells(), expected.cells());
            }
        }
    }

    #[test]
    fn periodic_points_have_their_minimal_period(f in arb_map(4)) {
        let census = periodic_points(&f, 3, 4096).unwrap();
        for o in &census.orbits {
            for q in &o.points {
                prop_assert_eq!(&f.eval_iter(q, o.period).unwrap(), q);
                for d in 1..o.period {
                    if o.period % d == 0 {
                        prop_assert_ne!(&f.eval_iter(q, d).unwrap(), q);
                    }
                }
            }
        }
        for (p, &n) in census.isolated_solutions.iter().enumerate() {
            let from_orbits: usize = census
                .orbits
                .iter()
                .filter(|o| (p + 1) % o.period == 0)
                .map(|o| o.points.len())
                .sum();
            if census.bands.is_empty() {
                prop_assert_eq!(from_orbits, n);
            } else {
                // solutions lying inside identity bands are not isolated
                prop_assert!(from_orbits >= n);
            }
        }
    }

    #[test]
    fn refining_never_adds_nonwandering_cells(f in arb_map(4), n_max in 1usize..10, fewer in 0usize..3) {
        let eps = Rat::new(1, 16);
        let coarse = nonwandering_cells(&f, &eps, n_max).unwrap();
        let fine = nonwandering_cells(&f, &(&eps / Rat::from_int(2)), n_max.saturating_sub(fewer).max(1)).unwrap();
        for &k in fine.cells() {
            prop_assert!(coarse.contains_cell(k.div_euclid(2)), "fine cell {} outside coarse NW", k);
        }
    }

    #[test]
    fn recurrent_cells_are_nonwandering(f in arb_map(4)) {
        let eps = Rat::new(1, 32);
        let rec = recurrent_approx(&f, &eps, 0, 16, PeriodicSeeds::default()).unwrap();
        let nw = nonwandering_cells(&f, &eps, 16).unwrap();
        prop_assert!(rec.subset_within(&nw, 0), "{:?}", rec.excess_over(&nw, 0));
    }

    #[test]
    fn fixed_points_lie_in_their_alpha_set(f in arb_map(4)) {
        let eps = Rat::new(1, 16);
        let grid = CellGrid::new(f.domain(), &eps).unwrap();
        for q in &f.fixed_points().points {
            let a = alpha_approx(&f, q, 5, 2, 2, &eps, 1_000_000).unwrap();
            prop_assert!(a.contains_cell(grid.cell_of(q)));
        }
    }
}

#[test]
fn tent_cycle_omega_is_exactly_two_cells() {
    let f = fixture_map("tent").unwrap();
    let w = omega_approx(&f, &Rat::new(2, 5), 0, 2, &Rat::new(1, 64)).unwrap();
    assert_eq!(w.cells().iter().copied().collect::<Vec<_>>(), vec![25, 51]);
}
