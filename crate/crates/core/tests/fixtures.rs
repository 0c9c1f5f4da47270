//! Every documented fixture property, re-derived from the map definition.

use backlimit::backward::{branches, preimage_tree};
use backlimit::cells::CellGrid;
use backlimit::fixtures::{fixture, fixture_map, list_fixtures};
use backlimit::limit_sets::{alpha_approx, nonwandering_cells, omega_approx, periodic_points};
use backlimit::{Interval, Rat};

fn q(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

fn closed(a: Rat, b: Rat) -> Interval {
    Interval::closed(a, b)
}

#[test]
fn every_fixture_documents_its_properties() {
    for name in list_fixtures() {
        let fx = fixture(name).unwrap();
        assert_eq!(fx.name, name);
        assert!(!fx.documented_properties.is_empty());
        assert_eq!(
            fx.map.image_interval(fx.map.domain()).unwrap(),
            *fx.map.domain(),
            "{name} is onto"
        );
    }
}

#[test]
fn fig1_properties() {
    let f = fixture_map("fig1").unwrap();
    assert_eq!(f.domain(), &closed(q(0, 1), q(1, 1)));
    assert_eq!(f.eval(&q(1, 4)).unwrap(), q(1, 1));
    assert_eq!(f.eval(&q(1, 1)).unwrap(), q(1, 1));
    assert_eq!(f.preimage_point(&q(1, 4)), vec![q(1, 16)]);

    // laps 2 and 3 cover [1/4, 1] and both have range [1/2, 1]
    assert_eq!(
        f.image_interval(&closed(q(1, 4), q(5, 8))).unwrap(),
        closed(q(1, 2), q(1, 1))
    );
    assert_eq!(
        f.image_interval(&closed(q(5, 8), q(1, 1))).unwrap(),
        closed(q(1, 2), q(1, 1))
    );
    assert_eq!(
        f.image_interval(&closed(q(1, 2), q(1, 1))).unwrap(),
        closed(q(1, 2), q(1, 1))
    );
    // f on [1/4, 1/2] is decreasing from 1 to 2/3, so f((1/4,1/2)) lies in (1/2, 1]
    assert_eq!(f.eval(&q(1, 2)).unwrap(), q(2, 3));
    assert_eq!(
        f.image_interval(&closed(q(1, 4), q(1, 2))).unwrap(),
        closed(q(2, 3), q(1, 1))
    );

    let mid = Interval::open(q(1, 4), q(1, 2));
    for k in 0..=16 {
        for b in branches(&f, &q(k, 16), 8, 100_000).unwrap() {
            assert!(
                b.points.iter().filter(|p| mid.contains(p)).count() <= 1,
                "{:?}",
                b.points
            );
        }
    }

    let fp = f.fixed_points();
    assert_eq!(fp.points, vec![q(0, 1), q(4, 7), q(1, 1)]);
    assert!(fp.segments.is_empty());

    let tree = preimage_tree(&f, &q(1, 4), 12, 1000).unwrap();
    let mut expected = q(1, 4);
    for k in 1..=12 {
        expected = expected * q(1, 4);
        assert_eq!(tree.level_values(k), vec![expected.clone()]);
    }

    let eps = q(1, 64);
    let grid = CellGrid::new(f.domain(), &eps).unwrap();
    let nw = nonwandering_cells(&f, &eps, 20).unwrap();
    assert!(!nw.contains_cell(grid.cell_of(&q(1, 4))));
    let a1 = alpha_approx(&f, &q(1, 1), 20, 6, 2, &eps, 1_000_000).unwrap();
    assert!(a1.contains_cell(grid.cell_of(&q(1, 4))));
}

#[test]
fn tent_properties() {
    let t = fixture_map("tent").unwrap();
    assert_eq!(t.lap_count(), 2);
    assert_eq!(t.fixed_points().points, vec![q(0, 1), q(2, 3)]);
    let census = periodic_points(&t, 8, 1 << 10).unwrap();
    for p in 1..=8 {
        assert_eq!(census.isolated_solutions[p - 1], 1 << p);
        assert_eq!(census.laps_per_iterate[p - 1], 1 << p);
    }
    assert!(nonwandering_cells(&t, &q(1, 32), 16).unwrap().is_full());
}

#[test]
fn identity_properties() {
    let id = fixture_map("identity").unwrap();
    let fp = id.fixed_points();
    assert!(fp.points.is_empty());
    assert_eq!(fp.segments, vec![closed(q(0, 1), q(1, 1))]);
    let eps = q(1, 32);
    let grid = CellGrid::new(id.domain(), &eps).unwrap();
    for k in 0..=10 {
        let x = q(k, 10);
        let only_x = vec![grid.cell_of(&x)];
        let w = omega_approx(&id, &x, 3, 5, &eps).unwrap();
        assert_eq!(w.cells().iter().copied().collect::<Vec<_>>(), only_x);
        let a = alpha_approx(&id, &x, 8, 2, 2, &eps, 1000).unwrap();
        assert_eq!(a.cells().iter().copied().collect::<Vec<_>>(), only_x);
    }
}
