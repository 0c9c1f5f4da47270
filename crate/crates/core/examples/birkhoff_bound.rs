//! Finite subcover by two-point neighborhoods and the resulting bound on how
//! often a backward branch leaves U.
//!
//!     cargo run --example birkhoff_bound

use backlimit::birkhoff::{
    excursion_scan, grid_points, subcover, Neighborhood, NeighborhoodLabel, RadiusSearch, ScanParams,
};
use backlimit::fixtures::fixture_map;
use backlimit::Rat;

fn main() -> backlimit::Result<()> {
    let f = fixture_map("fig1")?;
    let u = Neighborhood::open_union(
        &[
            (Rat::new(-1, 100), Rat::new(1, 100)),
            (Rat::new(49, 100), Rat::new(203, 300)),
            (Rat::new(99, 100), Rat::new(101, 100)),
        ],
        NeighborhoodLabel::Custom,
    )?;

    let cert = subcover(&f, &u, &RadiusSearch::new(40, 200, 0))?;
    println!("outside U: {}", cert.complement);
    println!("m = {} pieces, M = {}", cert.m, cert.big_m);
    for p in cert.pieces.iter().take(4) {
        println!("  around {} radius {}: {}", p.center, p.radius, p.v);
    }

    let seeds = grid_points(f.domain(), &Rat::new(1, 16));
    let scan = excursion_scan(&f, &u, &seeds, &ScanParams::new(40, 200, 0))?;
    println!("max outside count by depth: {:?}", scan.max_by_depth);
    println!(
        "{} with empirical max {} <= M = {}",
        scan.verdict.name(),
        scan.empirical_m,
        cert.big_m
    );

    // the tent map has A = [0,1]; U = (1/10, 9/10) leaves out limit points
    let t = fixture_map("tent")?;
    let bad = Neighborhood::open_union(&[(Rat::new(1, 10), Rat::new(9, 10))], NeighborhoodLabel::Custom)?;
    match subcover(&t, &bad, &RadiusSearch::new(20, 50, 0)) {
        Err(e) => println!("tent: {e}"),
        Ok(c) => println!("tent: unexpected cover with m = {}", c.m),
    }
    Ok(())
}
