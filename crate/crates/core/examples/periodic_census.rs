//! Periodic orbits of the tent map by exact iteration.
//!
//!     cargo run --example periodic_census

use backlimit::fixtures::fixture_map;
use backlimit::limit_sets::periodic_points;

fn main() -> backlimit::Result<()> {
    let t = fixture_map("tent")?;
    let census = periodic_points(&t, 6, 1 << 10)?;
    for p in 1..=6 {
        let orbits: Vec<_> = census.orbits_of_period(p).collect();
        println!(
            "p={p}: {:3} solutions of f^p(x)=x, {:2} orbits of minimal period {p}",
            census.isolated_solutions[p - 1],
            orbits.len()
        );
    }
    for o in census.orbits_of_period(3) {
        println!("  {:?}", o.points);
    }
    Ok(())
}
