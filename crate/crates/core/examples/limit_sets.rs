//! ω, α and sα approximations of single points, and their unions over a grid.
//!
//!     cargo run --example limit_sets

use backlimit::fixtures::fixture_map;
use backlimit::limit_sets::{aggregate, omega_approx, point_limit_set, LimitKind, PointParams};
use backlimit::Rat;

fn main() -> backlimit::Result<()> {
    let f = fixture_map("fig1")?;
    let eps = Rat::new(1, 32);
    let params = PointParams::new(eps.clone());

    let w = omega_approx(&f, &Rat::new(3, 10), 64, 128, &eps)?;
    println!("omega(3/10) as intervals: {}", w.to_interval_union());

    for x in [Rat::new(1, 4), Rat::one(), Rat::new(4, 7)] {
        for kind in [LimitKind::Alpha, LimitKind::Salpha] {
            let s = point_limit_set(&f, kind, &x, &params)?;
            println!("{}({x}) = {:?}", kind.name(), s.cells());
        }
    }

    for kind in [LimitKind::Omega, LimitKind::Salpha, LimitKind::Alpha] {
        let s = aggregate(&f, kind, &eps, &params)?;
        println!("{} over the grid: {}", kind.name(), s.to_interval_union());
    }
    Ok(())
}
