//! Parsing a map file and running the basic queries on it.
//!
//!     cargo run --example custom_map

use backlimit::limit_sets::{nonwandering_approx, periodic_points};
use backlimit::{parse_map, Rat};

const MAP: &str = "\
# a three-lap map of [0,1]
interval 0 1
breakpoint 0 0
breakpoint 1/3 1
breakpoint 2/3 0
breakpoint 1 1
";

fn main() -> backlimit::Result<()> {
    let f = parse_map(MAP)?;
    println!("{} laps, digest {}", f.lap_count(), &f.digest()[..16]);
    println!("fixed points {:?}", f.fixed_points().points);
    println!("f^-1(1/2) = {:?}", f.preimage_point(&Rat::new(1, 2)));

    let census = periodic_points(&f, 3, 1000)?;
    println!("solutions of f^p(x)=x: {:?}", census.isolated_solutions);
    println!("NW approximation: {}", nonwandering_approx(&f, &Rat::new(1, 16), 8)?);

    match parse_map("interval 0 1\nbreakpoint 0 0\nbreakpoint 1 1/2\n") {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
