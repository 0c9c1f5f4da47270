//! The wandering point 1/4 of `fig1`: in the α-limit set of 1, yet not
//! non-wandering.
//!
//!     cargo run --example figure_one

use backlimit::backward::preimage_tree;
use backlimit::cells::CellGrid;
use backlimit::fixtures::fixture_map;
use backlimit::limit_sets::{alpha_approx, nonwandering_cells};
use backlimit::Rat;

fn main() -> backlimit::Result<()> {
    let f = fixture_map("fig1")?;
    let quarter = Rat::new(1, 4);
    let eps = Rat::new(1, 64);
    let grid = CellGrid::new(f.domain(), &eps)?;

    let tree = preimage_tree(&f, &quarter, 6, 1000)?;
    for n in 0..=6 {
        println!("f^-{n}(1/4) = {:?}", tree.level_values(n));
    }

    let a = alpha_approx(&f, &quarter, 30, 10, 2, &eps, 1_000_000)?;
    println!("alpha(1/4) cells: {:?}", a.cells());

    let a1 = alpha_approx(&f, &Rat::one(), 30, 10, 2, &eps, 1_000_000)?;
    let nw = nonwandering_cells(&f, &eps, 20)?;
    let k = grid.cell_of(&quarter);
    println!("cell {k} (holds 1/4) in alpha(1): {}", a1.contains_cell(k));
    println!("cell {k} in NW approximation: {}", nw.contains_cell(k));
    Ok(())
}
