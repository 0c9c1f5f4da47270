//! Level sets, branch counts and sampled branches of the tent map.
//!
//!     cargo run --example preimage_tree

use backlimit::backward::{branches, count_branches, preimage_sets, sample_branches};
use backlimit::fixtures::fixture_map;
use backlimit::{BranchSampler, Rat};

fn main() -> backlimit::Result<()> {
    let t = fixture_map("tent")?;
    let x = Rat::new(1, 3);

    for (n, level) in preimage_sets(&t, &x, 4, 10_000)?.iter().enumerate() {
        println!("n={n} |level|={:2} {level:?}", level.len());
    }
    println!("branches of depth 12: {}", count_branches(&t, &x, 12, 1 << 20)?);

    for b in branches(&t, &x, 2, 100)? {
        println!("branch {:?} laps {:?}", b.points, b.path);
    }

    // same seed, same branches, whatever the worker count
    let sampled = sample_branches(&t, &x, 40, 3, &BranchSampler::new(7))?;
    for b in &sampled {
        let back = t.eval_iter(b.deepest(), b.depth())?;
        println!("depth {} deepest {} -> {back}", b.depth(), b.deepest());
    }
    Ok(())
}
