//! Fix ⊂ Per ⊂ Rec ⊂ SA ⊂ cl(Rec) ⊂ ω(f) ⊂ NW ⊂ A, checked at cell resolution,
//! and the periodic-orbit property of sα.
//!
//!     cargo run --example inclusion_chain

use backlimit::chain::{chain_check, kms_check, ChainParams, KmsParams};
use backlimit::fixtures::fixture_map;
use backlimit::{PeriodicOrbit, Rat};

fn main() -> backlimit::Result<()> {
    let f = fixture_map("fig1")?;
    let rep = chain_check(&f, &ChainParams::new(Rat::new(1, 32)))?;
    for s in &rep.sets {
        println!("{:6} {:?} {:2} cells", s.name, s.direction, s.set.len());
    }
    for p in &rep.pairs {
        println!("{:>6} ⊂ {:<6} {}", p.left, p.right, p.status.name());
    }
    println!("A \\ NW cells: {:?}", rep.a_minus_nw);
    println!("chain: {}", rep.verdict.name());

    let t = fixture_map("tent")?;
    let orbit = PeriodicOrbit {
        period: 2,
        points: vec![Rat::new(2, 5), Rat::new(4, 5)],
    };
    let k = kms_check(&t, &orbit, &Rat::new(2, 5), &KmsParams::new(Rat::new(1, 32)))?;
    println!("tent {{2/5, 4/5}} from 2/5: {}", k.verdict.name());
    Ok(())
}
