//! Schedule-independent random choices for branch sampling.
//!
//! Every choice is drawn from a ChaCha stream keyed by `(seed, step, value)`,
//! so the outcome of a backward step depends only on where the branch is and
//! how deep it is, never on which worker computed it or in what order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::rat::Rat;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Uniform-over-children branch sampler.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BranchSampler {
    pub seed: u64,
}

impl BranchSampler {
    pub fn new(seed: u64) -> Self {
        BranchSampler { seed }
    }

    /// Independent sampler for the `index`-th member of a batch.
    pub fn derive(&self, index: u64) -> BranchSampler {
        BranchSampler {
            seed: mix64(self.seed ^ mix64(index.wrapping_add(0x5851_f42d_4c95_7f2d))),
        }
    }

    /// Picks one of `n` children at backward step `step` from `value`.
    pub fn choose(&self, step: usize, value: &Rat, n: usize) -> usize {
        assert!(n > 0, "no children to choose from");
        if n == 1 {
            return 0;
        }
        let key = mix64(self.seed ^ mix64(step as u64) ^ value.digest64().rotate_left(17));
        ChaCha8Rng::seed_from_u64(key).gen_range(0..n)
    }
}
