//! Strategies shared by the property tests.

#![allow(dead_code)]

use proptest::prelude::*;

use backlimit::{PLMap, Rat};

/// Continuous onto maps of [0,1] with 2 to `max_laps` laps: breakpoints at
/// sixteenths, values at eighths, 0 and 1 both attained.
pub fn arb_map(max_laps: usize) -> impl Strategy<Value = PLMap> {
    (2usize..=max_laps)
        .prop_flat_map(|laps| {
            (
                proptest::sample::subsequence((1..16).collect::<Vec<i64>>(), laps - 1),
                proptest::collection::vec(0i64..=8, laps + 1),
                0..=laps,
                0..=laps,
            )
        })
        .prop_filter_map("needs a valid onto map", |(inner, mut ys, a, b)| {
            if a == b {
                return None;
            }
            ys[a] = 0;
            ys[b] = 8;
            let mut xs = vec![0];
            xs.extend(inner);
            xs.push(16);
            let bps = xs
                .iter()
                .zip(&ys)
                .map(|(&x, &y)| (Rat::new(x, 16), Rat::new(y, 8)))
                .collect();
            PLMap::from_breakpoints(bps).ok()
        })
}

/// Rationals in [0,1] with denominator at most 200.
pub fn arb_unit() -> impl Strategy<Value = Rat> {
    (1i64..=200).prop_flat_map(|d| (0..=d).prop_map(move |n| Rat::new(n, d)))
}
