//! Intervals with open/closed endpoints and normalized finite unions of them.

use std::fmt;

use serde::Serialize;

use crate::rat::Rat;

#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Interval {
    pub lo: Rat,
    pub hi: Rat,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Interval {
    /// Closed interval `[lo, hi]`. Panics if `lo > hi`.
    pub fn closed(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi, "interval bounds out of order: {lo} > {hi}");
        Interval {
            lo,
            hi,
            lo_open: false,
            hi_open: false,
        }
    }

    /// Open interval `(lo, hi)`. Panics unless `lo < hi`.
    pub fn open(lo: Rat, hi: Rat) -> Self {
        assert!(lo < hi, "open interval must be nonempty: ({lo}, {hi})");
        Interval {
            lo,
            hi,
            lo_open: true,
            hi_open: true,
        }
    }

    pub fn point(x: Rat) -> Self {
        Interval::closed(x.clone(), x)
    }

    /// General constructor; `None` when the combination describes an empty set.
    pub fn try_new(lo: Rat, hi: Rat, lo_open: bool, hi_open: bool) -> Option<Self> {
        match lo.cmp(&hi) {
            std::cmp::Ordering::Greater => None,
            std::cmp::Ordering::Equal if lo_open || hi_open => None,
            _ => Some(Interval {
                lo,
                hi,
                lo_open,
                hi_open,
            }),
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn length(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rat) -> bool {
        let above = if self.lo_open { x > &self.lo } else { x >= &self.lo };
        let below = if self.hi_open { x < &self.hi } else { x <= &self.hi };
        above && below
    }

    /// Whether `other` lies inside `self`.
    pub fn contains_interval(&self, other: &Interval) -> bool {
        let lo_ok = match self.lo.cmp(&other.lo) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Equal => !self.lo_open || other.lo_open,
            std::cmp::Ordering::Greater => false,
        };
        let hi_ok = match self.hi.cmp(&other.hi) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Equal => !self.hi_open || other.hi_open,
            std::cmp::Ordering::Less => false,
        };
        lo_ok && hi_ok
    }

    pub fn intersection(&self, other: &Interval) -> Option<Interval> {
        let (lo, lo_open) = match self.lo.cmp(&other.lo) {
            std::cmp::Ordering::Less => (other.lo.clone(), other.lo_open),
            std::cmp::Ordering::Greater => (self.lo.clone(), self.lo_open),
            std::cmp::Ordering::Equal => (self.lo.clone(), self.lo_open || other.lo_open),
        };
        let (hi, hi_open) = match self.hi.cmp(&other.hi) {
            std::cmp::Ordering::Greater => (other.hi.clone(), other.hi_open),
            std::cmp::Ordering::Less => (self.hi.clone(), self.hi_open),
            std::cmp::Ordering::Equal => (self.hi.clone(), self.hi_open || other.hi_open),
        };
        Interval::try_new(lo, hi, lo_open, hi_open)
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.intersection(other).is_some()
    }

    pub fn closure(&self) -> Interval {
        Interval::closed(self.lo.clone(), self.hi.clone())
    }

    /// Union of two intervals when it is itself an interval (overlapping or
    /// touching with at least one side closed at the contact point).
    fn merge(&self, other: &Interval) -> Option<Interval> {
        let (a, b) = if (&self.lo, !self.lo_open) <= (&other.lo, !other.lo_open) {
            (self, other)
        } else {
            (other, self)
        };
        let joined = match a.hi.cmp(&b.lo) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Equal => !(a.hi_open && b.lo_open),
            std::cmp::Ordering::Less => false,
        };
        if !joined {
            return None;
        }
        let (lo, lo_open) = if a.lo < b.lo {
            (a.lo.clone(), a.lo_open)
        } else {
            (a.lo.clone(), a.lo_open && b.lo_open)
        };
        let (hi, hi_open) = match a.hi.cmp(&b.hi) {
            std::cmp::Ordering::Greater => (a.hi.clone(), a.hi_open),
            std::cmp::Ordering::Less => (b.hi.clone(), b.hi_open),
            std::cmp::Ordering::Equal => (a.hi.clone(), a.hi_open && b.hi_open),
        };
        Some(Interval {
            lo,
            hi,
            lo_open,
            hi_open,
        })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{},{}{}",
            if self.lo_open { '(' } else { '[' },
            self.lo,
            self.hi,
            if self.hi_open { ')' } else { ']' }
        )
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sorted union of pairwise disjoint, non-adjacent intervals.
#[derive(Clone, PartialEq, Eq, Default, Serialize)]
pub struct IntervalUnion {
    parts: Vec<Interval>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion { parts: Vec::new() }
    }

    pub fn from_parts(parts: impl IntoIterator<Item = Interval>) -> Self {
        let mut parts: Vec<Interval> = parts.into_iter().collect();
        parts.sort_by(|a, b| (&a.lo, !a.lo_open).cmp(&(&b.lo, !b.lo_open)));
        let mut merged: Vec<Interval> = Vec::with_capacity(parts.len());
        for p in parts {
            if let Some(last) = merged.last_mut() {
                if let Some(m) = last.merge(&p) {
                    *last = m;
                    continue;
                }
            }
            merged.push(p);
        }
        IntervalUnion { parts: merged }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, x: &Rat) -> bool {
        // parts are sorted and disjoint: the only candidate is the last part
        // starting at or before x
        let idx = self.parts.partition_point(|p| &p.lo <= x);
        idx > 0 && self.parts[idx - 1].contains(x)
    }

    pub fn contains_interval(&self, j: &Interval) -> bool {
        self.parts.iter().any(|p| p.contains_interval(j))
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        IntervalUnion::from_parts(self.parts.iter().chain(other.parts.iter()).cloned())
    }

    /// `within \ self`, as a union of intervals.
    pub fn complement_within(&self, within: &Interval) -> IntervalUnion {
        let mut out = Vec::new();
        let mut cur_lo = within.lo.clone();
        let mut cur_lo_open = within.lo_open;
        for p in &self.parts {
            if let Some(piece) = Interval::try_new(cur_lo.clone(), p.lo.clone(), cur_lo_open, !p.lo_open) {
                if let Some(clipped) = piece.intersection(within) {
                    out.push(clipped);
                }
            }
            if p.hi > cur_lo || (p.hi == cur_lo && !p.hi_open) {
                cur_lo = p.hi.clone();
                cur_lo_open = !p.hi_open;
            }
        }
        if let Some(piece) = Interval::try_new(cur_lo, within.hi.clone(), cur_lo_open, within.hi_open) {
            if let Some(clipped) = piece.intersection(within) {
                out.push(clipped);
            }
        }
        IntervalUnion::from_parts(out)
    }

    /// Whether every point of `within` lies in `self`.
    pub fn covers(&self, within: &Interval) -> bool {
        self.complement_within(within).is_empty()
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "∅");
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::r;

    #[test]
    fn membership_respects_openness() {
        let j = Interval::try_new(r(0, 1), r(1, 1), true, false).unwrap();
        assert!(!j.contains(&r(0, 1)));
        assert!(j.contains(&r(1, 1)));
        assert!(j.contains(&r(1, 2)));
        assert!(Interval::try_new(r(1, 2), r(1, 2), true, false).is_none());
    }

    #[test]
    fn union_merges_overlaps_and_touching_closed() {
        let u = IntervalUnion::from_parts([
            Interval::open(r(1, 2), r(3, 4)),
            Interval::closed(r(0, 1), r(1, 4)),
            Interval::closed(r(1, 4), r(1, 3)),
        ]);
        assert_eq!(u.parts().len(), 2);
        assert_eq!(u.parts()[0], Interval::closed(r(0, 1), r(1, 3)));
        // open-open contact does not merge: the shared point is missing
        let v = IntervalUnion::from_parts([Interval::open(r(0, 1), r(1, 2)), Interval::open(r(1, 2), r(1, 1))]);
        assert_eq!(v.parts().len(), 2);
        assert!(!v.contains(&r(1, 2)));
    }

    #[test]
    fn complement_of_open_neighborhood() {
        let dom = Interval::closed(r(0, 1), r(1, 1));
        let u = IntervalUnion::from_parts([
            Interval::open(r(-1, 100), r(1, 100)),
            Interval::open(r(49, 100), r(203, 300)),
            Interval::open(r(99, 100), r(101, 100)),
        ]);
        let c = u.complement_within(&dom);
        assert_eq!(
            c.parts(),
            &[
                Interval::closed(r(1, 100), r(49, 100)),
                Interval::closed(r(203, 300), r(99, 100)),
            ]
        );
        assert!(!u.covers(&dom));
        assert!(u.union(&c).covers(&dom));
    }

    #[test]
    fn whole_domain_cover() {
        let dom = Interval::closed(r(0, 1), r(1, 1));
        let u = IntervalUnion::from_parts([Interval::open(r(-1, 1), r(2, 1))]);
        assert!(u.covers(&dom));
        assert!(u.complement_within(&dom).is_empty());
    }
}
