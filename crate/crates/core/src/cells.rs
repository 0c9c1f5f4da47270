//! Grid cells at resolution `eps` and finite cell sets.

use std::collections::BTreeSet;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalUnion};
use crate::rat::Rat;

/// Cell `k` is `[k·eps, (k+1)·eps)` intersected with the domain. The domain's
/// right endpoint belongs to the last cell, so every domain point has exactly
/// one cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellGrid {
    eps: Rat,
    lo: Rat,
    hi: Rat,
    k_min: i64,
    k_max: i64,
}

fn floor_cell(v: Rat) -> i64 {
    v.floor_i64().expect("cell index fits in i64")
}

impl CellGrid {
    pub fn new(domain: &Interval, eps: &Rat) -> Result<Self> {
        if !eps.is_positive() {
            return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
        }
        let k_min = floor_cell(&domain.lo / eps);
        let k_max = -floor_cell(-(&domain.hi / eps)) - 1;
        Ok(CellGrid {
            eps: eps.clone(),
            lo: domain.lo.clone(),
            hi: domain.hi.clone(),
            k_min,
            k_max: k_max.max(k_min),
        })
    }

    pub fn eps(&self) -> &Rat {
        &self.eps
    }

    pub fn cell_range(&self) -> std::ops::RangeInclusive<i64> {
        self.k_min..=self.k_max
    }

    pub fn cell_count(&self) -> usize {
        (self.k_max - self.k_min + 1) as usize
    }

    pub fn cell_of(&self, x: &Rat) -> i64 {
        floor_cell(x / &self.eps).clamp(self.k_min, self.k_max)
    }

    /// Closed hull of cell `k` within the domain.
    pub fn cell_bounds(&self, k: i64) -> Interval {
        let a = Rat::max_of(Rat::from_int(k) * &self.eps, self.lo.clone());
        let b = Rat::min_of(Rat::from_int(k + 1) * &self.eps, self.hi.clone());
        Interval::closed(a, b)
    }

    pub fn cell_midpoint(&self, k: i64) -> Rat {
        let b = self.cell_bounds(k);
        b.lo.midpoint(&b.hi)
    }

    /// Cells whose closed hull meets `j`.
    pub fn cells_meeting(&self, j: &Interval) -> impl Iterator<Item = i64> + '_ {
        let a = floor_cell(&j.lo / &self.eps) - 1;
        let b = floor_cell(&j.hi / &self.eps) + 1;
        let j = j.clone();
        (a.max(self.k_min)..=b.min(self.k_max)).filter(move |&k| self.cell_bounds(k).intersects(&j))
    }

    fn same_grid(&self, other: &CellGrid) -> bool {
        self == other
    }
}

/// Finite-resolution stand-in for a subset of the domain: the set of grid
/// cells it meets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsSet {
    grid: CellGrid,
    cells: BTreeSet<i64>,
}

impl EpsSet {
    pub fn empty(grid: CellGrid) -> Self {
        EpsSet {
            grid,
            cells: BTreeSet::new(),
        }
    }

    pub fn full(grid: CellGrid) -> Self {
        let cells = grid.cell_range().collect();
        EpsSet { grid, cells }
    }

    pub fn from_points<'a>(grid: CellGrid, points: impl IntoIterator<Item = &'a Rat>) -> Self {
        let mut s = EpsSet::empty(grid);
        for p in points {
            s.insert_point(p);
        }
        s
    }

    pub fn grid(&self) -> &CellGrid {
        &self.grid
    }

    pub fn eps(&self) -> &Rat {
        &self.grid.eps
    }

    pub fn cells(&self) -> &BTreeSet<i64> {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.cells.len() == self.grid.cell_count()
    }

    pub fn insert(&mut self, k: i64) {
        assert!(self.grid.cell_range().contains(&k), "cell {k} outside grid");
        self.cells.insert(k);
    }

    pub fn insert_point(&mut self, x: &Rat) {
        let k = self.grid.cell_of(x);
        self.cells.insert(k);
    }

    /// Adds every cell meeting `j`.
    pub fn insert_interval(&mut self, j: &Interval) {
        let ks: Vec<i64> = self.grid.cells_meeting(j).collect();
        self.cells.extend(ks);
    }

    pub fn contains_cell(&self, k: i64) -> bool {
        self.cells.contains(&k)
    }

    pub fn contains_point(&self, x: &Rat) -> bool {
        self.cells.contains(&self.grid.cell_of(x))
    }

    pub fn union_with(&mut self, other: &EpsSet) {
        assert!(self.grid.same_grid(&other.grid), "cell sets on different grids");
        self.cells.extend(other.cells.iter().copied());
    }

    pub fn intersects(&self, other: &EpsSet) -> bool {
        self.cells.iter().any(|k| other.cells.contains(k))
    }

    fn near(&self, k: i64, slack: i64) -> bool {
        self.cells.range(k - slack..=k + slack).next().is_some()
    }

    /// Cells of `self` farther than `slack` cells from every cell of `other`.
    pub fn excess_over(&self, other: &EpsSet, slack: i64) -> Vec<i64> {
        assert!(self.grid.same_grid(&other.grid), "cell sets on different grids");
        self.cells.iter().copied().filter(|&k| !other.near(k, slack)).collect()
    }

    pub fn subset_within(&self, other: &EpsSet, slack: i64) -> bool {
        self.excess_over(other, slack).is_empty()
    }

    /// Symmetric containment up to `slack` cells.
    pub fn hausdorff_within(&self, other: &EpsSet, slack: i64) -> bool {
        self.subset_within(other, slack) && other.subset_within(self, slack)
    }

    /// Cells of `self` not in `other`, exactly.
    pub fn difference(&self, other: &EpsSet) -> Vec<i64> {
        self.cells.difference(&other.cells).copied().collect()
    }

    /// Union of the closed cell hulls.
    pub fn to_interval_union(&self) -> IntervalUnion {
        IntervalUnion::from_parts(self.cells.iter().map(|&k| self.grid.cell_bounds(k)))
    }

    /// Union of open intervals `(a - margin, b + margin)` over the cell hulls.
    pub fn inflate(&self, margin: &Rat) -> IntervalUnion {
        IntervalUnion::from_parts(self.cells.iter().map(|&k| {
            let b = self.grid.cell_bounds(k);
            Interval::open(&b.lo - margin, &b.hi + margin)
        }))
    }
}

impl Serialize for EpsSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let bounds: Vec<[Rat; 2]> = self
            .cells
            .iter()
            .map(|&k| {
                let b = self.grid.cell_bounds(k);
                [b.lo, b.hi]
            })
            .collect();
        let mut st = serializer.serialize_struct("EpsSet", 3)?;
        st.serialize_field("eps", &self.grid.eps)?;
        st.serialize_field("cells", &self.cells)?;
        st.serialize_field("bounds", &bounds)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::r;

    fn unit() -> Interval {
        Interval::closed(r(0, 1), r(1, 1))
    }

    #[test]
    fn right_endpoint_joins_last_cell() {
        let g = CellGrid::new(&unit(), &r(1, 64)).unwrap();
        assert_eq!(g.cell_count(), 64);
        assert_eq!(g.cell_of(&r(1, 1)), 63);
        assert_eq!(g.cell_of(&r(0, 1)), 0);
        assert_eq!(g.cell_of(&r(1, 4)), 16);
        assert_eq!(g.cell_of(&r(4, 7)), 36);
        assert_eq!(g.cell_bounds(63), Interval::closed(r(63, 64), r(1, 1)));
    }

    #[test]
    fn non_dividing_eps() {
        let g = CellGrid::new(&unit(), &r(1, 3)).unwrap();
        assert_eq!(g.cell_count(), 3);
        let g = CellGrid::new(&unit(), &r(2, 5)).unwrap();
        assert_eq!(g.cell_range(), 0..=2);
        assert_eq!(g.cell_bounds(2), Interval::closed(r(4, 5), r(1, 1)));
        assert!(CellGrid::new(&unit(), &r(0, 1)).is_err());
    }

    #[test]
    fn slack_comparisons() {
        let g = CellGrid::new(&unit(), &r(1, 8)).unwrap();
        let mut a = EpsSet::empty(g.clone());
        let mut b = EpsSet::empty(g);
        a.insert(2);
        a.insert(5);
        b.insert(3);
        b.insert(5);
        assert!(a.subset_within(&b, 1));
        assert!(!a.subset_within(&b, 0));
        assert_eq!(a.excess_over(&b, 0), vec![2]);
        assert!(a.hausdorff_within(&b, 1));
        assert_eq!(a.difference(&b), vec![2]);
    }

    #[test]
    fn cells_meeting_interval() {
        let g = CellGrid::new(&unit(), &r(1, 4)).unwrap();
        let ks: Vec<i64> = g.cells_meeting(&Interval::closed(r(1, 4), r(1, 2))).collect();
        // closed hulls [0,1/4], [1/4,1/2], [1/2,3/4] all touch
        assert_eq!(ks, vec![0, 1, 2]);
        let ks: Vec<i64> = g.cells_meeting(&Interval::open(r(1, 4), r(1, 2))).collect();
        assert_eq!(ks, vec![1]);
    }
}
