//! Preimage trees, backward orbit branches and level sets `f^{-n}(x)`.
//!
//! A backward orbit branch of `x` is a sequence `x_0 = x, x_1, …, x_d` with
//! `f(x_{i+1}) = x_i`; it is a root-to-leaf path in the preimage tree. Since
//! `f` is a function, distinct parents never share a preimage, so every level
//! of the tree is exactly the set `f^{-n}(x)`.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::plmap::PLMap;
use crate::rat::Rat;
use crate::sampler::BranchSampler;

/// Finite prefix `(x_0, …, x_d)` of a backward orbit branch, together with the
/// lap chosen at each backward step.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Branch {
    pub points: Vec<Rat>,
    pub path: Vec<usize>,
}

impl Branch {
    pub fn root(&self) -> &Rat {
        &self.points[0]
    }

    pub fn depth(&self) -> usize {
        self.points.len() - 1
    }

    pub fn deepest(&self) -> &Rat {
        self.points.last().unwrap()
    }

    /// Checks `f(x_{i+1}) = x_i` for every step, exactly.
    pub fn is_consistent(&self, f: &PLMap) -> bool {
        self.points.len() == self.path.len() + 1
            && self
                .points
                .windows(2)
                .all(|w| f.eval(&w[1]).map(|y| y == w[0]).unwrap_or(false))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeNode {
    pub value: Rat,
    /// Index into the previous level; `None` for the root.
    pub parent: Option<usize>,
    /// Lap of `f` through which this node maps onto its parent.
    pub lap: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreimageTree {
    pub root: Rat,
    /// `levels[n]` holds `f^{-n}(root)`, sorted ascending by value.
    pub levels: Vec<Vec<TreeNode>>,
}

impl PreimageTree {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level_values(&self, n: usize) -> Vec<Rat> {
        self.levels[n].iter().map(|node| node.value.clone()).collect()
    }

    pub fn node_counts(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    pub fn total_nodes(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    /// Walks parent links from `(level, index)` back to the root; the result
    /// is the branch ending at that node.
    pub fn branch_to(&self, level: usize, index: usize) -> Branch {
        let mut points = Vec::with_capacity(level + 1);
        let mut path = Vec::with_capacity(level);
        let mut cur = (level, index);
        loop {
            let node = &self.levels[cur.0][cur.1];
            points.push(node.value.clone());
            match (node.parent, node.lap) {
                (Some(p), Some(lap)) => {
                    path.push(lap);
                    cur = (cur.0 - 1, p);
                }
                _ => break,
            }
        }
        points.reverse();
        path.reverse();
        Branch { points, path }
    }
}

/// Full preimage tree of `x` to `depth`, aborting once more than `node_cap`
/// nodes would be stored.
pub fn preimage_tree(f: &PLMap, x: &Rat, depth: usize, node_cap: usize) -> Result<PreimageTree> {
    f.eval(x)?;
    let mut levels = vec![vec![TreeNode {
        value: x.clone(),
        parent: None,
        lap: None,
    }]];
    let mut total = 1usize;
    for n in 1..=depth {
        let prev = &levels[n - 1];
        let mut next: Vec<TreeNode> = prev
            .par_iter()
            .enumerate()
            .flat_map_iter(|(pi, node)| {
                f.preimages_with_laps(&node.value)
                    .into_iter()
                    .map(move |(value, lap)| TreeNode {
                        value,
                        parent: Some(pi),
                        lap: Some(lap),
                    })
            })
            .collect();
        next.par_sort_by(|a, b| a.value.cmp(&b.value));
        debug_assert!(next.windows(2).all(|w| w[0].value != w[1].value));
        total += next.len();
        if total > node_cap {
            return Err(Error::NodeCapExceeded {
                cap: node_cap,
                completed_depth: n - 1,
            });
        }
        levels.push(next);
    }
    Ok(PreimageTree {
        root: x.clone(),
        levels,
    })
}

/// The level sets `f^{-n}(x)` for `n = 0..=depth`, each sorted ascending.
pub fn preimage_sets(f: &PLMap, x: &Rat, depth: usize, node_cap: usize) -> Result<Vec<Vec<Rat>>> {
    f.eval(x)?;
    let mut levels: Vec<Vec<Rat>> = vec![vec![x.clone()]];
    let mut total = 1usize;
    for n in 1..=depth {
        let mut next: Vec<Rat> = levels[n - 1]
            .par_iter()
            .flat_map_iter(|y| f.preimage_point(y))
            .collect();
        next.par_sort();
        next.dedup();
        total += next.len();
        if total > node_cap {
            return Err(Error::NodeCapExceeded {
                cap: node_cap,
                completed_depth: n - 1,
            });
        }
        levels.push(next);
    }
    Ok(levels)
}

/// Number of branches of depth `depth`, i.e. `|f^{-depth}(x)|`, or
/// `BranchCapExceeded` as soon as some level outgrows `branch_cap`.
pub fn count_branches(f: &PLMap, x: &Rat, depth: usize, branch_cap: usize) -> Result<usize> {
    f.eval(x)?;
    let mut level = vec![x.clone()];
    for _ in 0..depth {
        level = level.par_iter().flat_map_iter(|y| f.preimage_point(y)).collect();
        if level.len() > branch_cap {
            return Err(Error::BranchCapExceeded { cap: branch_cap });
        }
    }
    Ok(level.len())
}

/// Callbacks for a depth-first walk over all branches of a preimage tree.
///
/// `enter`/`leave` bracket each node at its position in the branch, so a
/// visitor can keep incremental per-branch state instead of rescanning every
/// leaf path.
pub trait BranchVisitor {
    fn enter(&mut self, _index: usize, _value: &Rat) {}
    fn leave(&mut self, _index: usize, _value: &Rat) {}
    /// Called once per complete branch; returning `false` stops the walk.
    fn leaf(&mut self, _points: &[Rat], _path: &[usize]) -> bool {
        true
    }
}

struct WalkCtx<'a> {
    f: &'a PLMap,
    leaves: &'a AtomicUsize,
    cap: usize,
    stop: &'a AtomicBool,
}

fn dfs<V: BranchVisitor>(
    ctx: &WalkCtx<'_>,
    points: &mut Vec<Rat>,
    path: &mut Vec<usize>,
    remaining: usize,
    v: &mut V,
) -> Result<bool> {
    if ctx.stop.load(Ordering::Relaxed) {
        return Ok(false);
    }
    if remaining == 0 {
        if ctx.leaves.fetch_add(1, Ordering::Relaxed) + 1 > ctx.cap {
            ctx.stop.store(true, Ordering::Relaxed);
            return Err(Error::BranchCapExceeded { cap: ctx.cap });
        }
        if !v.leaf(points, path) {
            ctx.stop.store(true, Ordering::Relaxed);
            return Ok(false);
        }
        return Ok(true);
    }
    let y = points.last().unwrap().clone();
    for (x, lap) in ctx.f.preimages_with_laps(&y) {
        v.enter(points.len(), &x);
        points.push(x);
        path.push(lap);
        let cont = dfs(ctx, points, path, remaining - 1, v);
        path.pop();
        let x = points.pop().unwrap();
        v.leave(points.len(), &x);
        if !cont? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of a branch walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WalkStats {
    pub leaves: usize,
    /// `false` when a visitor asked to stop before the tree was exhausted.
    pub completed: bool,
}

/// Sequential depth-first walk over every branch of depth `depth`, in
/// lexicographic lap order. Errors once more than `branch_cap` leaves are
/// reached.
pub fn walk_branches<V: BranchVisitor>(
    f: &PLMap,
    x: &Rat,
    depth: usize,
    branch_cap: usize,
    v: &mut V,
) -> Result<WalkStats> {
    f.eval(x)?;
    let leaves = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);
    let ctx = WalkCtx {
        f,
        leaves: &leaves,
        cap: branch_cap,
        stop: &stop,
    };
    let mut points = vec![x.clone()];
    let mut path = Vec::new();
    v.enter(0, x);
    let completed = dfs(&ctx, &mut points, &mut path, depth, v)?;
    v.leave(0, x);
    Ok(WalkStats {
        leaves: leaves.load(Ordering::Relaxed),
        completed,
    })
}

/// Points and lap choices of a branch prefix.
type Prefix = (Vec<Rat>, Vec<usize>);

/// Branch prefixes down to the first level with at least 64 nodes (or to
/// `depth`), in lexicographic order.
fn frontier(f: &PLMap, x: &Rat, depth: usize) -> (usize, Vec<Prefix>) {
    let mut front = vec![(vec![x.clone()], Vec::new())];
    let mut split = 0;
    while split < depth && front.len() < 64 {
        split += 1;
        front = front
            .into_iter()
            .flat_map(|(pts, path)| {
                f.preimages_with_laps(pts.last().unwrap())
                    .into_iter()
                    .map(move |(v, lap)| {
                        let mut p = pts.clone();
                        p.push(v);
                        let mut q = path.clone();
                        q.push(lap);
                        (p, q)
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    (split, front)
}

/// Parallel version of [`walk_branches`]: the tree is cut a few levels below
/// the root and each subtree gets its own visitor from `make`. The returned
/// visitors are in lexicographic subtree order, independent of scheduling.
pub fn par_walk_branches<V, M>(
    f: &PLMap,
    x: &Rat,
    depth: usize,
    branch_cap: usize,
    make: M,
) -> Result<(Vec<V>, WalkStats)>
where
    V: BranchVisitor + Send,
    M: Fn() -> V + Sync,
{
    f.eval(x)?;
    let (split, front) = frontier(f, x, depth);
    let leaves = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);
    let ctx = WalkCtx {
        f,
        leaves: &leaves,
        cap: branch_cap,
        stop: &stop,
    };
    let results: Vec<Result<(V, bool)>> = front
        .into_par_iter()
        .map(|(mut points, mut path)| {
            let mut v = make();
            for (i, p) in points.iter().enumerate() {
                v.enter(i, p);
            }
            let cont = dfs(&ctx, &mut points, &mut path, depth - split, &mut v)?;
            Ok((v, cont))
        })
        .collect();
    let mut visitors = Vec::with_capacity(results.len());
    let mut completed = true;
    let mut first_err = None;
    for r in results {
        match r {
            Ok((v, cont)) => {
                completed &= cont;
                visitors.push(v);
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    if let Some(e) = first_err {
        return Err(e);
    }
    let stats = WalkStats {
        leaves: leaves.load(Ordering::Relaxed),
        completed: completed && !stop.load(Ordering::Relaxed),
    };
    Ok((visitors, stats))
}

struct Collect(Vec<Branch>);

impl BranchVisitor for Collect {
    fn leaf(&mut self, points: &[Rat], path: &[usize]) -> bool {
        self.0.push(Branch {
            points: points.to_vec(),
            path: path.to_vec(),
        });
        true
    }
}

/// Every branch of depth `depth`, in lexicographic path order.
pub fn branches(f: &PLMap, x: &Rat, depth: usize, branch_cap: usize) -> Result<Vec<Branch>> {
    let (parts, _) = par_walk_branches(f, x, depth, branch_cap, || Collect(Vec::new()))?;
    Ok(parts.into_iter().flat_map(|c| c.0).collect())
}

/// One branch, choosing uniformly among the exact preimages at each step.
pub fn sample_branch(f: &PLMap, x: &Rat, depth: usize, sampler: &BranchSampler) -> Result<Branch> {
    f.eval(x)?;
    let mut points = Vec::with_capacity(depth + 1);
    let mut path = Vec::with_capacity(depth);
    points.push(x.clone());
    for step in 0..depth {
        let cur = points.last().unwrap();
        let mut pre = f.preimages_with_laps(cur);
        let k = sampler.choose(step, cur, pre.len());
        let (v, lap) = pre.swap_remove(k);
        points.push(v);
        path.push(lap);
    }
    Ok(Branch { points, path })
}

/// `n` sampled branches, the `i`-th drawn with `sampler.derive(i)`.
pub fn sample_branches(f: &PLMap, x: &Rat, depth: usize, n: usize, sampler: &BranchSampler) -> Result<Vec<Branch>> {
    (0..n as u64)
        .into_par_iter()
        .map(|i| sample_branch(f, x, depth, &sampler.derive(i)))
        .collect()
}
