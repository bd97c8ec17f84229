//! Lazy piecewise composition of a lifting with itself.
//!
//! A [`Branch`] is an interval `X` on which `F^depth` is affine. Expanding a
//! branch splits `X` at the preimages of the breakpoints of `F` that fall
//! inside `F^depth(X)`. Walking the resulting tree depth-first visits the
//! linearity pieces of `F^n` in increasing order of `x`, and subtrees can be
//! clipped or pruned before they are expanded.

use std::ops::ControlFlow;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::pl_map::PLLift;
use crate::rational::{Interval, Rational};

/// Default cap on the number of tree nodes expanded in one walk.
pub const DEFAULT_NODE_CAP: usize = 20_000_000;

#[derive(Clone, Debug)]
pub(crate) struct Branch {
    pub x: Interval,
    pub slope: Rational,
    pub offset: Rational,
    pub depth: usize,
}

impl Branch {
    pub fn root(x: Interval) -> Self {
        Branch {
            x,
            slope: Rational::one(),
            offset: Rational::zero(),
            depth: 0,
        }
    }

    pub fn apply(&self, x: &Rational) -> Rational {
        &self.slope * x + &self.offset
    }

    /// `F^depth(X)`.
    pub fn image(&self) -> Interval {
        Interval::hull(self.apply(&self.x.lo), self.apply(&self.x.hi))
    }

    fn preimage_of(&self, y: &Rational) -> Rational {
        (y - &self.offset) / &self.slope
    }

    /// Restricts `X` to the points with `F^depth(x)` in `target`.
    pub fn clip(mut self, target: &Interval) -> Option<Branch> {
        if self.slope.is_zero() {
            return target.contains(&self.offset).then_some(self);
        }
        let pre = Interval::hull(self.preimage_of(&target.lo), self.preimage_of(&target.hi));
        self.x = self.x.intersect(&pre)?;
        Some(self)
    }

    /// Splits this branch one level deeper, children ordered by `x`.
    pub fn expand(&self, f: &PLLift, breakpoint_limit: usize) -> Result<Vec<Branch>> {
        let y = self.image();
        let mut cuts = vec![y.lo.clone()];
        f.try_for_each_breakpoint(&y.lo, &y.hi, breakpoint_limit, |c, _| cuts.push(c))?;
        cuts.push(y.hi.clone());
        if y.is_degenerate() {
            cuts.truncate(1);
        }
        let mut children = Vec::with_capacity(cuts.len());
        if cuts.len() == 1 {
            let (s, c) = f.affine_at(&y.lo);
            children.push(Branch {
                x: self.x.clone(),
                slope: &s * &self.slope,
                offset: &s * &self.offset + c,
                depth: self.depth + 1,
            });
            return Ok(children);
        }
        for w in cuts.windows(2) {
            let (s, c) = f.affine_at(&w[0]);
            let x = Interval::hull(self.preimage_of(&w[0]), self.preimage_of(&w[1]));
            children.push(Branch {
                x,
                slope: &s * &self.slope,
                offset: &s * &self.offset + c,
                depth: self.depth + 1,
            });
        }
        if self.slope.is_negative() {
            children.reverse();
        }
        Ok(children)
    }
}

/// Depth-first walk over the pieces of `F^depth` on `start`.
///
/// `constraint(i)` clips every branch so that `F^i(x)` stays in the returned
/// interval; `prune` discards an internal branch before expansion. Every
/// surviving branch at full depth is handed to `leaf`.
pub(crate) fn walk<C, P, L>(
    f: &PLLift,
    start: Interval,
    depth: usize,
    node_cap: usize,
    constraint: C,
    mut prune: P,
    mut leaf: L,
) -> Result<()>
where
    C: Fn(usize) -> Option<Interval>,
    P: FnMut(&Branch) -> bool,
    L: FnMut(Branch) -> ControlFlow<()>,
{
    let clip = |b: Branch| match constraint(b.depth) {
        Some(c) => b.clip(&c),
        None => Some(b),
    };
    let mut stack: Vec<Branch> = clip(Branch::root(start)).into_iter().collect();
    let mut expanded = 0usize;
    while let Some(branch) = stack.pop() {
        if branch.depth == depth {
            if leaf(branch).is_break() {
                return Ok(());
            }
            continue;
        }
        if prune(&branch) {
            continue;
        }
        expanded += 1;
        if expanded > node_cap {
            return Err(Error::BlowUp { cap: node_cap });
        }
        let children = branch.expand(f, node_cap)?;
        stack.extend(children.into_iter().rev().filter_map(clip));
    }
    Ok(())
}
