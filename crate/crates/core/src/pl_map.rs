//! Piecewise-linear liftings of circle maps.
//!
//! A lifting of degree `d` is stored by its anchors on one fundamental domain
//! `[t, t + 1]`; everywhere else it is determined by `F(x + 1) = F(x) + d`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{floor_int, int, Interval, Rational};

/// Default cap on the number of anchors produced by [`PLLift::power`] and [`PLLift::compose`].
pub const DEFAULT_BREAKPOINT_CAP: usize = 1_000_000;

#[derive(Clone, Debug)]
struct Piece {
    slope: Rational,
    intercept: Rational,
}

/// A continuous piecewise-linear lifting of a circle map.
#[derive(Clone, Debug)]
pub struct PLLift {
    degree: i64,
    anchors: Vec<(Rational, Rational)>,
    pieces: Vec<Piece>,
    min_value: Rational,
    max_value: Rational,
}

/// Validates anchors and builds the lifting they describe.
pub fn make_lift(anchors: Vec<(Rational, Rational)>, degree: i64) -> Result<PLLift> {
    PLLift::new(anchors, degree)
}

impl PLLift {
    pub fn new(anchors: Vec<(Rational, Rational)>, degree: i64) -> Result<Self> {
        if anchors.len() < 2 {
            return Err(Error::InvalidLift(
                "at least two anchors are needed to span a fundamental domain".into(),
            ));
        }
        for (i, w) in anchors.windows(2).enumerate() {
            if w[0].0 >= w[1].0 {
                return Err(Error::InvalidLift(format!(
                    "anchor x-coordinates must strictly increase (anchor {} at {} vs {})",
                    i + 1,
                    w[0].0,
                    w[1].0
                )));
            }
        }
        let (first, last) = (&anchors[0], &anchors[anchors.len() - 1]);
        if &last.0 - &first.0 != Rational::one() {
            return Err(Error::InvalidLift(format!(
                "anchors span [{}, {}], which does not have length 1",
                first.0, last.0
            )));
        }
        if &last.1 - &first.1 != int(degree) {
            return Err(Error::InvalidLift(format!(
                "endpoint values {} and {} do not differ by the degree {}",
                first.1, last.1, degree
            )));
        }
        let pieces = anchors
            .windows(2)
            .map(|w| {
                let slope = (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0);
                let intercept = &w[0].1 - &slope * &w[0].0;
                Piece { slope, intercept }
            })
            .collect();
        let min_value = anchors.iter().map(|a| &a.1).min().cloned().unwrap_or_default();
        let max_value = anchors.iter().map(|a| &a.1).max().cloned().unwrap_or_default();
        Ok(PLLift {
            degree,
            anchors,
            pieces,
            min_value,
            max_value,
        })
    }

    /// `x + shift`, the rigid rotation by `shift`.
    pub fn rotation(shift: Rational) -> Self {
        PLLift::new(vec![(int(0), shift.clone()), (int(1), shift + int(1))], 1)
            .expect("rigid rotation is a valid lifting")
    }

    pub fn identity() -> Self {
        PLLift::rotation(int(0))
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn anchors(&self) -> &[(Rational, Rational)] {
        &self.anchors
    }

    /// Left end `t` of the stored fundamental domain `[t, t + 1]`.
    pub fn domain_start(&self) -> &Rational {
        &self.anchors[0].0
    }

    pub fn domain(&self) -> Interval {
        Interval::new(self.anchors[0].0.clone(), self.anchors[self.anchors.len() - 1].0.clone())
    }

    fn degree_rat(&self) -> Rational {
        int(self.degree)
    }

    /// Integer translate `j` and index of the piece containing `x - j`.
    fn locate(&self, x: &Rational) -> (BigInt, usize) {
        let j = floor_int(&(x - self.domain_start()));
        let reduced = x - Rational::from_integer(j.clone());
        let idx = self
            .anchors
            .partition_point(|a| a.0 <= reduced)
            .saturating_sub(1)
            .min(self.pieces.len() - 1);
        (j, idx)
    }

    /// Slope and intercept of the linear piece of `F` on the right of `x`.
    pub fn affine_at(&self, x: &Rational) -> (Rational, Rational) {
        let (j, idx) = self.locate(x);
        let piece = &self.pieces[idx];
        let j = Rational::from_integer(j);
        let intercept = &piece.intercept + (self.degree_rat() - &piece.slope) * j;
        (piece.slope.clone(), intercept)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let (j, idx) = self.locate(x);
        let piece = &self.pieces[idx];
        let j = Rational::from_integer(j);
        let reduced = x - &j;
        &piece.slope * reduced + &piece.intercept + self.degree_rat() * j
    }

    pub fn iterate(&self, x: &Rational, n: usize) -> Rational {
        let mut y = x.clone();
        for _ in 0..n {
            y = self.eval(&y);
        }
        y
    }

    /// Calls `visit(x, F(x))` for every breakpoint strictly inside `(lo, hi)`, in increasing order.
    ///
    /// Fails without visiting anything if more than `limit` breakpoints could be involved.
    pub(crate) fn try_for_each_breakpoint(
        &self,
        lo: &Rational,
        hi: &Rational,
        limit: usize,
        mut visit: impl FnMut(Rational, Rational),
    ) -> Result<()> {
        if lo >= hi {
            return Ok(());
        }
        let t = self.domain_start();
        let j_lo = floor_int(&(lo - t));
        let j_hi = floor_int(&(hi - t));
        let per_domain = self.pieces.len();
        let span = &j_hi - &j_lo + BigInt::one();
        let bound = span * BigInt::from(per_domain);
        if bound > BigInt::from(limit) + BigInt::from(2 * per_domain) {
            return Err(Error::BlowUp { cap: limit });
        }
        let d = self.degree_rat();
        let mut j = j_lo;
        while j <= j_hi {
            let jr = Rational::from_integer(j.clone());
            let shift_y = &d * &jr;
            let (lo_red, hi_red) = (lo - &jr, hi - &jr);
            let anchors = &self.anchors[..per_domain];
            let start = anchors.partition_point(|a| a.0 <= lo_red);
            for (ax, ay) in &anchors[start..] {
                if ax >= &hi_red {
                    break;
                }
                visit(ax + &jr, ay + &shift_y);
            }
            j += 1;
        }
        Ok(())
    }

    fn narrow_extrema(&self, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
        let a = self.eval(lo);
        let b = self.eval(hi);
        let (mut min, mut max) = if a <= b { (a, b) } else { (b, a) };
        self.try_for_each_breakpoint(lo, hi, usize::MAX / 4, |_, y| {
            if y < min {
                min = y;
            } else if y > max {
                max = y;
            }
        })
        .expect("narrow interval has few breakpoints");
        (min, max)
    }

    /// Exact image `F(I)`, an interval because `F` is continuous.
    pub fn image(&self, interval: &Interval) -> Interval {
        let (lo, hi) = (&interval.lo, &interval.hi);
        if interval.width() < Rational::one() {
            let (min, max) = self.narrow_extrema(lo, hi);
            return Interval::new(min, max);
        }
        let one = Rational::one();
        let d = self.degree;
        if d == 0 {
            return Interval::new(self.min_value.clone(), self.max_value.clone());
        }
        let left = self.narrow_extrema(lo, &(lo + &one));
        let right = self.narrow_extrema(&(hi - &one), hi);
        if d > 0 {
            Interval::new(left.0, right.1)
        } else {
            Interval::new(right.0, left.1)
        }
    }

    /// Range of `F` over the whole real line when `F` is bounded (degree 0).
    pub fn bounded_range(&self) -> Option<Interval> {
        (self.degree == 0).then(|| Interval::new(self.min_value.clone(), self.max_value.clone()))
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.anchors.windows(2).all(|w| w[0].1 <= w[1].1)
    }

    /// `outer ∘ inner`, computed piecewise on the fundamental domain of `inner`.
    pub fn compose(outer: &PLLift, inner: &PLLift) -> Result<PLLift> {
        PLLift::compose_with_cap(outer, inner, DEFAULT_BREAKPOINT_CAP)
    }

    pub fn compose_with_cap(outer: &PLLift, inner: &PLLift, cap: usize) -> Result<PLLift> {
        let degree = outer
            .degree
            .checked_mul(inner.degree)
            .ok_or_else(|| Error::Precondition("degree of composition overflows".into()))?;
        // Points come out in increasing order: each inner piece contributes its
        // left anchor, then the pulled-back outer breakpoints strictly inside it.
        let mut points: Vec<(Rational, Rational)> = Vec::with_capacity(2 * inner.anchors.len());
        let mut inside: Vec<(Rational, Rational)> = Vec::new();
        for w in inner.anchors.windows(2) {
            let ((x0, y0), (x1, y1)) = (&w[0], &w[1]);
            points.push((x0.clone(), outer.eval(y0)));
            if y0 == y1 {
                continue;
            }
            let (lo, hi) = if y0 < y1 { (y0, y1) } else { (y1, y0) };
            let remaining = cap.saturating_sub(points.len());
            let scale = (x1 - x0) / (y1 - y0);
            inside.clear();
            outer.try_for_each_breakpoint(lo, hi, remaining, |c, v| {
                inside.push((x0 + (&c - y0) * &scale, v));
            })?;
            if y0 > y1 {
                inside.reverse();
            }
            points.append(&mut inside);
            if points.len() > cap {
                return Err(Error::BlowUp { cap });
            }
        }
        let (x_last, y_last) = &inner.anchors[inner.anchors.len() - 1];
        points.push((x_last.clone(), outer.eval(y_last)));
        PLLift::new(simplify(points), degree)
    }

    /// `F^n` for `n >= 1`, by repeated squaring.
    pub fn power(&self, n: usize) -> Result<PLLift> {
        self.power_with_cap(n, DEFAULT_BREAKPOINT_CAP)
    }

    pub fn power_with_cap(&self, n: usize, cap: usize) -> Result<PLLift> {
        if n == 0 {
            return Err(Error::Precondition("power requires n >= 1".into()));
        }
        let mut result: Option<PLLift> = None;
        let mut base = self.clone();
        let mut e = n;
        loop {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => PLLift::compose_with_cap(&base, &r, cap)?,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = PLLift::compose_with_cap(&base, &base, cap)?;
        }
        Ok(result.expect("n >= 1"))
    }

    /// The conjugate `x ↦ -F(-x)`, which has the same degree.
    pub fn reflect(&self) -> PLLift {
        let anchors = self.anchors.iter().rev().map(|(x, y)| (-x, -y)).collect();
        PLLift::new(anchors, self.degree).expect("reflection preserves the lifting relation")
    }

    /// Inverse of a strictly increasing degree-one lifting.
    pub fn inverse(&self) -> Result<PLLift> {
        if self.degree != 1 || !self.anchors.windows(2).all(|w| w[0].1 < w[1].1) {
            return Err(Error::Precondition(
                "only strictly increasing degree-one liftings are invertible".into(),
            ));
        }
        PLLift::new(self.anchors.iter().map(|(x, y)| (y.clone(), x.clone())).collect(), 1)
    }

    /// Residues in `[0, 1)` of every anchor, plus `0` and `1`.
    fn residue_points(&self) -> Vec<Rational> {
        let mut pts: Vec<Rational> = self
            .anchors
            .iter()
            .map(|(x, _)| x - Rational::from_integer(floor_int(x)))
            .collect();
        pts.push(Rational::zero());
        pts.push(Rational::one());
        pts
    }
}

/// Drops anchors that are collinear with both neighbours.
pub(crate) fn simplify(points: Vec<(Rational, Rational)>) -> Vec<(Rational, Rational)> {
    if points.len() <= 2 {
        return points;
    }
    let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(points.len());
    for p in points {
        while out.len() >= 2 {
            let (a, b) = (&out[out.len() - 2], &out[out.len() - 1]);
            let lhs = (&b.1 - &a.1) * (&p.0 - &b.0);
            let rhs = (&p.1 - &b.1) * (&b.0 - &a.0);
            if lhs == rhs {
                out.pop();
            } else {
                break;
            }
        }
        out.push(p);
    }
    out
}

impl PartialEq for PLLift {
    fn eq(&self, other: &Self) -> bool {
        if self.degree != other.degree {
            return false;
        }
        let mut pts = self.residue_points();
        pts.extend(other.residue_points());
        pts.iter().all(|x| self.eval(x) == other.eval(x))
    }
}

impl Eq for PLLift {}

impl fmt::Display for PLLift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "degree {};", self.degree)?;
        for (x, y) in &self.anchors {
            write!(f, " ({x}, {y})")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn example_one(d: i64) -> PLLift {
        make_lift(
            vec![
                (int(0), int(0)),
                (rat(1, 4), rat(3, 4) - int(d)),
                (rat(3, 4), rat(-3, 4)),
                (int(1), int(-d)),
            ],
            -d,
        )
        .unwrap()
    }

    #[test]
    fn identity_from_anchors() {
        let f = make_lift(vec![(int(0), int(0)), (int(1), int(1))], 1).unwrap();
        assert_eq!(f, PLLift::identity());
        assert_eq!(f.eval(&rat(22, 7)), rat(22, 7));
    }

    #[test]
    fn rejects_bad_anchors() {
        assert!(matches!(
            make_lift(vec![(int(0), int(0)), (int(1), int(1))], 2),
            Err(Error::InvalidLift(_))
        ));
        assert!(make_lift(vec![(int(0), int(0)), (int(0), int(0)), (int(1), int(1))], 1).is_err());
        assert!(make_lift(vec![(int(0), int(0)), (int(2), int(1))], 1).is_err());
        assert!(make_lift(vec![(rat(1, 2), int(0)), (int(0), int(0)), (int(1), int(1))], 1).is_err());
        assert!(make_lift(vec![(int(0), int(0))], 0).is_err());
    }

    #[test]
    fn example_one_values() {
        let f = example_one(4);
        assert_eq!(f.eval(&rat(1, 4)), rat(-13, 4));
        assert_eq!(f.eval(&rat(3, 4)), rat(-3, 4));
        assert_eq!(f.eval(&rat(-3, 4)), rat(3, 4));
        assert_eq!(f.iterate(&rat(3, 4), 2), rat(3, 4));
        // F(x + 1) = F(x) - 4
        assert_eq!(f.eval(&rat(5, 4)), rat(-13, 4) - int(4));
    }

    #[test]
    fn domain_not_anchored_at_zero() {
        let f = make_lift(vec![(rat(-1, 2), int(0)), (rat(1, 2), int(1))], 1).unwrap();
        assert_eq!(f.eval(&int(0)), rat(1, 2));
        assert_eq!(f.eval(&int(3)), rat(7, 2));
        assert_eq!(f, PLLift::rotation(rat(1, 2)));
    }

    #[test]
    fn rigid_rotation_iterates() {
        let f = PLLift::rotation(rat(1, 2));
        assert_eq!(f.iterate(&int(0), 3), rat(3, 2));
        assert_eq!(f.iterate(&rat(1, 3), 0), rat(1, 3));
    }

    #[test]
    fn powers() {
        assert_eq!(PLLift::identity().power(7).unwrap(), PLLift::identity());
        let neg = make_lift(vec![(int(0), int(0)), (int(1), int(-1))], -1).unwrap();
        let sq = neg.power(2).unwrap();
        assert_eq!(sq.degree(), 1);
        assert_eq!(sq, PLLift::identity());
        assert_eq!(sq.anchors().len(), 2);
        let f = example_one(4);
        let f2 = f.power(2).unwrap();
        assert_eq!(f2.degree(), 16);
        assert_eq!(f2.eval(&rat(3, 4)), rat(3, 4));
        assert!(f.power(0).is_err());
    }

    #[test]
    fn power_respects_cap() {
        let f = example_one(5);
        assert!(matches!(f.power_with_cap(6, 1000), Err(Error::BlowUp { .. })));
    }

    #[test]
    fn image_of_intervals() {
        let f = example_one(4);
        let img = f.image(&Interval::new(int(0), int(1)));
        assert_eq!(img, Interval::new(int(-4), int(0)));
        let wide = f.image(&Interval::new(rat(-1, 2), rat(5, 2)));
        // brute force over breakpoints
        let mut ys = vec![f.eval(&rat(-1, 2)), f.eval(&rat(5, 2))];
        for j in -1..3 {
            for (x, _) in f.anchors() {
                let x = x + int(j);
                if x > rat(-1, 2) && x < rat(5, 2) {
                    ys.push(f.eval(&x));
                }
            }
        }
        let lo = ys.iter().min().unwrap().clone();
        let hi = ys.iter().max().unwrap().clone();
        assert_eq!(wide, Interval::new(lo, hi));
    }

    #[test]
    fn reflection_of_example_one_is_itself() {
        for d in 2..=5 {
            let f = example_one(d);
            assert_eq!(f.reflect(), f);
        }
        let g = make_lift(vec![(int(0), rat(1, 2)), (rat(1, 2), int(0)), (int(1), rat(3, 2))], 1).unwrap();
        assert_ne!(g.reflect(), g);
    }

    #[test]
    fn inverse_of_increasing_map() {
        let h = make_lift(vec![(int(0), int(0)), (rat(1, 3), rat(2, 3)), (int(1), int(1))], 1).unwrap();
        let inv = h.inverse().unwrap();
        assert_eq!(PLLift::compose(&h, &inv).unwrap(), PLLift::identity());
        assert_eq!(PLLift::compose(&inv, &h).unwrap(), PLLift::identity());
    }

    #[test]
    fn simplify_removes_collinear() {
        let pts = vec![(int(0), int(0)), (rat(1, 2), rat(1, 2)), (int(1), int(1))];
        assert_eq!(simplify(pts), vec![(int(0), int(0)), (int(1), int(1))]);
    }
}
