//! Envelope maps, rotation numbers and rotation intervals of degree-one liftings.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::pl_map::{simplify, PLLift};
use crate::rational::{floor_int, int, to_f64, Rational};

/// Default denominator bound for rotation-number searches.
pub const DEFAULT_DENOMINATOR_BOUND: u64 = 10_000;

/// A rotation number: known exactly, or enclosed in an open bracket.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RotationBound {
    /// `rho = value`, certified by `G^q(witness) = witness + p` where `value = p/q`.
    Exact { value: Rational, witness: Rational },
    /// `lo < rho < hi`; no fraction with denominator `<= denominator_bound` lies in between,
    /// and `hi - lo <= 1 / denominator_bound^2`.
    Bracket {
        lo: Rational,
        hi: Rational,
        denominator_bound: u64,
    },
}

impl RotationBound {
    pub fn is_exact(&self) -> bool {
        matches!(self, RotationBound::Exact { .. })
    }

    pub fn exact_value(&self) -> Option<&Rational> {
        match self {
            RotationBound::Exact { value, .. } => Some(value),
            RotationBound::Bracket { .. } => None,
        }
    }

    /// Largest certified lower bound.
    pub fn lower(&self) -> &Rational {
        match self {
            RotationBound::Exact { value, .. } => value,
            RotationBound::Bracket { lo, .. } => lo,
        }
    }

    /// Smallest certified upper bound.
    pub fn upper(&self) -> &Rational {
        match self {
            RotationBound::Exact { value, .. } => value,
            RotationBound::Bracket { hi, .. } => hi,
        }
    }

    /// Certifies `rho >= r`.
    pub fn certainly_at_least(&self, r: &Rational) -> bool {
        self.lower() >= r
    }

    /// Certifies `rho <= r`.
    pub fn certainly_at_most(&self, r: &Rational) -> bool {
        self.upper() <= r
    }
}

impl fmt::Display for RotationBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RotationBound::Exact { value, .. } => write!(f, "{value} exact"),
            RotationBound::Bracket {
                lo,
                hi,
                denominator_bound,
            } => write!(f, "({lo}, {hi}) bracket:{denominator_bound}"),
        }
    }
}

/// Endpoints of the rotation interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationInterval {
    pub left: RotationBound,
    pub right: RotationBound,
}

impl RotationInterval {
    /// Certifies `[lo, hi] ⊆ rotation interval`.
    pub fn contains_interval(&self, lo: &Rational, hi: &Rational) -> bool {
        self.left.certainly_at_most(lo) && self.right.certainly_at_least(hi)
    }
}

impl fmt::Display for RotationInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rotation_interval = [{}, {}] ", self.left.lower(), self.right.upper())?;
        let bracket_bound = [&self.left, &self.right].into_iter().find_map(|b| match b {
            RotationBound::Bracket { denominator_bound, .. } => Some(*denominator_bound),
            RotationBound::Exact { .. } => None,
        });
        match bracket_bound {
            None => write!(f, "exact"),
            Some(q) => write!(f, "bracket:{q}"),
        }
    }
}

fn require_degree_one(f: &PLLift) -> Result<()> {
    if f.degree() != 1 {
        return Err(Error::Degree {
            expected: "1",
            found: f.degree(),
        });
    }
    Ok(())
}

/// Graph points of `F` on `[a, b]`: both ends plus every breakpoint in between.
fn graph_points(f: &PLLift, a: &Rational, b: &Rational) -> Vec<(Rational, Rational)> {
    let mut pts = vec![(a.clone(), f.eval(a))];
    f.try_for_each_breakpoint(a, b, usize::MAX / 4, |x, y| pts.push((x, y)))
        .expect("bounded span");
    pts.push((b.clone(), f.eval(b)));
    pts
}

fn restrict(points: Vec<(Rational, Rational)>, lo: &Rational, hi: &Rational) -> Vec<(Rational, Rational)> {
    let pts = points.into_iter().filter(|(x, _)| x >= lo && x <= hi).collect();
    simplify(pts)
}

/// `U(x) = sup{F(y) : y <= x}` for a degree-one lifting.
///
/// For degree one the supremum is a maximum over `[x - 1, x]`, so `U` on the
/// fundamental domain is the running maximum of `F` started one domain to the left.
pub fn upper_map(f: &PLLift) -> Result<PLLift> {
    require_degree_one(f)?;
    let t = f.domain_start().clone();
    let one = Rational::one();
    let pts = graph_points(f, &(&t - &one), &(&t + &one));
    let mut out = Vec::with_capacity(pts.len() + 4);
    let mut level = pts[0].1.clone();
    out.push(pts[0].clone());
    for w in pts.windows(2) {
        let ((x0, y0), (x1, y1)) = (&w[0], &w[1]);
        if y1 > &level {
            if y0 < &level {
                let xc = x0 + (&level - y0) * (x1 - x0) / (y1 - y0);
                out.push((xc, level.clone()));
            }
            out.push((x1.clone(), y1.clone()));
            level = y1.clone();
        } else {
            out.push((x1.clone(), level.clone()));
        }
    }
    PLLift::new(restrict(out, &t, &(&t + &one)), 1)
}

/// `L(x) = inf{F(y) : y >= x}`, the running minimum of `F` from the right.
pub fn lower_map(f: &PLLift) -> Result<PLLift> {
    require_degree_one(f)?;
    let t = f.domain_start().clone();
    let one = Rational::one();
    let two = int(2);
    let pts = graph_points(f, &t, &(&t + &two));
    let last = pts.len() - 1;
    let mut out = Vec::with_capacity(pts.len() + 4);
    let mut level = pts[last].1.clone();
    out.push(pts[last].clone());
    for w in pts.windows(2).rev() {
        let ((x0, y0), (x1, y1)) = (&w[0], &w[1]);
        if y0 < &level {
            if y1 > &level {
                let xc = x0 + (&level - y0) * (x1 - x0) / (y1 - y0);
                out.push((xc, level.clone()));
            }
            out.push((x0.clone(), y0.clone()));
            level = y0.clone();
        } else {
            out.push((x0.clone(), level.clone()));
        }
    }
    out.reverse();
    PLLift::new(restrict(out, &t, &(&t + &one)), 1)
}

/// Compares `rho(G)` with `p/q` for a nondecreasing degree-one `G`.
///
/// `h(x) = G^q(x) - x - p` is 1-periodic; `rho = p/q` iff `h` vanishes
/// somewhere, otherwise the constant sign of `h` gives the side.
fn compare_with(g: &PLLift, p: &BigInt, q: u64) -> Result<(Ordering, Option<Rational>)> {
    let gq = g.power(q as usize)?;
    let p = Rational::from_integer(p.clone());
    let values: Vec<(Rational, Rational)> = gq
        .anchors()
        .iter()
        .map(|(x, y)| (x.clone(), y - x - &p))
        .collect();
    let min = values.iter().map(|v| &v.1).min().expect("nonempty");
    let max = values.iter().map(|v| &v.1).max().expect("nonempty");
    if min.is_positive() {
        return Ok((Ordering::Greater, None));
    }
    if max.is_negative() {
        return Ok((Ordering::Less, None));
    }
    if let Some((x, _)) = values.iter().find(|v| v.1.is_zero()) {
        return Ok((Ordering::Equal, Some(x.clone())));
    }
    for w in values.windows(2) {
        let ((x0, h0), (x1, h1)) = (&w[0], &w[1]);
        if h0.signum() != h1.signum() {
            let x = x0 - h0 * (x1 - x0) / (h1 - h0);
            return Ok((Ordering::Equal, Some(x)));
        }
    }
    unreachable!("a continuous function with min <= 0 <= max has a root between anchors")
}

#[derive(Clone, Debug)]
struct Frac {
    num: BigInt,
    den: u64,
}

impl Frac {
    fn value(&self) -> Rational {
        Rational::new(self.num.clone(), BigInt::from(self.den))
    }

    fn combine(&self, other: &Frac, j: u64) -> Frac {
        Frac {
            num: &self.num + BigInt::from(j) * &other.num,
            den: self.den + j * other.den,
        }
    }
}

enum Probe {
    Side(Ordering),
    /// The search is over with this result.
    Exact(RotationBound),
}

/// Candidates with denominator up to this go straight to the exact test.
const EXACT_FIRST: u64 = 64;

/// Hard limit on the length of the bounding orbits.
const ORBIT_STEP_LIMIT: u64 = 1 << 30;

/// Rigorous two-sided bounds on `rho(G)` from floating-point pseudo-orbits.
///
/// The lower orbit follows `x -> G(x) - margin` and the upper one
/// `x -> G(x) + margin`, where `margin` dominates every rounding error of the
/// evaluation. `G` is nondecreasing, so the lower orbit stays below the true
/// orbit of the start point and the upper one above it. For nondecreasing
/// degree-one maps `|G^n(x) - x - n rho| < 1`, which turns positions after
/// `n` steps into strict bounds on `rho`.
struct OrbitBounds {
    breaks: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
    margin: f64,
    lo: (i64, f64),
    hi: (i64, f64),
    steps: u64,
}

impl OrbitBounds {
    fn new(g: &PLLift) -> Option<Self> {
        let t = g.domain_start();
        let pts: Vec<(f64, f64)> = g.anchors().iter().map(|(x, y)| (to_f64(&(x - t)), to_f64(&(y - t)))).collect();
        let mut slopes = Vec::with_capacity(pts.len() - 1);
        for w in g.anchors().windows(2) {
            slopes.push(to_f64(&((&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0))));
        }
        let finite = pts.iter().all(|(x, y)| x.is_finite() && y.is_finite()) && slopes.iter().all(|s| s.is_finite());
        if !finite {
            return None;
        }
        let vmax = pts.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
        let smax = slopes.iter().map(|s| s.abs()).fold(0.0, f64::max);
        let margin = 64.0 * f64::EPSILON * (vmax + smax + 2.0);
        if !margin.is_finite() || margin > 1e-6 {
            return None;
        }
        let (breaks, values): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
        Some(OrbitBounds {
            breaks,
            values,
            slopes,
            margin,
            lo: (0, 0.0),
            hi: (0, 0.0),
            steps: 0,
        })
    }

    fn steps(&self) -> u64 {
        self.steps
    }

    fn step(&self, (k, u): (i64, f64), shift: f64) -> (i64, f64) {
        let i = self.breaks[1..self.breaks.len() - 1].partition_point(|b| *b <= u);
        let y = self.values[i] + (u - self.breaks[i]) * self.slopes[i] + shift;
        let whole = y.floor();
        (k + whole as i64, y - whole)
    }

    fn advance(&mut self, n: u64) {
        for _ in 0..n {
            self.lo = self.step(self.lo, -self.margin);
            self.hi = self.step(self.hi, self.margin);
        }
        self.steps += n;
    }

    /// Strict bounds `lo < rho < hi`, once at least one step has run.
    fn bounds(&self) -> Option<(Rational, Rational)> {
        if self.steps == 0 {
            return None;
        }
        let n = int(self.steps as i64);
        let position = |(k, u): (i64, f64)| int(k) + Rational::from_float(u).expect("finite");
        Some(((position(self.lo) - int(1)) / &n, (position(self.hi) + int(1)) / &n))
    }

    /// `Greater` if `rho > r` is certified, `Less` if `rho < r`.
    fn side_of(&self, r: &Rational) -> Option<Ordering> {
        let (lo, hi) = self.bounds()?;
        if r <= &lo {
            Some(Ordering::Greater)
        } else if r >= &hi {
            Some(Ordering::Less)
        } else {
            None
        }
    }
}

/// Replaces the ends of `(lo, hi)` by rationals of small height, moving each
/// outwards by at most half the room left under `target`.
fn narrowed(lo: Rational, hi: Rational, target: &Rational) -> (Rational, Rational) {
    let slack = (target - (&hi - &lo)) / int(2);
    (simplest_in(&(&lo - &slack), &lo), simplest_in(&hi, &(&hi + &slack)))
}

/// The rational of least denominator in `[a, b]`.
fn simplest_in(a: &Rational, b: &Rational) -> Rational {
    let k = a.ceil();
    if &k <= b {
        // The integer of least absolute value in range.
        return if a.is_positive() {
            k
        } else if b.is_negative() {
            b.floor()
        } else {
            Rational::zero()
        };
    }
    let fl = a.floor();
    let inner = simplest_in(&(b - &fl).recip(), &(a - &fl).recip());
    fl + inner.recip()
}

/// Rotation number of a nondecreasing degree-one lifting.
///
/// Stern–Brocot search over Farey brackets. Candidates are first compared
/// against bounding orbits; a candidate `p/q` with `q <= denominator_bound`
/// that they cannot separate is decided exactly through `G^q`. Runs of
/// same-side moves are taken with exponential and then binary search.
/// Refinement continues past `denominator_bound` until the bracket is no
/// wider than `1 / denominator_bound^2`, possibly finishing on the orbit
/// bounds instead of a Farey pair.
pub fn monotone_rotation_number(g: &PLLift, denominator_bound: u64) -> Result<RotationBound> {
    require_degree_one(g)?;
    if !g.is_nondecreasing() {
        return Err(Error::NotMonotone);
    }
    if denominator_bound == 0 {
        return Err(Error::Precondition("denominator bound must be positive".into()));
    }
    let q_bound = denominator_bound;
    let orbit_limit = q_bound
        .saturating_mul(q_bound)
        .saturating_mul(8)
        .clamp(1 << 16, ORBIT_STEP_LIMIT);
    let orbit = std::cell::RefCell::new(OrbitBounds::new(g));
    let exact = |f: &Frac| -> Result<Probe> {
        let (ord, witness) = compare_with(g, &f.num, f.den)?;
        Ok(match ord {
            Ordering::Equal => Probe::Exact(RotationBound::Exact {
                value: f.value(),
                witness: witness.expect("equality carries a witness"),
            }),
            side => Probe::Side(side),
        })
    };
    // Cheap orbit bounds first; exact composition only for what they cannot separate.
    // Past the denominator bound no exact decision is needed: once the orbit
    // bracket is narrow enough it is intersected with the current Farey pair.
    let width_target = Rational::new(BigInt::one(), BigInt::from(q_bound) * BigInt::from(q_bound));
    let probe = |f: &Frac, bracket: Option<(&Frac, &Frac)>| -> Result<Probe> {
        let mut orbit = orbit.borrow_mut();
        let Some(orbit) = orbit.as_mut() else {
            return exact(f);
        };
        let value = f.value();
        loop {
            if let Some(side) = orbit.side_of(&value) {
                return Ok(Probe::Side(side));
            }
            let endgame = bracket.filter(|_| f.den > q_bound);
            if let (Some((left, right)), Some((lo, hi))) = (endgame, orbit.bounds()) {
                if &hi - &lo <= width_target {
                    let (lo, hi) = narrowed(left.value().max(lo), right.value().min(hi), &width_target);
                    return Ok(Probe::Exact(RotationBound::Bracket {
                        lo,
                        hi,
                        denominator_bound,
                    }));
                }
            }
            if f.den <= EXACT_FIRST || orbit.steps() >= orbit_limit {
                return exact(f);
            }
            orbit.advance(orbit.steps().max(1024).min(orbit_limit - orbit.steps()));
        }
    };

    // Integer bracket from the displacement range.
    let disp: Vec<Rational> = g.anchors().iter().map(|(x, y)| y - x).collect();
    let mut c = floor_int(disp.iter().min().expect("nonempty"));
    let left_int: BigInt = loop {
        match probe(&Frac { num: c.clone(), den: 1 }, None)? {
            Probe::Exact(r) => return Ok(r),
            Probe::Side(Ordering::Greater) => c += 1,
            Probe::Side(_) => break &c - BigInt::one(),
        }
    };
    let mut left = Frac { num: left_int.clone(), den: 1 };
    let mut right = Frac { num: left_int + 1, den: 1 };

    let max_den = q_bound.saturating_mul(q_bound).saturating_add(q_bound);
    let done = |l: &Frac, r: &Frac| {
        l.den + r.den > q_bound && (l.den as u128) * (r.den as u128) >= (q_bound as u128) * (q_bound as u128)
    };
    while !done(&left, &right) {
        let mediant = left.combine(&right, 1);
        let side = match probe(&mediant, Some((&left, &right)))? {
            Probe::Exact(r) => return Ok(r),
            Probe::Side(s) => s,
        };
        // moving == the endpoint being replaced; fixed == the endpoint kept.
        let (moving, fixed) = match side {
            Ordering::Greater => (&left, &right),
            _ => (&right, &left),
        };
        let candidate = |j: u64| moving.combine(fixed, j);
        let j_limit = if max_den > moving.den {
            ((max_den - moving.den) / fixed.den).max(1)
        } else {
            1
        };
        // Largest j with rho on the same side of candidate(j) as it is of the mediant.
        let mut good = 1u64;
        let mut bad: Option<u64> = None;
        let mut j = 2u64;
        while j <= j_limit {
            match probe(&candidate(j), Some((&left, &right)))? {
                Probe::Exact(r) => return Ok(r),
                Probe::Side(s) if s == side => {
                    good = j;
                    j = j.saturating_mul(2);
                }
                Probe::Side(_) => {
                    bad = Some(j);
                    break;
                }
            }
        }
        if bad.is_none() && good < j_limit {
            match probe(&candidate(j_limit), Some((&left, &right)))? {
                Probe::Exact(r) => return Ok(r),
                Probe::Side(s) if s == side => good = j_limit,
                Probe::Side(_) => bad = Some(j_limit),
            }
        }
        if let Some(mut hi) = bad {
            while hi - good > 1 {
                let mid = good + (hi - good) / 2;
                match probe(&candidate(mid), Some((&left, &right)))? {
                    Probe::Exact(r) => return Ok(r),
                    Probe::Side(s) if s == side => good = mid,
                    Probe::Side(_) => hi = mid,
                }
            }
            bad = Some(hi);
        }
        let new_moving = candidate(good);
        let new_fixed = match bad {
            Some(b) => candidate(b),
            None => fixed.clone(),
        };
        match side {
            Ordering::Greater => {
                left = new_moving;
                right = new_fixed;
            }
            _ => {
                right = new_moving;
                left = new_fixed;
            }
        }
    }
    Ok(RotationBound::Bracket {
        lo: left.value(),
        hi: right.value(),
        denominator_bound,
    })
}

/// Rotation interval `[rho(lower_map F), rho(upper_map F)]` of a degree-one lifting.
pub fn rotation_interval(f: &PLLift, denominator_bound: u64) -> Result<RotationInterval> {
    require_degree_one(f)?;
    let left = monotone_rotation_number(&lower_map(f)?, denominator_bound)?;
    let right = monotone_rotation_number(&upper_map(f)?, denominator_bound)?;
    Ok(RotationInterval { left, right })
}

/// `{q <= n_max : ∃ p ∈ Z, a < p/q < b}`.
pub fn forced_periods(a: &Rational, b: &Rational, n_max: usize) -> BTreeSet<usize> {
    (1..=n_max)
        .filter(|&q| {
            let qr = int(q as i64);
            let p = (a * &qr).floor() + Rational::one();
            p < b * qr
        })
        .collect()
}
