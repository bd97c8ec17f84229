//! Exact solutions of `F^n(x) = x + k`, orbits, and periods.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::ControlFlow;

use num_traits::{One, Signed};

use crate::branch::{walk, Branch, DEFAULT_NODE_CAP};
use crate::error::{Error, Result};
use crate::pl_map::PLLift;
use crate::rational::{affine_fixed_point, bigint_to_i64, floor_int, int, is_integer, Interval, Rational};

/// One solution of `F^n(x) = x + k`: a single point or a whole interval of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Isolated(Rational),
    Segment(Interval),
}

/// All solutions of `F^n(x) = x + k` inside a window, sorted and disjoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicSolutions {
    pub n: usize,
    pub k: i64,
    pub isolated: Vec<Rational>,
    pub segments: Vec<Interval>,
}

impl PeriodicSolutions {
    fn from_raw(n: usize, k: i64, raw: Vec<Solution>) -> Self {
        let mut isolated = Vec::new();
        let mut segments: Vec<Interval> = Vec::new();
        for s in raw {
            match s {
                Solution::Isolated(x) => isolated.push(x),
                Solution::Segment(i) => segments.push(i),
            }
        }
        segments.sort_by(|a, b| a.lo.cmp(&b.lo));
        let mut merged: Vec<Interval> = Vec::with_capacity(segments.len());
        for seg in segments {
            match merged.last_mut() {
                Some(last) if seg.lo <= last.hi => {
                    if seg.hi > last.hi {
                        last.hi = seg.hi;
                    }
                }
                _ => merged.push(seg),
            }
        }
        isolated.sort();
        isolated.dedup();
        isolated.retain(|x| !merged.iter().any(|s| s.contains(x)));
        PeriodicSolutions {
            n,
            k,
            isolated,
            segments: merged,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.isolated.is_empty() && self.segments.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.isolated.contains(x) || self.segments.iter().any(|s| s.contains(x))
    }
}

impl fmt::Display for PeriodicSolutions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "period {}: {} isolated, {} segments",
            self.n,
            self.isolated.len(),
            self.segments.len()
        )
    }
}

/// A true periodic orbit, listed in orbit order starting from its generating point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub points: Vec<Rational>,
    pub period: usize,
    pub diameter: Rational,
}

impl Orbit {
    pub fn min(&self) -> &Rational {
        self.points.iter().min().expect("orbits are nonempty")
    }

    pub fn max(&self) -> &Rational {
        self.points.iter().max().expect("orbits are nonempty")
    }

    pub fn sorted_points(&self) -> Vec<Rational> {
        let mut pts = self.points.clone();
        pts.sort();
        pts
    }

    /// The convex hull `[min P, max P]`.
    pub fn hull(&self) -> Interval {
        Interval::new(self.min().clone(), self.max().clone())
    }

    /// Checks that `F` permutes the points cyclically in the listed order.
    pub fn is_orbit_of(&self, f: &PLLift) -> bool {
        let n = self.points.len();
        n == self.period
            && n > 0
            && (0..n).all(|i| f.eval(&self.points[i]) == self.points[(i + 1) % n])
            && (1..n).all(|i| self.points[i] != self.points[0])
    }
}

impl fmt::Display for Orbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self.sorted_points().iter().map(|p| p.to_string()).collect();
        write!(
            f,
            "period {}, diameter {}, points {{{}}}",
            self.period,
            self.diameter,
            pts.join(", ")
        )
    }
}

/// Result of [`mod1_rotation`]: `F^n(x) = x + k` with `n` least.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mod1Rotation {
    pub n: usize,
    pub k: i64,
    pub rho: Rational,
}

/// A window that contains every true periodic point of `F`, when one exists.
///
/// Degree 1: one fundamental domain (solutions are translation invariant).
/// Degree 0: the range of `F`. `|d| >= 2`: `[-R, R]` with
/// `R = max|F(x) - d x| / (|d| - 1)`, outside of which `|F(x)| > |x|`.
/// Degree -1 admits no such bound.
pub fn periodic_window(f: &PLLift) -> Option<Interval> {
    match f.degree() {
        1 => Some(f.domain()),
        _ => invariant_hull(f),
    }
}

/// A bounded interval containing every full true periodic orbit.
fn invariant_hull(f: &PLLift) -> Option<Interval> {
    let d = f.degree();
    if d == 0 {
        return f.bounded_range();
    }
    if d.abs() < 2 {
        return None;
    }
    let dr = int(d);
    let m = f
        .anchors()
        .iter()
        .map(|(x, y)| (y - &dr * x).abs())
        .max()
        .expect("anchors are nonempty");
    let r = m / int(d.abs() - 1);
    Some(Interval::new(-r.clone(), r))
}

fn resolve_window(f: &PLLift, window: Option<&Interval>) -> Result<Interval> {
    match window {
        Some(w) => Ok(w.clone()),
        None if f.degree() == 1 => Ok(f.domain()),
        None => Err(Error::WindowRequired(f.degree())),
    }
}

/// Streams the solutions of `F^n(x) = x + k` in the window to `visit` in increasing order.
///
/// Adjacent pieces may report the same boundary point twice.
pub(crate) fn visit_solutions(
    f: &PLLift,
    n: usize,
    k: i64,
    window: &Interval,
    mut visit: impl FnMut(Solution) -> ControlFlow<()>,
) -> Result<()> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let shift = int(k);
    // Solutions with k = 0 are true periodic points; their whole orbits stay in the hull.
    let hull = if k == 0 { invariant_hull(f) } else { None };
    if let Some(h) = &hull {
        if window.intersect(h).is_none() {
            return Ok(());
        }
    }
    let constraint = |_depth: usize| hull.clone();
    let prune = |b: &Branch| {
        let mut z = b.image();
        for _ in b.depth..n {
            z = f.image(&z);
            if let Some(h) = &hull {
                match z.intersect(h) {
                    Some(c) => z = c,
                    None => return true,
                }
            }
        }
        z.intersect(&b.x.shift(&shift)).is_none()
    };
    walk(f, window.clone(), n, DEFAULT_NODE_CAP, constraint, prune, |b| {
        match leaf_solution(&b, &shift) {
            Some(s) => visit(s),
            None => ControlFlow::Continue(()),
        }
    })
}

fn leaf_solution(b: &Branch, shift: &Rational) -> Option<Solution> {
    if b.x.is_degenerate() {
        let x = &b.x.lo;
        return (b.apply(x) == x + shift).then(|| Solution::Isolated(x.clone()));
    }
    match affine_fixed_point(&b.slope, &b.offset, shift) {
        Some(x) => b.x.contains(&x).then_some(Solution::Isolated(x)),
        None => (&b.offset == shift).then(|| Solution::Segment(b.x.clone())),
    }
}

/// All solutions of `F^n(x) = x + k` in `window`.
///
/// For degree 1 the window defaults to the fundamental domain; every other
/// degree needs an explicit window (see [`periodic_window`]).
pub fn solve_periodic(f: &PLLift, n: usize, k: i64, window: Option<&Interval>) -> Result<PeriodicSolutions> {
    let window = resolve_window(f, window)?;
    let mut raw = Vec::new();
    visit_solutions(f, n, k, &window, |s| {
        raw.push(s);
        ControlFlow::Continue(())
    })?;
    Ok(PeriodicSolutions::from_raw(n, k, raw))
}

fn proper_divisors(n: usize) -> Vec<usize> {
    (1..n).filter(|i| n.is_multiple_of(*i)).collect()
}

/// Least period of a point known to satisfy `F^n(x) = x`.
pub fn least_period(f: &PLLift, x: &Rational, n: usize) -> usize {
    proper_divisors(n)
        .into_iter()
        .find(|&i| &f.iterate(x, i) == x)
        .unwrap_or(n)
}

/// A point of `segment` (where `F^n = id`) whose least period is exactly `n`, if any.
fn segment_witness(f: &PLLift, segment: &Interval, n: usize) -> Result<Option<Rational>> {
    let mut blocked: Vec<Solution> = Vec::new();
    for i in proper_divisors(n) {
        visit_solutions(f, i, 0, segment, |s| {
            blocked.push(s);
            ControlFlow::Continue(())
        })?;
    }
    let is_blocked = |x: &Rational| {
        blocked.iter().any(|s| match s {
            Solution::Isolated(p) => p == x,
            Solution::Segment(iv) => iv.contains(x),
        })
    };
    let mut marks = vec![segment.lo.clone(), segment.hi.clone()];
    for s in &blocked {
        match s {
            Solution::Isolated(p) => marks.push(p.clone()),
            Solution::Segment(iv) => {
                marks.push(iv.lo.clone());
                marks.push(iv.hi.clone());
            }
        }
    }
    marks.sort();
    marks.dedup();
    let mut candidates = Vec::with_capacity(2 * marks.len());
    for w in marks.windows(2) {
        candidates.push((&w[0] + &w[1]) / int(2));
    }
    candidates.extend(marks);
    Ok(candidates.into_iter().find(|x| !is_blocked(x)))
}

/// For each `n <= n_max`, a point of least period exactly `n` in the window, when one exists.
///
/// The search for period `n` stops at the first witness; only absent periods
/// require enumerating every solution.
pub fn period_witnesses(f: &PLLift, n_max: usize, window: Option<&Interval>) -> Result<BTreeMap<usize, Rational>> {
    let window = resolve_window(f, window)?;
    let mut found = BTreeMap::new();
    for n in 1..=n_max {
        let mut witness: Option<Rational> = None;
        let mut err: Option<Error> = None;
        visit_solutions(f, n, 0, &window, |s| match s {
            Solution::Isolated(x) => {
                if least_period(f, &x, n) == n {
                    witness = Some(x);
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            }
            Solution::Segment(seg) => match segment_witness(f, &seg, n) {
                Ok(Some(x)) => {
                    witness = Some(x);
                    ControlFlow::Break(())
                }
                Ok(None) => ControlFlow::Continue(()),
                Err(e) => {
                    err = Some(e);
                    ControlFlow::Break(())
                }
            },
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        if let Some(x) = witness {
            found.insert(n, x);
        }
    }
    Ok(found)
}

/// `{n <= n_max : some solution of F^n(x) = x in the window has least period n}`.
pub fn periods_set(f: &PLLift, n_max: usize, window: Option<&Interval>) -> Result<BTreeSet<usize>> {
    Ok(period_witnesses(f, n_max, window)?.into_keys().collect())
}

/// The orbit of `x`, if `F^n(x) = x` for some `n <= n_max`.
pub fn orbit_of(f: &PLLift, x: &Rational, n_max: usize) -> Result<Orbit> {
    let mut points = vec![x.clone()];
    let mut y = x.clone();
    for _ in 0..n_max {
        y = f.eval(&y);
        if &y == x {
            let min = points.iter().min().expect("nonempty").clone();
            let max = points.iter().max().expect("nonempty").clone();
            return Ok(Orbit {
                period: points.len(),
                diameter: max - min,
                points,
            });
        }
        points.push(y.clone());
    }
    Err(Error::NotPeriodic {
        x: x.to_string(),
        n_max,
    })
}

/// Least `n <= n_max` with `F^n(x) - x` an integer `k`, and the rotation number `k / n`.
pub fn mod1_rotation(f: &PLLift, x: &Rational, n_max: usize) -> Result<Mod1Rotation> {
    if f.degree() != 1 {
        return Err(Error::Degree {
            expected: "1",
            found: f.degree(),
        });
    }
    let mut y = x.clone();
    for n in 1..=n_max {
        y = f.eval(&y);
        let disp = &y - x;
        if is_integer(&disp) {
            let k = bigint_to_i64(&floor_int(&disp))
                .ok_or_else(|| Error::Precondition("displacement exceeds i64".into()))?;
            return Ok(Mod1Rotation {
                n,
                k,
                rho: disp / int(n as i64),
            });
        }
    }
    Err(Error::NotPeriodic {
        x: x.to_string(),
        n_max,
    })
}

/// Points of `segment` at which the orbit diameter can be maximal.
///
/// On each sub-interval where every `F^i`, `i < n`, is affine the diameter is
/// convex, so its supremum sits at a sub-interval endpoint.
fn segment_extremal_points(f: &PLLift, segment: &Interval, n: usize) -> Result<Vec<Rational>> {
    let mut pts = vec![segment.lo.clone(), segment.hi.clone()];
    if n > 1 {
        walk(f, segment.clone(), n - 1, DEFAULT_NODE_CAP, |_| None, |_| false, |b| {
            pts.push(b.x.lo.clone());
            pts.push(b.x.hi.clone());
            ControlFlow::Continue(())
        })?;
    }
    pts.sort();
    pts.dedup();
    Ok(pts)
}

/// Some true periodic orbit of period `<= n_max` and diameter `> 1` in the window.
pub fn find_large_orbit(f: &PLLift, n_max: usize, window: Option<&Interval>) -> Result<Option<Orbit>> {
    let window = resolve_window(f, window)?;
    let one = Rational::one();
    for n in 1..=n_max {
        let mut found: Option<Orbit> = None;
        let mut err: Option<Error> = None;
        let mut consider = |x: &Rational| -> bool {
            if least_period(f, x, n) != n {
                return false;
            }
            let orbit = orbit_of(f, x, n).expect("x solves F^n(x) = x");
            if orbit.diameter > one {
                found = Some(orbit);
                true
            } else {
                false
            }
        };
        visit_solutions(f, n, 0, &window, |s| {
            let hit = match s {
                Solution::Isolated(x) => consider(&x),
                Solution::Segment(seg) => match segment_extremal_points(f, &seg, n) {
                    Ok(pts) => pts.iter().any(&mut consider),
                    Err(e) => {
                        err = Some(e);
                        true
                    }
                },
            };
            if hit {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pl_map::make_lift;
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

    fn neg() -> PLLift {
        make_lift(vec![(int(0), int(0)), (int(1), int(-1))], -1).unwrap()
    }

    fn theorem_map() -> PLLift {
        make_lift(vec![(int(0), rat(6, 5)), (rat(1, 5), int(-1)), (int(1), rat(11, 5))], 1).unwrap()
    }

    fn window(a: i64, b: i64) -> Interval {
        Interval::new(int(a), int(b))
    }

    #[test]
    fn half_rotation_has_a_full_segment() {
        let f = PLLift::rotation(rat(1, 2));
        let sol = solve_periodic(&f, 2, 1, None).unwrap();
        assert!(sol.isolated.is_empty());
        assert_eq!(sol.segments, vec![window(0, 1)]);
        assert!(solve_periodic(&f, 1, 0, None).unwrap().is_empty());
    }

    #[test]
    fn example_one_period_two_points() {
        let f = example_one(4);
        let sol = solve_periodic(&f, 2, 0, Some(&window(-4, 4))).unwrap();
        assert_eq!(sol.isolated, vec![rat(-3, 4), int(0), rat(3, 4)]);
        assert!(sol.segments.is_empty());
        assert_eq!(sol.to_string(), "period 2: 3 isolated, 0 segments");
    }

    #[test]
    fn negation_fixed_point() {
        let sol = solve_periodic(&neg(), 1, 0, Some(&window(-2, 2))).unwrap();
        assert_eq!(sol.isolated, vec![int(0)]);
        let sq = solve_periodic(&neg(), 2, 0, Some(&window(-2, 2))).unwrap();
        assert_eq!(sq.segments, vec![window(-2, 2)]);
    }

    #[test]
    fn window_required_off_degree_one() {
        assert_eq!(solve_periodic(&neg(), 1, 0, None), Err(Error::WindowRequired(-1)));
    }

    #[test]
    fn periods_of_simple_maps() {
        let ps = periods_set(&neg(), 5, Some(&window(-2, 2))).unwrap();
        assert_eq!(ps, BTreeSet::from([1, 2]));
        assert_eq!(periods_set(&PLLift::identity(), 3, None).unwrap(), BTreeSet::from([1]));
        let ex = periods_set(&example_one(4), 6, Some(&window(-4, 4))).unwrap();
        assert_eq!(ex, BTreeSet::from([1, 2]));
    }

    #[test]
    fn theorem_map_has_all_periods() {
        let ps = periods_set(&theorem_map(), 10, None).unwrap();
        assert_eq!(ps, (1..=10).collect());
    }

    #[test]
    fn orbits() {
        let o = orbit_of(&example_one(4), &rat(3, 4), 10).unwrap();
        assert_eq!(o.period, 2);
        assert_eq!(o.diameter, rat(3, 2));
        assert_eq!(o.sorted_points(), vec![rat(-3, 4), rat(3, 4)]);
        let id = orbit_of(&PLLift::identity(), &rat(5, 7), 3).unwrap();
        assert_eq!((id.period, id.diameter), (1, int(0)));
        assert!(matches!(
            orbit_of(&PLLift::rotation(rat(1, 2)), &int(0), 5),
            Err(Error::NotPeriodic { .. })
        ));
    }

    #[test]
    fn mod1_rotations() {
        let half = PLLift::rotation(rat(1, 2));
        assert_eq!(
            mod1_rotation(&half, &int(0), 5).unwrap(),
            Mod1Rotation { n: 2, k: 1, rho: rat(1, 2) }
        );
        let third = PLLift::rotation(rat(2, 6));
        assert_eq!(
            mod1_rotation(&third, &rat(1, 4), 5).unwrap(),
            Mod1Rotation { n: 3, k: 1, rho: rat(1, 3) }
        );
        let r = mod1_rotation(&theorem_map(), &int(0), 5).unwrap();
        assert_eq!((r.n, r.k, r.rho), (2, 0, int(0)));
    }

    #[test]
    fn large_orbits() {
        let o = find_large_orbit(&theorem_map(), 5, None).unwrap().unwrap();
        assert_eq!(o.period, 2);
        assert_eq!(o.sorted_points(), vec![int(0), rat(6, 5)]);
        assert!(find_large_orbit(&PLLift::identity(), 5, None).unwrap().is_none());
        let e = find_large_orbit(&example_one(4), 4, Some(&window(-4, 4))).unwrap().unwrap();
        assert_eq!(e.sorted_points(), vec![rat(-3, 4), rat(3, 4)]);
    }

    #[test]
    fn periodic_windows() {
        assert_eq!(periodic_window(&example_one(4)), Some(Interval::new(rat(-3, 4), rat(3, 4))));
        assert_eq!(periodic_window(&neg()), None);
        assert_eq!(periodic_window(&PLLift::identity()), Some(window(0, 1)));
    }
}
