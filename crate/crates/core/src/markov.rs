//! Interval partitions, covering graphs and loops.

use std::cell::Cell;
use std::collections::BTreeSet;
use std::fmt;
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::branch::{walk, DEFAULT_NODE_CAP};
use crate::error::{Error, Result};
use crate::periodic::Orbit;
use crate::pl_map::PLLift;
use crate::rational::{affine_fixed_point, int, Interval, Rational};

/// Default cap on the number of loops returned by [`simple_loops`].
pub const DEFAULT_LOOP_CAP: usize = 100_000;

/// Ordered closed intervals with disjoint interiors covering a compact interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    intervals: Vec<Interval>,
    labels: Vec<String>,
}

impl Partition {
    pub fn new(parts: Vec<(String, Interval)>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("no intervals".into()));
        }
        let mut seen = BTreeSet::new();
        for (label, iv) in &parts {
            if iv.is_degenerate() {
                return Err(Error::InvalidPartition(format!("{label} is a single point")));
            }
            if !seen.insert(label.clone()) {
                return Err(Error::InvalidPartition(format!("duplicate label {label}")));
            }
        }
        for w in parts.windows(2) {
            if w[0].1.hi != w[1].1.lo {
                return Err(Error::InvalidPartition(format!(
                    "{} ends at {} but {} starts at {}",
                    w[0].0, w[0].1.hi, w[1].0, w[1].1.lo
                )));
            }
        }
        let (labels, intervals) = parts.into_iter().unzip();
        Ok(Partition { intervals, labels })
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn interval(&self, i: usize) -> &Interval {
        &self.intervals[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn union(&self) -> Interval {
        Interval::new(self.intervals[0].lo.clone(), self.intervals[self.len() - 1].hi.clone())
    }

    pub fn endpoints(&self) -> Vec<Rational> {
        let mut pts: Vec<Rational> = self.intervals.iter().map(|i| i.lo.clone()).collect();
        pts.push(self.union().hi);
        pts
    }
}

/// Covering relation of a partition under `F`: an arrow `I -> J` iff `J ⊆ F(I)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverGraph {
    labels: Vec<String>,
    adjacency: Vec<Vec<bool>>,
}

impl CoverGraph {
    /// Builds a graph from explicit arrows between vertex indices.
    pub fn from_arrows(labels: Vec<String>, arrows: &[(usize, usize)]) -> Self {
        let n = labels.len();
        let mut adjacency = vec![vec![false; n]; n];
        for &(a, b) in arrows {
            adjacency[a][b] = true;
        }
        CoverGraph { labels, adjacency }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn has_arrow(&self, from: usize, to: usize) -> bool {
        self.adjacency[from][to]
    }

    /// Arrows in row-major order.
    pub fn arrows(&self) -> Vec<(usize, usize)> {
        let n = self.vertex_count();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.adjacency[i][j])
            .collect()
    }

    pub fn arrow_labels(&self) -> BTreeSet<(String, String)> {
        self.arrows()
            .into_iter()
            .map(|(i, j)| (self.labels[i].clone(), self.labels[j].clone()))
            .collect()
    }

    pub fn arrow_count(&self) -> usize {
        self.adjacency.iter().flatten().filter(|&&a| a).count()
    }

    /// 0/1 adjacency matrix.
    pub fn matrix(&self) -> Vec<Vec<u8>> {
        self.adjacency
            .iter()
            .map(|row| row.iter().map(|&a| a as u8).collect())
            .collect()
    }

    fn successors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v].iter().enumerate().filter(|(_, &a)| a).map(|(j, _)| j)
    }
}

impl fmt::Display for CoverGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, j) in self.arrows() {
            writeln!(f, "{} -> {}", self.labels[i], self.labels[j])?;
        }
        Ok(())
    }
}

/// A closed walk `v_0 -> v_1 -> ... -> v_{len-1} -> v_0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Loop {
    pub vertices: Vec<usize>,
}

impl Loop {
    pub fn new(vertices: Vec<usize>) -> Self {
        assert!(!vertices.is_empty(), "a loop visits at least one vertex");
        Loop { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_in(&self, g: &CoverGraph) -> bool {
        let n = self.len();
        (0..n).all(|i| g.has_arrow(self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// The rotation that is lexicographically smallest.
    pub fn canonical(&self) -> Loop {
        let n = self.len();
        (0..n)
            .map(|r| Loop::new((0..n).map(|i| self.vertices[(i + r) % n]).collect()))
            .min()
            .expect("nonempty")
    }

    /// Not a repetition of a shorter loop.
    pub fn is_primitive(&self) -> bool {
        let n = self.len();
        (1..n)
            .filter(|d| n.is_multiple_of(*d))
            .all(|d| (0..n).any(|i| self.vertices[i] != self.vertices[i % d]))
    }

    /// The rotation starting at the first visit to `v`, if any.
    pub fn starting_at(&self, v: usize) -> Option<Loop> {
        let r = self.vertices.iter().position(|&u| u == v)?;
        let n = self.len();
        Some(Loop::new((0..n).map(|i| self.vertices[(i + r) % n]).collect()))
    }

    pub fn display_with(&self, labels: &[String]) -> String {
        let mut parts: Vec<&str> = self.vertices.iter().map(|&v| labels[v].as_str()).collect();
        parts.push(labels[self.vertices[0]].as_str());
        parts.join(" -> ")
    }
}

/// `J ⊆ F(I)`, decided exactly.
pub fn covers(f: &PLLift, i: &Interval, j: &Interval) -> bool {
    f.image(i).contains_interval(j)
}

pub fn covering_graph(f: &PLLift, partition: &Partition) -> CoverGraph {
    let n = partition.len();
    let mut adjacency = vec![vec![false; n]; n];
    for (a, iv) in partition.intervals().iter().enumerate() {
        let image = f.image(iv);
        for (b, jv) in partition.intervals().iter().enumerate() {
            adjacency[a][b] = image.contains_interval(jv);
        }
    }
    CoverGraph {
        labels: partition.labels().to_vec(),
        adjacency,
    }
}

/// The endpoint set maps into itself and `F` is monotone on every interval.
pub fn is_markov(f: &PLLift, partition: &Partition) -> bool {
    let endpoints = partition.endpoints();
    if !endpoints.iter().all(|e| endpoints.contains(&f.eval(e))) {
        return false;
    }
    partition.intervals().iter().all(|iv| {
        let mut ys = vec![f.eval(&iv.lo)];
        f.try_for_each_breakpoint(&iv.lo, &iv.hi, usize::MAX / 4, |_, y| ys.push(y))
            .expect("bounded interval");
        ys.push(f.eval(&iv.hi));
        ys.windows(2).all(|w| w[0] <= w[1]) || ys.windows(2).all(|w| w[0] >= w[1])
    })
}

/// Traces of `A^1, ..., A^n`.
fn traces(g: &CoverGraph, n: usize) -> Vec<BigInt> {
    let v = g.vertex_count();
    let a: Vec<Vec<BigInt>> = g
        .adjacency
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x as u8)).collect())
        .collect();
    let mut power = a.clone();
    let mut out = Vec::with_capacity(n);
    for step in 1..=n {
        if step > 1 {
            let mut next = vec![vec![BigInt::zero(); v]; v];
            for i in 0..v {
                for k in 0..v {
                    if power[i][k].is_zero() {
                        continue;
                    }
                    for j in 0..v {
                        if g.adjacency[k][j] {
                            next[i][j] += &power[i][k];
                        }
                    }
                }
            }
            power = next;
        }
        out.push((0..v).map(|i| power[i][i].clone()).sum());
    }
    out
}

fn mobius(mut n: usize) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Number of rooted closed walks of length `n`, i.e. `trace(A^n)`.
pub fn closed_walk_count(g: &CoverGraph, n: usize) -> BigInt {
    traces(g, n).pop().unwrap_or_default()
}

/// Number of rooted closed walks of length `n` that are not repetitions of a
/// shorter loop: `sum over d | n of mu(n/d) trace(A^d)`.
pub fn loop_count(g: &CoverGraph, n: usize) -> BigInt {
    if n == 0 {
        return BigInt::zero();
    }
    let tr = traces(g, n);
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| BigInt::from(mobius(n / d)) * &tr[d - 1])
        .sum()
}

/// Loops of length `<= max_len` that are not repetitions of shorter loops,
/// each reported once up to rotation (as its smallest rotation), sorted by length.
pub fn simple_loops(g: &CoverGraph, max_len: usize) -> Result<Vec<Loop>> {
    simple_loops_with_cap(g, max_len, DEFAULT_LOOP_CAP)
}

pub fn simple_loops_with_cap(g: &CoverGraph, max_len: usize, cap: usize) -> Result<Vec<Loop>> {
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(max_len);
    for start in 0..g.vertex_count() {
        path.clear();
        path.push(start);
        extend_loops(g, start, max_len, cap, &mut path, &mut out)?;
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

fn extend_loops(
    g: &CoverGraph,
    start: usize,
    max_len: usize,
    cap: usize,
    path: &mut Vec<usize>,
    out: &mut Vec<Loop>,
) -> Result<()> {
    let last = *path.last().expect("path starts at the root");
    if g.has_arrow(last, start) {
        let candidate = Loop::new(path.clone());
        // Smallest rotation, strictly: exactly one representative per primitive class.
        if candidate.is_primitive() && candidate.canonical() == candidate {
            if out.len() >= cap {
                return Err(Error::LoopCap(cap));
            }
            out.push(candidate);
        }
    }
    if path.len() == max_len {
        return Ok(());
    }
    let next: Vec<usize> = g.successors(last).filter(|&v| v >= start).collect();
    for v in next {
        path.push(v);
        extend_loops(g, start, max_len, cap, path, out)?;
        path.pop();
    }
    Ok(())
}

/// `{n <= n_max : loop_count(G, n) = 0}`.
pub fn excluded_periods(g: &CoverGraph, n_max: usize) -> BTreeSet<usize> {
    (1..=n_max).filter(|&n| loop_count(g, n).is_zero()).collect()
}

/// A point `x` with `F^len(x) = x` whose itinerary follows the loop:
/// `F^i(x)` lies in the interval of `v_{i mod len}`.
pub fn periodic_point_from_loop(f: &PLLift, partition: &Partition, lp: &Loop) -> Result<Rational> {
    let len = lp.len();
    let target = |i: usize| partition.interval(lp.vertices[i % len]).clone();
    let deepest = Cell::new(0usize);
    let mut found: Option<Rational> = None;
    walk(
        f,
        target(0),
        len,
        DEFAULT_NODE_CAP,
        |depth| Some(target(depth)),
        |b| {
            deepest.set(deepest.get().max(b.depth));
            let mut z = b.image();
            for step in b.depth..len {
                z = match f.image(&z).intersect(&target(step + 1)) {
                    Some(z) => z,
                    None => return true,
                };
            }
            z.intersect(&b.x).is_none()
        },
        |b| {
            deepest.set(len);
            let zero = Rational::zero();
            let x = if b.x.is_degenerate() {
                (b.apply(&b.x.lo) == b.x.lo).then(|| b.x.lo.clone())
            } else {
                match affine_fixed_point(&b.slope, &b.offset, &zero) {
                    Some(x) => b.x.contains(&x).then_some(x),
                    None => b.offset.is_zero().then(|| b.x.midpoint()),
                }
            };
            match x {
                Some(x) => {
                    found = Some(x);
                    ControlFlow::Break(())
                }
                None => ControlFlow::Continue(()),
            }
        },
    )?;
    found.ok_or(Error::LoopPullback { step: deepest.get() })
}

/// Intervals `I = [r, s]`, `J = [s, F(r)]` with `F(I) ⊇ I ∪ J` and `F(J) ⊇ I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Horseshoe {
    pub i: Interval,
    pub j: Interval,
    /// `r = F^m(min P + 1)`.
    pub r: Rational,
    pub m: usize,
    pub s: Rational,
}

impl Horseshoe {
    pub fn partition(&self) -> Partition {
        Partition::new(vec![("I".into(), self.i.clone()), ("J".into(), self.j.clone())])
            .expect("I and J share the endpoint s")
    }

    /// `I -> I` for period 1, otherwise `J -> I -> ... -> I` with `period - 1` copies of `I`.
    pub fn loop_for_period(&self, period: usize) -> Loop {
        assert!(period >= 1);
        if period == 1 {
            Loop::new(vec![0])
        } else {
            let mut v = vec![1];
            v.extend(std::iter::repeat_n(0, period - 1));
            Loop::new(v)
        }
    }
}

/// Maximum number of iterates of `min P + 1` followed before giving up.
const ESCAPE_LIMIT: usize = 100_000;

/// Builds the horseshoe pair from a true periodic orbit of diameter `> 1`
/// for a lifting of degree `>= 2`.
///
/// The iterates of `p + 1` (`p = min P`) stay above `p` and tend to
/// infinity. `r` is the last of them inside `(p, q)` (`q = max P`), and `s`
/// is a point of `P` in `(r, q]` with `F(s) < r`. Any failure of these steps is
/// reported as [`Error::ProofStep`].
pub fn find_horseshoe(f: &PLLift, orbit: &Orbit) -> Result<Horseshoe> {
    let d = f.degree();
    if d < 2 {
        return Err(Error::Precondition(format!("degree must be at least 2, got {d}")));
    }
    if !orbit.is_orbit_of(f) {
        return Err(Error::Precondition("not a periodic orbit of the map".into()));
    }
    let one = Rational::one();
    if orbit.diameter <= one {
        return Err(Error::Precondition(format!("orbit diameter {} is not larger than 1", orbit.diameter)));
    }
    let p = orbit.min().clone();
    let q = orbit.max().clone();
    // F(x) >= d x + c everywhere, so past `escape` the iterates increase forever.
    let dr = int(d);
    let c = f.anchors().iter().map(|(x, y)| y - &dr * x).min().expect("nonempty");
    let threshold = -c / int(d - 1);
    let escape = if threshold > q { threshold } else { q.clone() };

    let mut seq = vec![&p + &one];
    while seq.last().expect("nonempty") <= &escape {
        if seq.len() > ESCAPE_LIMIT {
            return Err(Error::ProofStep(format!(
                "iterates of min P + 1 did not pass {escape} within {ESCAPE_LIMIT} steps"
            )));
        }
        let y = f.eval(seq.last().expect("nonempty"));
        if y <= p {
            return Err(Error::ProofStep(format!("an iterate of min P + 1 fell to {y} <= min P")));
        }
        if y == q {
            return Err(Error::ProofStep("an iterate of min P + 1 hit max P".into()));
        }
        seq.push(y);
    }
    let m = seq
        .iter()
        .rposition(|y| y < &q)
        .ok_or_else(|| Error::ProofStep("no iterate of min P + 1 below max P".into()))?;
    let r = seq[m].clone();
    let fr = seq[m + 1].clone();
    let s = orbit
        .sorted_points()
        .into_iter()
        .find(|s| s > &r && f.eval(s) < r)
        .ok_or_else(|| Error::ProofStep(format!("no s in P with s > r = {r} and F(s) < r")))?;
    let i = Interval::new(r.clone(), s.clone());
    let j = Interval::new(s.clone(), fr);
    for (name, from, to) in [("F(I) ⊇ I", &i, &i), ("F(I) ⊇ J", &i, &j), ("F(J) ⊇ I", &j, &i)] {
        if !covers(f, from, to) {
            return Err(Error::ProofStep(format!("covering {name} fails for I = {i}, J = {j}")));
        }
    }
    Ok(Horseshoe { i, j, r, m, s })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periodic::{least_period, orbit_of};
    use crate::pl_map::make_lift;
    use crate::rational::rat;

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn halves() -> Partition {
        Partition::new(vec![
            ("I".into(), Interval::new(int(0), rat(1, 2))),
            ("J".into(), Interval::new(rat(1, 2), int(1))),
        ])
        .unwrap()
    }

    fn degree_two() -> PLLift {
        make_lift(vec![(int(0), rat(3, 2)), (rat(1, 2), int(-2)), (int(1), rat(7, 2))], 2).unwrap()
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(vec![]).is_err());
        assert!(Partition::new(vec![("A".into(), Interval::point(int(0)))]).is_err());
        assert!(Partition::new(vec![
            ("A".into(), Interval::new(int(0), int(1))),
            ("B".into(), Interval::new(int(2), int(3))),
        ])
        .is_err());
        assert!(Partition::new(vec![
            ("A".into(), Interval::new(int(0), int(1))),
            ("A".into(), Interval::new(int(1), int(2))),
        ])
        .is_err());
    }

    #[test]
    fn identity_graph() {
        let g = covering_graph(&PLLift::identity(), &halves());
        assert_eq!(g.arrows(), vec![(0, 0), (1, 1)]);
        assert_eq!(g.to_string(), "I -> I\nJ -> J\n");
        assert!(is_markov(&PLLift::identity(), &halves()));
    }

    #[test]
    fn tent_like_graph() {
        // F([0,1/2]) = [0,1], F([1/2,1]) = [1/2, 1]
        let f = make_lift(vec![(int(0), int(0)), (rat(1, 2), int(1)), (rat(3, 4), rat(1, 2)), (int(1), int(1))], 1)
            .unwrap();
        let g = covering_graph(&f, &halves());
        assert!(g.has_arrow(0, 0) && g.has_arrow(0, 1));
        assert!(g.has_arrow(1, 1) && !g.has_arrow(1, 0));
    }

    #[test]
    fn covers_basic() {
        let id = PLLift::identity();
        let unit = Interval::new(int(0), int(1));
        assert!(covers(&id, &unit, &unit));
        assert!(!covers(&id, &Interval::new(int(0), rat(1, 2)), &Interval::new(rat(1, 2), int(1))));
    }

    #[test]
    fn loop_counts() {
        let single = CoverGraph::from_arrows(labels(&["A"]), &[(0, 0)]);
        assert_eq!(loop_count(&single, 1), BigInt::from(1));
        assert_eq!(closed_walk_count(&single, 5), BigInt::from(1));
        assert_eq!(loop_count(&single, 5), BigInt::zero());
        let full = CoverGraph::from_arrows(labels(&["A", "B"]), &[(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert!(excluded_periods(&full, 5).is_empty());
        // primitive binary necklaces of length n times n
        assert_eq!(loop_count(&full, 4), BigInt::from(12));
    }

    #[test]
    fn simple_loop_enumeration() {
        let single = CoverGraph::from_arrows(labels(&["A"]), &[(0, 0)]);
        assert_eq!(simple_loops(&single, 3).unwrap(), vec![Loop::new(vec![0])]);
        let two = CoverGraph::from_arrows(labels(&["A", "B"]), &[(0, 1), (1, 0)]);
        assert_eq!(simple_loops(&two, 4).unwrap(), vec![Loop::new(vec![0, 1])]);
        let full = CoverGraph::from_arrows(labels(&["A", "B"]), &[(0, 0), (0, 1), (1, 0), (1, 1)]);
        // binary Lyndon words of length <= 4: 2 + 1 + 2 + 3
        assert_eq!(simple_loops(&full, 4).unwrap().len(), 8);
        assert!(matches!(simple_loops_with_cap(&full, 4, 3), Err(Error::LoopCap(3))));
    }

    #[test]
    fn loop_helpers() {
        let lp = Loop::new(vec![2, 0, 1]);
        assert_eq!(lp.canonical(), Loop::new(vec![0, 1, 2]));
        assert!(lp.is_primitive());
        assert!(!Loop::new(vec![0, 1, 0, 1]).is_primitive());
        assert_eq!(lp.display_with(&labels(&["a", "b", "c"])), "c -> a -> b -> c");
    }

    #[test]
    fn fixed_point_from_identity_loop() {
        let p = Partition::new(vec![("I".into(), Interval::new(int(0), int(1)))]).unwrap();
        let x = periodic_point_from_loop(&PLLift::identity(), &p, &Loop::new(vec![0])).unwrap();
        assert_eq!(PLLift::identity().eval(&x), x);
    }

    #[test]
    fn horseshoe_for_degree_two() {
        let f = degree_two();
        let orbit = orbit_of(&f, &int(0), 5).unwrap();
        assert_eq!(orbit.sorted_points(), vec![int(0), rat(3, 2)]);
        let h = find_horseshoe(&f, &orbit).unwrap();
        assert!(covers(&f, &h.i, &h.i) && covers(&f, &h.i, &h.j) && covers(&f, &h.j, &h.i));
        let part = h.partition();
        for period in 1..=8 {
            let x = periodic_point_from_loop(&f, &part, &h.loop_for_period(period)).unwrap();
            assert_eq!(f.iterate(&x, period), x);
            assert_eq!(least_period(&f, &x, period), period);
        }
    }

    #[test]
    fn horseshoe_preconditions() {
        let doubling = make_lift(vec![(int(0), int(0)), (int(1), int(2))], 2).unwrap();
        let fixed = orbit_of(&doubling, &int(0), 1).unwrap();
        assert!(matches!(find_horseshoe(&doubling, &fixed), Err(Error::Precondition(_))));
        let rot = PLLift::rotation(int(0));
        let o = orbit_of(&rot, &int(0), 1).unwrap();
        assert!(matches!(find_horseshoe(&rot, &o), Err(Error::Precondition(_))));
    }

    #[test]
    fn pullback_failure_reports_step() {
        // x + 1/2 moves [0, 1/4] off itself, so I -> I cannot be followed.
        let part = Partition::new(vec![
            ("I".into(), Interval::new(int(0), rat(1, 4))),
            ("J".into(), Interval::new(rat(1, 4), int(1))),
        ])
        .unwrap();
        let err = periodic_point_from_loop(&PLLift::rotation(rat(1, 2)), &part, &Loop::new(vec![0])).unwrap_err();
        assert!(matches!(err, Error::LoopPullback { .. }));
    }
}
