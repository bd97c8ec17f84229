use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::markov::{CoverGraph, Loop, Partition};
use crate::periodic::Orbit;
use crate::pl_map::{make_lift, PLLift};
use crate::rational::{int, rat, Interval, Rational};

/// Odd lifting of degree `-d` whose only periodic points are `-3/4, 0, 3/4`.
///
/// Anchors `(0, 0), (1/4, 3/4 - d), (3/4, -3/4), (1, -d)`.
pub fn example_negative_degree(d: i64) -> Result<PLLift> {
    if d < 2 {
        return Err(Error::Precondition(format!("d must be at least 2, got {d}")));
    }
    make_lift(
        vec![
            (int(0), int(0)),
            (rat(1, 4), rat(3, 4) - int(d)),
            (rat(3, 4), rat(-3, 4)),
            (int(1), int(-d)),
        ],
        -d,
    )
}

/// Names of the points of the degree-zero example.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Pt {
    X(usize),
    Z(usize),
    /// `z_0 - 1`
    Z0Left,
    /// `x_0 + 1`
    X0Right,
}

/// Left-to-right order `x_0 < z_0-1 < x_p < z_{p-1} < x_{p-2} < ... < x_1 < z_1 < x_2 < ... < z_p < x_0+1 < z_0`.
fn chain(p: usize) -> Vec<Pt> {
    let mut c = vec![Pt::X(0), Pt::Z0Left];
    let mut i = p;
    while i >= 3 {
        c.push(Pt::X(i));
        c.push(Pt::Z(i - 1));
        i -= 2;
    }
    c.push(Pt::X(1));
    for i in 1..=p {
        c.push(if i % 2 == 1 { Pt::Z(i) } else { Pt::X(i) });
    }
    c.push(Pt::X0Right);
    c.push(Pt::Z(0));
    c
}

fn label_between(a: Pt, b: Pt, p: usize) -> String {
    use Pt::*;
    let key = |u: Pt, v: Pt| match (u, v) {
        (X(1), Z(1)) => Some("I_0".to_string()),
        (Z0Left, X(i)) if i == p => Some(format!("I_{p}")),
        (Z(i), X0Right) if i == p => Some(format!("J_{p}")),
        (X(0), Z0Left) => Some(format!("I'_{p}")),
        (X0Right, Z(0)) => Some(format!("J'_{p}")),
        (X(i), Z(j)) if j == i + 1 && i >= 1 => Some(format!("I_{i}")),
        (Z(i), X(j)) if j == i + 1 && i >= 1 => Some(format!("J_{i}")),
        _ => None,
    };
    key(a, b).or_else(|| key(b, a)).expect("consecutive chain points bound a named interval")
}

/// The degree-zero example with its orbit and partition.
#[derive(Clone, Debug)]
pub struct ExampleZero {
    pub p: usize,
    pub map: PLLift,
    /// `x_0, x_1, ..., x_p, z_0, z_1, ..., z_p`.
    pub orbit: Orbit,
    pub partition: Partition,
}

impl ExampleZero {
    pub fn x0(&self) -> &Rational {
        &self.orbit.points[0]
    }

    pub fn z0(&self) -> &Rational {
        &self.orbit.points[self.p + 1]
    }

    /// `[x_0, z_0]`, the range of the map.
    pub fn hull(&self) -> Interval {
        Interval::new(self.x0().clone(), self.z0().clone())
    }
}

/// Number of orbit coordinates expected by [`example_degree_zero`].
pub fn example_zero_coordinate_count(p: usize) -> usize {
    2 * p + 2
}

/// Builds the degree-zero example for odd `p >= 3`.
///
/// `coordinates` lists the `2p + 2` orbit points in left-to-right order
/// (`x_0, x_p, z_{p-1}, ..., z_p, z_0`); `z_0 - 1` and `x_0 + 1` are derived.
/// By default `x_0 = 0` and all `2p + 4` points are equally spaced.
pub fn example_degree_zero(p: usize, coordinates: Option<&[Rational]>) -> Result<ExampleZero> {
    if p < 3 || p.is_multiple_of(2) {
        return Err(Error::Precondition(format!("p must be odd and at least 3, got {p}")));
    }
    let order = chain(p);
    let values: Vec<Rational> = match coordinates {
        None => {
            let h = rat(1, 2 * p as i64 + 2);
            (0..order.len()).map(|k| &h * int(k as i64)).collect()
        }
        Some(c) => {
            if c.len() != example_zero_coordinate_count(p) {
                return Err(Error::Precondition(format!(
                    "expected {} coordinates, got {}",
                    example_zero_coordinate_count(p),
                    c.len()
                )));
            }
            let x0 = c[0].clone();
            let z0 = c[c.len() - 1].clone();
            let mut v = vec![x0.clone(), &z0 - int(1)];
            v.extend(c[1..c.len() - 1].iter().cloned());
            v.push(x0 + int(1));
            v.push(z0);
            v
        }
    };
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("coordinates violate the required ordering".into()));
    }
    let pos = |pt: Pt| &values[order.iter().position(|&q| q == pt).expect("point in chain")];
    let image = |pt: Pt| -> Pt {
        match pt {
            Pt::X(i) if i < p => Pt::X(i + 1),
            Pt::X(_) => Pt::Z(0),
            Pt::Z(i) if i < p => Pt::Z(i + 1),
            Pt::Z(_) => Pt::X(0),
            Pt::Z0Left => Pt::Z(1),
            Pt::X0Right => Pt::X(1),
        }
    };
    // The fundamental domain [x_0, x_0 + 1] holds every chain point but z_0.
    let anchors: Vec<(Rational, Rational)> = order[..order.len() - 1]
        .iter()
        .map(|&pt| (pos(pt).clone(), pos(image(pt)).clone()))
        .collect();
    let map = make_lift(anchors, 0)?;

    let mut points: Vec<Rational> = (0..=p).map(|i| pos(Pt::X(i)).clone()).collect();
    points.extend((0..=p).map(|i| pos(Pt::Z(i)).clone()));
    let diameter = pos(Pt::Z(0)) - pos(Pt::X(0));
    let orbit = Orbit {
        period: 2 * p + 2,
        diameter,
        points,
    };

    let parts = order
        .windows(2)
        .zip(values.windows(2))
        .map(|(w, v)| (label_between(w[0], w[1], p), Interval::new(v[0].clone(), v[1].clone())))
        .collect();
    let partition = Partition::new(parts)?;
    Ok(ExampleZero {
        p,
        map,
        orbit,
        partition,
    })
}

fn i_(i: usize) -> String {
    format!("I_{i}")
}

fn j_(i: usize) -> String {
    format!("J_{i}")
}

/// The expected covering relation of the degree-zero example, as label pairs.
pub fn example_zero_arrows(p: usize) -> BTreeSet<(String, String)> {
    let ip = format!("I'_{p}");
    let jp = format!("J'_{p}");
    let mut arrows = vec![(i_(0), i_(0))];
    for (x, xp) in [(i_ as fn(usize) -> String, &ip), (j_ as fn(usize) -> String, &jp)] {
        arrows.push((i_(0), x(1)));
        for i in 1..p - 1 {
            arrows.push((x(i), x(i + 1)));
        }
        arrows.push((x(p - 1), xp.clone()));
        arrows.push((x(p - 1), x(p)));
        arrows.push((xp.clone(), i_(0)));
    }
    for k in 1..=p {
        if k % 2 == 1 {
            arrows.push((i_(p), j_(k)));
            arrows.push((j_(p), i_(k)));
        } else {
            arrows.push((i_(p), i_(k)));
            arrows.push((j_(p), j_(k)));
        }
    }
    arrows.push((i_(p), jp));
    arrows.push((j_(p), ip));
    arrows.into_iter().collect()
}

/// The four shortest odd loops of the degree-zero example, each of length `p + 2`.
pub fn example_zero_odd_loops(p: usize) -> Vec<Vec<String>> {
    let ip = format!("I'_{p}");
    let jp = format!("J'_{p}");
    let run = |x: fn(usize) -> String| -> Vec<String> {
        std::iter::once(i_(0)).chain((1..p).map(x)).collect()
    };
    let mut loops = Vec::new();
    let mut a = run(i_);
    a.extend([ip.clone(), i_(0)]);
    loops.push(a);
    let mut b = run(i_);
    b.extend([i_(p), jp.clone()]);
    loops.push(b);
    let mut c = run(j_);
    c.extend([jp, i_(0)]);
    loops.push(c);
    let mut d = run(j_);
    d.extend([j_(p), ip]);
    loops.push(d);
    loops
}

/// Label sequence as a loop of `g`, if every label is a vertex.
pub fn loop_from_labels(g: &CoverGraph, labels: &[String]) -> Option<Loop> {
    let idx: Option<Vec<usize>> = labels
        .iter()
        .map(|l| g.labels().iter().position(|m| m == l))
        .collect();
    idx.filter(|v| !v.is_empty()).map(Loop::new)
}
