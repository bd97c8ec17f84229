use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pl_map::{make_lift, PLLift};
use crate::rational::{floor_int, int, rat, Rational};

/// Denominator of random coordinates.
const GRID: i64 = 24;

fn random_value(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    rat(rng.gen_range(lo * GRID..=hi * GRID), GRID)
}

/// A degree-`d` lifting on `[0, 1]` through the given `F(x) = y` constraints.
///
/// Constraints are reduced mod 1 with `F(x + k) = F(x) + d k`; `extra` adds
/// more anchors at other points of `(0, 1)`. Fails when two constraints
/// disagree after reduction.
pub fn interpolating_lift(
    degree: i64,
    constraints: &[(Rational, Rational)],
    extra: &[(Rational, Rational)],
) -> Result<PLLift> {
    let d = int(degree);
    let mut table: BTreeMap<Rational, Rational> = BTreeMap::new();
    for (x, y) in constraints {
        let k = Rational::from_integer(floor_int(x));
        let r = x - &k;
        let v = y - &d * &k;
        if let Some(old) = table.get(&r) {
            if old != &v {
                return Err(Error::InfeasiblePlant(format!(
                    "F({x}) = {y} conflicts with F({r}) = {old} under the degree relation"
                )));
            }
        }
        table.insert(r, v);
    }
    for (x, y) in extra {
        table.entry(x.clone()).or_insert_with(|| y.clone());
    }
    let zero = int(0);
    let f0 = table
        .get(&zero)
        .cloned()
        .ok_or_else(|| Error::InfeasiblePlant("no value at 0".into()))?;
    let mut anchors: Vec<(Rational, Rational)> = table.into_iter().collect();
    anchors.push((int(1), f0 + d));
    make_lift(anchors, degree)
}

/// Seeded random lifting of the given degree, optionally through a planted orbit.
///
/// `planted` lists orbit points in orbit order; the map sends each to the next
/// and the last to the first.
pub fn random_pl_lift(seed: u64, degree: i64, planted: Option<&[Rational]>) -> Result<PLLift> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut constraints = Vec::new();
    if let Some(points) = planted {
        if points.is_empty() {
            return Err(Error::InfeasiblePlant("empty orbit".into()));
        }
        let mut sorted = points.to_vec();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InfeasiblePlant("orbit points are not distinct".into()));
        }
        for (i, x) in points.iter().enumerate() {
            constraints.push((x.clone(), points[(i + 1) % points.len()].clone()));
        }
    }
    let d = int(degree);
    let mut extra = vec![(int(0), random_value(&mut rng, -1, 1) + int(0))];
    for _ in 0..rng.gen_range(1..=3) {
        let x = rat(rng.gen_range(1..GRID), GRID);
        let y = &d * &x + random_value(&mut rng, -1, 1);
        extra.push((x, y));
    }
    interpolating_lift(degree, &constraints, &extra)
}

/// Random orbit of the given period and diameter `> 1`, with pairwise distinct residues mod 1.
pub fn random_large_orbit(seed: u64, period: usize) -> Vec<Rational> {
    assert!(period >= 2, "a single point has diameter 0");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x005e_ed0f_0b17);
    loop {
        let mut residues: Vec<i64> = (1..GRID).collect();
        residues.shuffle(&mut rng);
        let mut pts: Vec<Rational> = residues[..period]
            .iter()
            .map(|&r| rat(r + GRID * rng.gen_range(0..=1), GRID))
            .collect();
        let (lo, hi) = (pts.iter().min().unwrap().clone(), pts.iter().max().unwrap().clone());
        if hi - lo > int(1) {
            pts.shuffle(&mut rng);
            return pts;
        }
    }
}

/// One fuzz case: seed, planted orbit and the resulting map.
#[derive(Clone, Debug)]
pub struct FuzzCase {
    pub seed: u64,
    pub planted: Vec<Rational>,
    pub map: PLLift,
}

/// Degree-`d` map with a planted large orbit of period `2..=max_period` drawn from `seed`.
pub fn planted_case(seed: u64, degree: i64, max_period: usize) -> FuzzCase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let period = rng.gen_range(2..=max_period.max(2));
    let planted = random_large_orbit(seed, period);
    let map = random_pl_lift(seed, degree, Some(&planted)).expect("residues are distinct");
    FuzzCase { seed, planted, map }
}
