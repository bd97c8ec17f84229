use std::collections::BTreeSet;
use std::fmt::Display;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::markov::{
    covering_graph, covers, excluded_periods, find_horseshoe, is_markov, loop_count, periodic_point_from_loop,
    simple_loops,
};
use crate::periodic::{find_large_orbit, least_period, orbit_of, periodic_window, period_witnesses, solve_periodic, Orbit};
use crate::pl_map::PLLift;
use crate::rational::{int, rat, Interval, Rational};
use crate::rotation::{forced_periods, rotation_interval};

use super::examples::{example_degree_zero, example_negative_degree, example_zero_arrows, example_zero_odd_loops, loop_from_labels};
use super::fuzz::planted_case;
use super::report::{Status, VerificationReport};
use super::sharkovskii::is_sharkovskii_tail;

/// Denominator bound used for rotation intervals inside the verifiers.
pub const THEOREM_DENOMINATOR_BOUND: u64 = 100;
/// Periods checked by default.
pub const DEFAULT_PERIOD_MAX: usize = 10;

fn join<T: Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn set_text<T: Display>(items: impl IntoIterator<Item = T>) -> String {
    format!("{{{}}}", join(items))
}

fn require_degree(f: &PLLift, ok: bool, expected: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Degree {
            expected,
            found: f.degree(),
        })
    }
}

/// Rotation interval contains `[-1/n, 1/n]`, every period up to `n_max` is
/// forced by it, and every period up to `n_max` is realized.
fn check_rotation_and_periods(report: &mut VerificationReport, f: &PLLift, n: usize, n_max: usize) -> Result<()> {
    let a = rat(-1, n as i64);
    let b = rat(1, n as i64);
    let ri = rotation_interval(f, THEOREM_DENOMINATOR_BOUND)?;
    let status = if ri.contains_interval(&a, &b) {
        Status::Pass
    } else if ri.left.lower() > &a || ri.right.upper() < &b {
        Status::Fail
    } else {
        Status::Inconclusive
    };
    report.check(format!("rotation interval contains [{a}, {b}]"), status, ri.to_string());
    let forced = forced_periods(&a, &b, n_max);
    report.check(
        "forced periods",
        Status::from_bool(forced.len() == n_max),
        format!("forced by [{a}, {b}]: {}", set_text(&forced)),
    );
    let witnesses = period_witnesses(f, n_max, None)?;
    let missing: Vec<usize> = (1..=n_max).filter(|n| !witnesses.contains_key(n)).collect();
    let witness = if missing.is_empty() {
        join(witnesses.iter().map(|(n, x)| format!("{n}:{x}")))
    } else {
        format!("missing {}", set_text(&missing))
    };
    report.check(format!("all periods up to {n_max}"), Status::from_bool(missing.is_empty()), witness);
    report.fact("periods", set_text(witnesses.keys()));
    Ok(())
}

/// Degree one: a large orbit of period `n` forces `[-1/n, 1/n]` into the
/// rotation interval and periodic points of every period.
pub fn verify_theorem_d1(f: &PLLift, n_max: usize) -> Result<VerificationReport> {
    require_degree(f, f.degree() == 1, "1")?;
    let mut report = VerificationReport::new("large orbit theorem, degree 1");
    let Some(orbit) = find_large_orbit(f, n_max, None)? else {
        report.check("large orbit", Status::Inconclusive, format!("none of period <= {n_max}"));
        return Ok(report);
    };
    report.check("large orbit", Status::from_bool(orbit.is_orbit_of(f)), orbit.to_string());
    check_rotation_and_periods(&mut report, f, orbit.period, n_max)?;
    Ok(report)
}

/// Degree at least two: a large orbit yields a horseshoe and periodic points
/// of every period `1..=n_max` along its loops.
pub fn verify_theorem_dge2(f: &PLLift, n_max: usize, window: Option<&Interval>) -> Result<VerificationReport> {
    require_degree(f, f.degree() >= 2, ">= 2")?;
    let window = match window {
        Some(w) => w.clone(),
        None => periodic_window(f).expect("degree >= 2 has a bounded window"),
    };
    let mut report = VerificationReport::new(format!("large orbit theorem, degree {}", f.degree()));
    let Some(orbit) = find_large_orbit(f, n_max, Some(&window))? else {
        report.check("large orbit", Status::Inconclusive, format!("none of period <= {n_max} in {window}"));
        return Ok(report);
    };
    report.check("large orbit", Status::from_bool(orbit.is_orbit_of(f)), orbit.to_string());
    let h = match find_horseshoe(f, &orbit) {
        Ok(h) => h,
        Err(e) => {
            report.check("horseshoe", Status::Fail, e.to_string());
            return Ok(report);
        }
    };
    report.check(
        "horseshoe",
        Status::Pass,
        format!("r = F^{}(min P + 1) = {}, s = {}, I = {}, J = {}", h.m, h.r, h.s, h.i, h.j),
    );
    for (name, from, to) in [("F(I) contains I", &h.i, &h.i), ("F(I) contains J", &h.i, &h.j), ("F(J) contains I", &h.j, &h.i)] {
        report.check(name, Status::from_bool(covers(f, from, to)), format!("F({from}) = {}", f.image(from)));
    }
    let partition = h.partition();
    let results: Vec<std::result::Result<Rational, String>> = (1..=n_max)
        .into_par_iter()
        .map(|l| {
            let x = periodic_point_from_loop(f, &partition, &h.loop_for_period(l)).map_err(|e| e.to_string())?;
            if f.iterate(&x, l) == x && least_period(f, &x, l) == l {
                Ok(x)
            } else {
                Err(format!("{x} does not have least period {l}"))
            }
        })
        .collect();
    let bad: Vec<String> = results
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.as_ref().err().map(|e| format!("{}: {e}", i + 1)))
        .collect();
    let witness = if bad.is_empty() {
        join(results.iter().enumerate().map(|(i, r)| format!("{}:{}", i + 1, r.as_ref().unwrap())))
    } else {
        bad.join("; ")
    };
    report.check(format!("all periods up to {n_max}"), Status::from_bool(bad.is_empty()), witness);
    Ok(report)
}

/// Degree one: orbits whose hulls chain together into a set of diameter `> 1`
/// act like a single large orbit of period `n = sum of periods`.
pub fn verify_chained_remark(f: &PLLift, orbits: &[Orbit], n_max: usize) -> Result<VerificationReport> {
    require_degree(f, f.degree() == 1, "1")?;
    if orbits.is_empty() {
        return Err(Error::Precondition("no orbits given".into()));
    }
    for o in orbits {
        if !o.is_orbit_of(f) {
            return Err(Error::Precondition(format!("not a periodic orbit of the map: {o}")));
        }
    }
    let mut report = VerificationReport::new("chained orbits, degree 1");
    let mut hulls: Vec<Interval> = orbits.iter().map(Orbit::hull).collect();
    hulls.sort_by(|a, b| a.lo.cmp(&b.lo));
    let mut reach = hulls[0].hi.clone();
    let mut connected = true;
    for h in &hulls[1..] {
        if h.lo > reach {
            connected = false;
        }
        if h.hi > reach {
            reach = h.hi.clone();
        }
    }
    let union = Interval::new(hulls[0].lo.clone(), reach);
    let hull_text = join(hulls.iter());
    if !connected {
        report.check("connected hulls", Status::Inconclusive, hull_text);
        return Ok(report);
    }
    report.check("connected hulls", Status::Pass, hull_text);
    if union.width() <= Rational::one() {
        report.check("diameter", Status::Inconclusive, format!("{} <= 1", union.width()));
        return Ok(report);
    }
    report.check("diameter", Status::Pass, format!("{} > 1", union.width()));
    let n: usize = orbits.iter().map(|o| o.period).sum();
    report.fact("n", n.to_string());
    check_rotation_and_periods(&mut report, f, n, n_max)?;
    Ok(report)
}

/// The odd lifting of degree `-d` has a large orbit yet only periods 1 and 2.
pub fn verify_example_negative(d: i64, n_max: usize) -> Result<VerificationReport> {
    let f = example_negative_degree(d)?;
    let mut report = VerificationReport::new(format!("negative degree example, d = {d}"));
    report.check("odd", Status::from_bool(f.reflect() == f), f.to_string());

    // G(x) = F(x) + x is affine between breakpoints, so its sign pattern on [0, 1] is read off the anchors.
    let mut pts = vec![int(0)];
    pts.extend(f.anchors().iter().map(|(x, _)| x.clone()).filter(|x| x > &int(0) && x < &int(1)));
    pts.push(int(1));
    let g: Vec<Rational> = pts.iter().map(|x| f.eval(x) + x).collect();
    let max = g.iter().max().expect("nonempty").clone();
    let zeros: Vec<Rational> = pts.iter().zip(&g).filter(|(_, v)| v.is_zero()).map(|(x, _)| x.clone()).collect();
    let isolated = g.windows(2).all(|w| !(w[0].is_zero() && w[1].is_zero()));
    let expected_zeros = vec![int(0), rat(3, 4)];
    report.check(
        "F(x) + x <= 0 on [0, 1]",
        Status::from_bool(max <= Rational::zero() && isolated && zeros == expected_zeros),
        format!("max {max}, equality at {}", set_text(&zeros)),
    );

    let window = Interval::new(int(-4), int(4));
    let allowed: BTreeSet<Rational> = [rat(-3, 4), int(0), rat(3, 4)].into_iter().collect();
    let mut seen = BTreeSet::new();
    let mut segments = 0;
    for n in 1..=n_max {
        let sols = solve_periodic(&f, n, 0, Some(&window))?;
        segments += sols.segments.len();
        seen.extend(sols.isolated.iter().cloned());
    }
    report.check(
        format!("periodic points in {window} up to period {n_max}"),
        Status::from_bool(segments == 0 && seen == allowed),
        format!("{}, {segments} segments", set_text(&seen)),
    );

    let orbit = orbit_of(&f, &rat(3, 4), 2)?;
    report.check(
        "large orbit",
        Status::from_bool(orbit.period == 2 && orbit.diameter > Rational::one()),
        orbit.to_string(),
    );
    let periods: BTreeSet<usize> = period_witnesses(&f, n_max, Some(&window))?.into_keys().collect();
    report.check(
        "period 3 absent",
        Status::from_bool(n_max >= 3 && !periods.contains(&3)),
        format!("periods {}", set_text(&periods)),
    );
    report.fact("periods", set_text(&periods));
    Ok(report)
}

/// The degree-zero example has a large orbit of period `2p + 2` but no odd
/// periods `3..=p`, read off its Markov graph.
pub fn verify_example_zero(p: usize, n_max: usize) -> Result<VerificationReport> {
    verify_example_zero_with(p, n_max, None)
}

/// [`verify_example_zero`] with explicit orbit coordinates.
pub fn verify_example_zero_with(p: usize, n_max: usize, coordinates: Option<&[Rational]>) -> Result<VerificationReport> {
    let ex = example_degree_zero(p, coordinates)?;
    let f = &ex.map;
    let mut report = VerificationReport::new(format!("degree zero example, p = {p}"));
    let hull = ex.hull();
    let range = f.bounded_range().expect("degree 0");
    report.check("range", Status::from_bool(range == hull), format!("F(R) = {range}"));
    report.check(
        "large orbit",
        Status::from_bool(ex.orbit.is_orbit_of(f) && ex.orbit.period == 2 * p + 2 && ex.orbit.diameter > Rational::one()),
        ex.orbit.to_string(),
    );
    report.check("markov", Status::from_bool(is_markov(f, &ex.partition)), format!("{} intervals", ex.partition.len()));

    let g = covering_graph(f, &ex.partition);
    let got = g.arrow_labels();
    let want = example_zero_arrows(p);
    let witness = if got == want {
        format!("{} arrows", got.len())
    } else {
        let extra: Vec<String> = got.difference(&want).map(|(a, b)| format!("{a} -> {b}")).collect();
        let missing: Vec<String> = want.difference(&got).map(|(a, b)| format!("{a} -> {b}")).collect();
        format!("{} arrows; unexpected [{}]; missing [{}]", got.len(), extra.join(", "), missing.join(", "))
    };
    report.check("arrows", Status::from_bool(got == want), witness);

    let odd: Vec<usize> = (3..=p).step_by(2).collect();
    let counts: Vec<String> = odd.iter().map(|&n| format!("{n}:{}", loop_count(&g, n))).collect();
    report.check(
        "no loops of odd length 3..p",
        Status::from_bool(odd.iter().all(|&n| loop_count(&g, n).is_zero())),
        format!("excluded: {}", join(&odd)),
    );
    report.fact("loop counts", join(counts));
    report.fact("excluded periods", set_text(excluded_periods(&g, n_max)));

    let short: Vec<_> = simple_loops(&g, p + 2)?
        .into_iter()
        .filter(|l| l.len() > 1 && l.len() % 2 == 1)
        .collect();
    let expected: BTreeSet<_> = example_zero_odd_loops(p)
        .iter()
        .filter_map(|labels| loop_from_labels(&g, labels).map(|l| l.canonical()))
        .collect();
    let found: BTreeSet<_> = short.iter().cloned().collect();
    report.check(
        format!("four odd loops of length {}", p + 2),
        Status::from_bool(short.len() == 4 && expected.len() == 4 && found == expected),
        short
            .iter()
            .map(|l| {
                let start = g.labels().iter().position(|x| x == "I_0").and_then(|v| l.starting_at(v));
                start.unwrap_or_else(|| l.clone()).display_with(g.labels())
            })
            .collect::<Vec<_>>()
            .join("; "),
    );

    let periods: BTreeSet<usize> = period_witnesses(f, n_max, Some(&hull))?.into_keys().collect();
    let excludes = odd.iter().all(|n| !periods.contains(n));
    let has_ends = periods.contains(&1) && (2 * p + 2 > n_max || periods.contains(&(2 * p + 2)));
    let tail = is_sharkovskii_tail(&periods, n_max);
    report.check(
        format!("periods up to {n_max}"),
        Status::from_bool(excludes && has_ends && tail),
        format!("{} (sharkovskii tail: {tail})", set_text(&periods)),
    );
    report.fact("periods", set_text(&periods));
    Ok(report)
}

/// `verify_theorem_d1` on `count` seeded degree-one maps with planted large orbits.
pub fn fuzz_theorem_d1(seed: u64, count: usize, max_period: usize, n_max: usize) -> Vec<(u64, Result<VerificationReport>)> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i);
            let case = planted_case(s, 1, max_period);
            (s, verify_theorem_d1(&case.map, n_max))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pl_map::make_lift;

    fn theorem_map() -> PLLift {
        make_lift(vec![(int(0), rat(6, 5)), (rat(1, 5), int(-1)), (int(1), rat(11, 5))], 1).unwrap()
    }

    #[test]
    fn d1_theorem_map_passes() {
        let r = verify_theorem_d1(&theorem_map(), 10).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.fact_value("periods"), Some("{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}"));
    }

    #[test]
    fn d1_trivial_inconclusive() {
        assert_eq!(verify_theorem_d1(&PLLift::identity(), 5).unwrap().overall(), Status::Inconclusive);
        assert_eq!(verify_theorem_d1(&PLLift::rotation(rat(1, 2)), 5).unwrap().overall(), Status::Inconclusive);
        assert!(verify_theorem_d1(&example_negative_degree(2).unwrap(), 5).is_err());
    }

    #[test]
    fn dge2_cases() {
        let f = make_lift(vec![(int(0), rat(3, 2)), (rat(1, 2), int(-2)), (int(1), rat(7, 2))], 2).unwrap();
        let r = verify_theorem_dge2(&f, 8, None).unwrap();
        assert!(r.passed(), "{r}");
        let doubling = make_lift(vec![(int(0), int(0)), (int(1), int(2))], 2).unwrap();
        assert_eq!(verify_theorem_dge2(&doubling, 4, None).unwrap().overall(), Status::Inconclusive);
        assert!(verify_theorem_dge2(&theorem_map(), 4, None).is_err());
    }

    #[test]
    fn chained_orbits() {
        let f = crate::theorem::interpolating_lift(
            1,
            &[
                (int(0), rat(3, 5)),
                (rat(3, 5), int(0)),
                (rat(1, 2), rat(23, 20)),
                (rat(23, 20), rat(1, 2)),
            ],
            &[],
        )
        .unwrap();
        let a = orbit_of(&f, &int(0), 2).unwrap();
        let b = orbit_of(&f, &rat(1, 2), 2).unwrap();
        let r = verify_chained_remark(&f, &[a.clone(), b], 10).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.fact_value("n"), Some("4"));
        let c = orbit_of(&f, &rat(3, 20), 2).unwrap();
        let far = Orbit {
            points: c.points.iter().map(|x| x + int(3)).collect(),
            ..c
        };
        let r = verify_chained_remark(&f, &[a, far], 10).unwrap();
        assert_eq!(r.overall(), Status::Inconclusive);
    }

    #[test]
    fn negative_examples() {
        for d in 2..=5 {
            let r = verify_example_negative(d, 6).unwrap();
            assert!(r.passed(), "{r}");
            assert_eq!(r.fact_value("periods"), Some("{1, 2}"));
        }
    }

    #[test]
    fn zero_example_three() {
        let r = verify_example_zero(3, 10).unwrap();
        assert!(r.passed(), "{r}");
        assert!(r.to_string().contains("19 arrows"));
        assert!(r.to_string().contains("excluded: 3"));
    }

    #[test]
    fn fuzz_is_deterministic() {
        let a = fuzz_theorem_d1(7, 4, 5, 6);
        let b = fuzz_theorem_d1(7, 4, 5, 6);
        for ((sa, ra), (sb, rb)) in a.iter().zip(&b) {
            assert_eq!(sa, sb);
            assert_eq!(ra.as_ref().unwrap().to_string(), rb.as_ref().unwrap().to_string());
        }
    }
}
