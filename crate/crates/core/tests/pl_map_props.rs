mod common;

use circle_lift::format::{parse_map, serialize_map};
use circle_lift::rational::to_f64;
use circle_lift::{int, make_lift, rat, Interval, PLLift, Rational};
use common::FloatLift;
use proptest::prelude::*;

/// Anchors on `[0, 1]` at a random subset of eighths, values on a 1/16 grid.
fn lift(degree: i64) -> impl Strategy<Value = PLLift> {
    (prop::collection::vec(any::<bool>(), 7), prop::collection::vec(-24i64..=24, 8)).prop_map(move |(keep, ys)| {
        let mut anchors = vec![(int(0), rat(ys[0], 16))];
        for k in 1..8 {
            if keep[k - 1] {
                let x = rat(k as i64, 8);
                let y = &x * int(degree) + rat(ys[k], 16);
                anchors.push((x, y));
            }
        }
        anchors.push((int(1), rat(ys[0], 16) + int(degree)));
        make_lift(anchors, degree).unwrap()
    })
}

fn any_lift() -> impl Strategy<Value = PLLift> {
    (-2i64..=2).prop_flat_map(lift)
}

fn point() -> impl Strategy<Value = Rational> {
    (-200i64..=200).prop_map(|k| rat(k, 37))
}

proptest! {
    #[test]
    fn degree_relation(f in any_lift(), x in point(), k in -3i64..=3) {
        prop_assert_eq!(f.eval(&(&x + int(k))), f.eval(&x) + int(k * f.degree()));
    }

    #[test]
    fn float_oracle_agrees(f in any_lift(), x in point()) {
        let ff = FloatLift::new(&f);
        prop_assert!((ff.eval(to_f64(&x)) - to_f64(&f.eval(&x))).abs() < 1e-9);
    }

    #[test]
    fn compose_matches_evaluation(f in any_lift(), g in any_lift(), x in point()) {
        let fg = PLLift::compose(&f, &g).unwrap();
        prop_assert_eq!(fg.degree(), f.degree() * g.degree());
        prop_assert_eq!(fg.eval(&x), f.eval(&g.eval(&x)));
    }

    #[test]
    fn power_matches_iteration(f in lift(1), x in point(), n in 1usize..=3) {
        prop_assert_eq!(f.power(n).unwrap().eval(&x), f.iterate(&x, n));
    }

    #[test]
    fn image_is_tight(f in any_lift(), a in point(), w in 0i64..=60) {
        let b = &a + rat(w, 37);
        let iv = Interval::new(a.clone(), b.clone());
        let image = f.image(&iv);
        let mut lo = f.eval(&a).min(f.eval(&b));
        let mut hi = lo.clone();
        for i in 0..=50 {
            let y = f.eval(&(&a + (&b - &a) * rat(i, 50)));
            prop_assert!(image.contains(&y));
            lo = lo.min(y.clone());
            hi = hi.max(y);
        }
        // Every breakpoint sits on a multiple of 1/8, which the sample grid may miss; check those too.
        for k in -80..=80 {
            let x = rat(k, 8);
            if iv.contains(&x) {
                let y = f.eval(&x);
                lo = lo.min(y.clone());
                hi = hi.max(y);
            }
        }
        prop_assert_eq!(image, Interval::new(lo, hi));
    }

    #[test]
    fn reflection_is_an_involution(f in any_lift(), x in point()) {
        let r = f.reflect();
        prop_assert_eq!(r.reflect(), f.clone());
        prop_assert_eq!(r.eval(&x), -f.eval(&-x.clone()));
    }

    #[test]
    fn text_round_trip(f in any_lift()) {
        let again = parse_map(&serialize_map(&f)).unwrap();
        prop_assert_eq!(serialize_map(&again), serialize_map(&f));
        prop_assert_eq!(again, f);
    }
}

#[test]
fn shifted_fundamental_domain() {
    let f = make_lift(vec![(rat(-1, 2), int(0)), (int(0), int(1)), (rat(1, 2), int(1))], 1).unwrap();
    assert_eq!(f.eval(&rat(3, 4)), rat(3, 2));
    assert_eq!(f.domain(), Interval::new(rat(-1, 2), rat(1, 2)));
}
