mod common;

use circle_lift::markov::{
    closed_walk_count, covering_graph, covers, find_horseshoe, loop_count, periodic_point_from_loop, simple_loops,
    CoverGraph, Partition,
};
use circle_lift::periodic::{find_large_orbit, least_period, periodic_window};
use circle_lift::theorem::{example_degree_zero, planted_case, random_pl_lift};
use circle_lift::{int, rat, Interval};
use common::closed_walks_dfs;
use num_bigint::BigInt;
use proptest::prelude::*;

fn graph() -> impl Strategy<Value = CoverGraph> {
    (1usize..=12).prop_flat_map(|n| {
        prop::collection::vec(prop::bool::weighted(0.3), n * n).prop_map(move |bits| {
            let arrows: Vec<(usize, usize)> = (0..n * n).filter(|&i| bits[i]).map(|i| (i / n, i % n)).collect();
            CoverGraph::from_arrows((0..n).map(|i| format!("v{i}")).collect(), &arrows)
        })
    })
}

fn partition(cuts: &[i64]) -> Partition {
    Partition::new(
        cuts.windows(2)
            .enumerate()
            .map(|(i, w)| (format!("K{i}"), Interval::new(rat(w[0], 8), rat(w[1], 8))))
            .collect(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn counts_match_enumeration(g in graph(), n in 1usize..=5) {
        let (all, primitive) = closed_walks_dfs(&g.matrix(), n);
        prop_assert_eq!(closed_walk_count(&g, n), BigInt::from(all));
        prop_assert_eq!(loop_count(&g, n), BigInt::from(primitive));
    }

    #[test]
    fn simple_loops_are_canonical_and_complete(g in graph()) {
        prop_assume!(g.vertex_count() <= 6);
        let loops = simple_loops(&g, 4).unwrap();
        for l in &loops {
            prop_assert!(l.is_in(&g) && l.is_primitive() && &l.canonical() == l);
        }
        // Each primitive class of length n contributes n rooted walks.
        for n in 1..=4 {
            let classes = loops.iter().filter(|l| l.len() == n).count();
            prop_assert_eq!(BigInt::from(classes * n), loop_count(&g, n));
        }
    }

    #[test]
    fn arrows_are_coverings(seed in 0u64..10_000, degree in -2i64..=2) {
        let f = random_pl_lift(seed, degree, None).unwrap();
        let p = partition(&[-4, -1, 0, 3, 5, 8, 12]);
        let g = covering_graph(&f, &p);
        for a in 0..p.len() {
            for b in 0..p.len() {
                prop_assert_eq!(g.has_arrow(a, b), covers(&f, p.interval(a), p.interval(b)));
            }
        }
    }

    #[test]
    fn pulled_back_points_follow_itinerary(seed in 0u64..10_000, len in 1usize..=4, pick in any::<u64>()) {
        let f = random_pl_lift(seed, 1, None).unwrap();
        let p = partition(&[0, 2, 4, 6, 8]);
        let g = covering_graph(&f, &p);
        let loops: Vec<_> = simple_loops(&g, len).unwrap().into_iter().filter(|l| l.len() == len).collect();
        prop_assume!(!loops.is_empty());
        let l = &loops[(pick % loops.len() as u64) as usize];
        let x = periodic_point_from_loop(&f, &p, l).unwrap();
        prop_assert_eq!(f.iterate(&x, len), x.clone());
        let mut y = x;
        for i in 0..len {
            prop_assert!(p.interval(l.vertices[i]).contains(&y));
            y = f.eval(&y);
        }
    }
}

#[test]
fn horseshoe_loops_give_least_periods_on_planted_maps() {
    for seed in 0..6 {
        let case = planted_case(100 + seed, 2, 4);
        let w = periodic_window(&case.map).unwrap();
        let orbit = find_large_orbit(&case.map, 4, Some(&w)).unwrap().expect("planted orbit is large");
        let h = find_horseshoe(&case.map, &orbit).unwrap();
        let part = h.partition();
        for l in 1..=8 {
            let x = periodic_point_from_loop(&case.map, &part, &h.loop_for_period(l)).unwrap();
            assert_eq!(least_period(&case.map, &x, l), l, "seed {seed}, period {l}");
        }
    }
}

#[test]
fn degree_zero_fixed_point_in_i0() {
    let ex = example_degree_zero(3, None).unwrap();
    let i0 = ex.partition.index_of("I_0").unwrap();
    let x = periodic_point_from_loop(&ex.map, &ex.partition, &circle_lift::Loop::new(vec![i0])).unwrap();
    assert_eq!(ex.map.eval(&x), x);
    assert!(ex.partition.interval(i0).contains(&x));
    assert!(x > int(0));
}
