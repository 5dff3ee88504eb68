mod common;

use common::{brute_margin, model, property, random_instance, rng};
use num_bigint::BigInt;
use proptest::prelude::*;
use ptasynth::learn::{
    agreement, boundary_candidates, evaluate_grid, learn_boundary, max_margin_separator, pair_up,
    sample_round, sequential_cover, Label, LearnConfig, Q,
};
use ptasynth::mc::check;
use ptasynth::model::ParamValuation;
use rand::Rng;

const THRESHOLD: &str = include_str!("../../../models/threshold.pta");
const CORNER: &str = include_str!("../../../models/corner.pta");

fn pts(v: &[(u64, u64)]) -> Vec<Vec<u64>> {
    v.iter().map(|&(a, b)| vec![a, b]).collect()
}

fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn separator_examples() {
    let s = max_margin_separator(&pts(&[(0, 2)]), &pts(&[(0, 0)])).unwrap();
    assert_eq!(s.plane.weights, vec![q(0, 1), q(1, 1)]);
    assert_eq!(s.plane.bias, q(-1, 1));
    assert_eq!(s.margin, 1.0);

    assert!(max_margin_separator(&pts(&[(1, 1)]), &pts(&[(1, 1)])).is_none());

    let s = max_margin_separator(&pts(&[(0, 1), (1, 2)]), &pts(&[(0, 0), (1, 0)])).unwrap();
    assert_eq!(s.plane.weights, vec![q(0, 1), q(1, 1)]);
    assert_eq!(s.plane.bias, q(-1, 2));
    assert_eq!(s.margin, 0.5);
}

#[test]
fn xor_layout_needs_two_segments() {
    let segments = sequential_cover(&pts(&[(0, 0), (2, 2)]), &pts(&[(2, 0), (0, 2)]));
    // (0,0) pairs with both bads, (2,2) with (0,2); the third pair flips orientation
    assert_eq!(segments.len(), 2);
    assert_eq!(segments[0].pairs, 0..2);
    assert_eq!(segments[1].pairs, 2..3);
}

#[test]
fn separable_prefix_then_crossing_pair() {
    // four unit pairs straddling y = 2.5, then a far pair on the wrong sides
    let goods = pts(&[(0, 3), (1, 3), (2, 3), (3, 3), (8, 0)]);
    let bads = pts(&[(0, 2), (1, 2), (2, 2), (3, 2), (8, 5)]);
    let pairs = pair_up(&goods, &bads);
    assert_eq!(pairs[4], (vec![8, 0], vec![8, 5]));
    let segments = sequential_cover(&goods, &bads);
    assert!(segments.len() >= 2);
    assert_eq!(segments[0].pairs, 0..4);
    assert_eq!(segments[0].plane.bias, q(-5, 2));
}

#[test]
fn candidates_around_an_axis_plane() {
    let seg = sequential_cover(&pts(&[(0, 2)]), &pts(&[(0, 0)])).remove(0);
    let config = LearnConfig { box_bound: 10, margin: 1, ..LearnConfig::default() };
    let c = boundary_candidates(&[seg], 2, &config);
    assert_eq!(c.len(), 33);
    assert!(c.iter().all(|p| p[1] <= 2));
}

#[test]
fn no_lattice_point_near_a_plane_outside_the_box() {
    let seg = sequential_cover(&[vec![40]], &[vec![30]]).remove(0);
    assert!(boundary_candidates(&[seg], 1, &LearnConfig::default()).is_empty());
}

#[test]
fn sample_round_labels_match_the_oracle() {
    let pta = model(THRESHOLD);
    let prop = property(&pta, "E<> loc == done");
    let config = LearnConfig { samples: 4, box_bound: 10, seed: 7, ..LearnConfig::default() };
    let s = sample_round(&pta, &prop, &config, 0, &mut rng(7)).unwrap();
    assert!(!s.is_empty() && s.len() <= 4);
    for x in &s {
        assert_eq!(x.label.is_good(), x.point[0] >= 3);
    }
}

#[test]
fn threshold_flips_between_two_and_three() {
    let pta = model(THRESHOLD);
    let prop = property(&pta, "E<> loc == done");
    let config = LearnConfig { samples: 10, box_bound: 10, max_rounds: 3, seed: 1, ..LearnConfig::default() };
    let c = learn_boundary(&pta, &prop, &config).unwrap();
    assert!(!c.segments.is_empty());
    for p in 0..=10u64 {
        assert_eq!(c.classify(&[p]).is_good(), p >= 3, "p = {p}");
    }
}

#[test]
fn everything_feasible_is_flagged() {
    let pta = model("pta T { clocks: x; params: p; init: a; loc a { inv: true; } loc b { inv: true; } trans a -> b { act: go; guard: x >= p; reset: ; } }");
    let prop = property(&pta, "E<> loc == b");
    let c = learn_boundary(&pta, &prop, &LearnConfig::default()).unwrap();
    assert!(c.all_good && !c.all_bad);
    assert!(c.segments.is_empty());
    assert_eq!(c.rounds.len(), 1);
    assert!(c.rounds[0].note.is_some());
    assert_eq!(c.classify(&[7]), Label::Good);
}

#[test]
fn corner_needs_several_segments() {
    let pta = model(CORNER);
    let prop = property(&pta, "E<> loc == done");
    let config = LearnConfig { samples: 40, box_bound: 10, max_rounds: 5, seed: 3, ..LearnConfig::default() };
    let c = learn_boundary(&pta, &prop, &config).unwrap();
    assert!(c.segments.len() >= 2, "{} segments", c.segments.len());
    let grid: Vec<_> = evaluate_grid(&pta, &prop, &c, 6).unwrap();
    assert_eq!(grid.len(), 49);
    assert!(agreement(&grid) >= 0.9, "agreement {}", agreement(&grid));
}

#[test]
fn learning_is_deterministic_and_labels_are_faithful() {
    let pta = model(CORNER);
    let prop = property(&pta, "E<> loc == done");
    let config = LearnConfig { samples: 20, seed: 99, ..LearnConfig::default() };
    let a = learn_boundary(&pta, &prop, &config).unwrap();
    let b = learn_boundary(&pta, &prop, &config).unwrap();
    assert_eq!(a, b);
    for s in &a.archive {
        let fresh = check(&pta, &ParamValuation::finite(&s.point), &prop).unwrap();
        assert_eq!(s.label.is_good(), fresh);
    }
}

#[test]
fn mixed_parameters_are_rejected() {
    let pta = model("pta T { clocks: x; params: p; init: a; loc a { inv: true; } loc b { inv: true; } trans a -> b { act: go; guard: x >= p && x <= p; reset: ; } }");
    let prop = property(&pta, "E<> loc == b");
    assert!(learn_boundary(&pta, &prop, &LearnConfig::default()).is_err());
    let bad = LearnConfig { samples: 1, ..LearnConfig::default() };
    assert!(bad.validate().is_err());
}

#[test]
fn margin_matches_exhaustive_oracle() {
    let mut r = rng(31);
    let mut separable = 0;
    for _ in 0..300 {
        let (g, b) = random_instance(&mut r);
        let exact = max_margin_separator(&g, &b);
        let brute = brute_margin(&g, &b);
        match (&exact, brute) {
            (Some(s), Some(m)) => {
                separable += 1;
                assert!((s.margin - m).abs() < 1e-6, "{g:?} {b:?}: {} vs {m}", s.margin);
            }
            (None, None) => {}
            _ => panic!("{g:?} {b:?}: {exact:?} vs {brute:?}"),
        }
    }
    assert!(separable > 50);
}

proptest! {
    #[test]
    fn separator_puts_points_on_their_side(seed in 0u64..10_000) {
        let (g, b) = random_instance(&mut rng(seed));
        if let Some(s) = max_margin_separator(&g, &b) {
            for p in &g {
                prop_assert!(s.plane.is_good(p));
                prop_assert!(s.plane.distance(p) >= s.margin - 1e-6);
            }
            for p in &b {
                prop_assert!(!s.plane.is_good(p));
                prop_assert!(s.plane.distance(p) >= s.margin - 1e-6);
            }
        }
    }

    #[test]
    fn covering_partitions_the_pairs(seed in 0u64..10_000) {
        let mut r = rng(seed);
        let dims = r.gen_range(1..=3);
        let n = r.gen_range(2..=16);
        let mut points: Vec<Vec<u64>> = Vec::new();
        for _ in 0..n {
            let p: Vec<u64> = (0..dims).map(|_| r.gen_range(0..=6)).collect();
            if !points.contains(&p) {
                points.push(p);
            }
        }
        prop_assume!(points.len() >= 2);
        let k = r.gen_range(1..points.len());
        let bads = points.split_off(k);
        let pairs = pair_up(&points, &bads);
        let segments = sequential_cover(&points, &bads);
        prop_assert!(segments.len() <= pairs.len());
        let mut next = 0;
        for s in &segments {
            prop_assert_eq!(s.pairs.start, next);
            next = s.pairs.end;
            for (g, b) in &pairs[s.pairs.clone()] {
                prop_assert!(s.plane.is_good(g) && !s.plane.is_good(b));
            }
        }
        prop_assert_eq!(next, pairs.len());
    }
}
