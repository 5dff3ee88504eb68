mod common;

use std::collections::BTreeSet;

use common::{
    lower_upper_shape, model, one_one_models, property, random_path, rng, simple_feasible_runs, Gen,
};
use ptasynth::mc::{check, replay};
use ptasynth::model::{
    constant_c, Atom, ClockId, ClockTerm, ClockValuation, LinearExpr, ParamClass, ParamId, ParamValuation,
    ParamValue, Property, Rel, SimpleConstraint, StateFormula,
};
use ptasynth::region::{Interval, Region};
use ptasynth::synth::{
    elb, eup, gsr, lu_emptiness, mode_obstacle, synth_l_only, synth_lu_one_param, synth_one_one,
    synth_u_only, synthesize, theta_run, Method, Mode, SyntacticRun,
};
use ptasynth::Error;
use rand::Rng;

const X: ClockId = ClockId(0);
const P: ParamId = ParamId(0);

fn chain(guard: &str) -> String {
    format!("pta T {{ clocks: x; params: p; init: a; loc a {{ inv: true; }} loc b {{ inv: true; }} trans a -> b {{ act: go; guard: {guard}; reset: ; }} }}")
}

fn member(r: &Region, point: &[u64]) -> bool {
    r.contains(point).unwrap()
}

fn fin(v: u64) -> ParamValuation {
    ParamValuation::finite(&[v])
}

/// Every certificate reproduces with a fresh check.
fn certificates_reproduce(pta: &ptasynth::model::Pta, prop: &Property, r: &ptasynth::synth::SynthesisResult) {
    for c in &r.certificate_checks {
        assert_eq!(check(pta, &c.valuation, prop).unwrap(), c.verdict, "{:?}", c.valuation);
    }
}

#[test]
fn one_one_lower_bound_gives_everything() {
    let pta = model(&chain("x >= p"));
    let prop = property(&pta, "E<> loc == b");
    let r = synth_one_one(&pta, &prop).unwrap();
    assert!(r.region.is_full());
    let c = r.constant_c.unwrap();
    for p in 0..=c + 5 {
        assert!(check(&pta, &fin(p), &prop).unwrap());
    }
    certificates_reproduce(&pta, &prop, &r);
}

#[test]
fn one_one_bounded_region() {
    let pta = model(&chain("x <= 5 - p"));
    let prop = property(&pta, "E<> loc == b");
    let r = synth_one_one(&pta, &prop).unwrap();
    assert_eq!(r.constant_c, Some(12));
    assert_eq!(r.method, Method::OneOne);
    assert!(r.region.set_eq(&Region::from_box(vec![Interval::closed(0, 5)])).unwrap());
    for p in 0..=17 {
        assert_eq!(member(&r.region, &[p]), check(&pta, &fin(p), &prop).unwrap());
    }
}

#[test]
fn one_one_unsatisfiable_guard() {
    let pta = model(&chain("x <= -1 - p"));
    let r = synth_one_one(&pta, &property(&pta, "E<> loc == b")).unwrap();
    assert!(r.region.is_empty());
}

#[test]
fn one_one_rejects_wrong_shapes() {
    let two = model("pta T { clocks: x; params: p, q; init: a; loc a { inv: true; } loc b { inv: true; } trans a -> b { act: go; guard: x <= p + q; reset: ; } }");
    assert!(matches!(synth_one_one(&two, &property(&two, "E<> loc == b")), Err(Error::Precondition(_))));
    let concrete = model("pta T { clocks: x, y; params: p; init: a; loc a { inv: y <= 2; } loc b { inv: true; } trans a -> b { act: go; guard: x <= p; reset: ; } }");
    assert!(matches!(
        synth_one_one(&concrete, &property(&concrete, "E<> loc == b")),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn one_one_universal_is_complement() {
    let pta = model(&chain("x <= 5 - p"));
    let r = synth_one_one(&pta, &property(&pta, "A[] !(loc == b)")).unwrap();
    assert!(r.dual);
    assert!(r.region.set_eq(&Region::from_box(vec![Interval::from(6)])).unwrap());
    certificates_reproduce(&pta, &property(&pta, "A[] !(loc == b)"), &r);
}

#[test]
fn strip_invariants_examples() {
    let plain = model(&chain("x >= p"));
    let run = SyntacticRun::from_transitions(&plain, &[0]).unwrap();
    assert_eq!(run.strip_invariants().steps[0].guard, run.steps[0].guard);

    let pta = model("pta T { clocks: x, z; params: p, p1; init: a; loc a { inv: z <= p1; } loc b { inv: x <= p; } trans a -> b { act: go; guard: true; reset: x; } }");
    let beta = SyntacticRun::from_transitions(&pta, &[0]).unwrap().strip_invariants();
    let g = &beta.steps[0].guard;
    let z_le_p1 = Atom::upper(ClockId(1), Rel::Le, LinearExpr::param(ParamId(1)));
    let zero_le_p = Atom::new(ClockTerm::Zero, Rel::Le, LinearExpr::param(ParamId(0)));
    assert_eq!(g.atoms, vec![z_le_p1, zero_le_p.clone()]);
    assert!(zero_le_p.is_trivially_true());
    assert!(beta.invariants.iter().all(SimpleConstraint::is_true));
}

#[test]
fn encode_target_splits_disjunctions() {
    let pta = model(&chain("x >= p"));
    let run = SyntacticRun::from_transitions(&pta, &[0]).unwrap();
    let phi = property(&pta, "E<> loc == b && (x <= 3 || x >= 7)").formula;
    let variants = run.encode_target(&phi);
    assert_eq!(variants.len(), 2);
    assert_eq!(variants[0].invariants[1].atoms.len(), 1);
    assert!(run.encode_target(&property(&pta, "E<> loc == a").formula).is_empty());
}

#[test]
fn runs_must_be_consecutive() {
    let pta = model("pta T { clocks: x; params: p; init: a; loc a { inv: true; } loc b { inv: true; } trans b -> a { act: go; guard: true; reset: ; } }");
    assert!(SyntacticRun::from_transitions(&pta, &[0]).is_err());
}

fn two_step(g1: &str, g2: &str) -> ptasynth::model::Pta {
    model(&format!("pta T {{ clocks: x; params: p; init: a; loc a {{ inv: true; }} loc b {{ inv: true; }} loc c {{ inv: true; }} trans a -> b {{ act: s; guard: {g1}; reset: ; }} trans b -> c {{ act: t; guard: {g2}; reset: ; }} }}"))
}

#[test]
fn gsr_examples() {
    let pta = two_step("x >= p", "x <= p + 2");
    let run = SyntacticRun::from_transitions(&pta, &[0, 1]).unwrap();
    let (concrete, w) = gsr(&run, X, P, 3).unwrap();
    assert_eq!(w, vec![0, 3, 3]);
    assert_eq!(concrete.delays[..2], [3.into(), 0.into()]);
    replay(&run.automaton(&pta), &fin(3), &concrete, None).unwrap();

    let pta = two_step("x >= p", "x >= 1");
    let run = SyntacticRun::from_transitions(&pta, &[0, 1]).unwrap();
    assert_eq!(theta_run(&run, X, P, 3), vec![0, 3, 1]);
    assert_eq!(gsr(&run, X, P, 3).unwrap().1, vec![0, 3, 3]);

    let empty = SyntacticRun::from_transitions(&pta, &[]).unwrap();
    let (concrete, w) = gsr(&empty, X, P, 3).unwrap();
    assert_eq!(w, vec![0]);
    assert!(concrete.transitions.is_empty());
}

#[test]
fn gsr_needs_simple_runs() {
    let pta = model("pta T { clocks: x; params: p; init: a; loc a { inv: true; } loc b { inv: true; } trans a -> b { act: go; guard: x >= p; reset: x; } }");
    let run = SyntacticRun::from_transitions(&pta, &[0]).unwrap();
    assert!(matches!(gsr(&run, X, P, 3), Err(Error::Precondition(_))));
}

#[test]
fn emptiness_examples() {
    let low = model(&chain("x >= p"));
    let b = StateFormula::Loc(low.location_id("b").unwrap());
    assert!(lu_emptiness(&low, &b).unwrap());
    assert_eq!(lu_emptiness(&low, &b).unwrap(), check(&low, &fin(0), &Property::exists(b.clone())).unwrap());
    let up = model("pta T { clocks: x; params: p; init: a; loc a { inv: x <= p; } loc b { inv: true; } trans a -> b { act: go; guard: x >= 50; reset: ; } }");
    assert!(lu_emptiness(&up, &b).unwrap());
    let dead = model(&chain("x <= 1 && x >= 2 && x >= p"));
    assert!(!lu_emptiness(&dead, &b).unwrap());
    let mixed = model(&chain("x >= p && x <= p"));
    assert!(matches!(lu_emptiness(&mixed, &b), Err(Error::Precondition(_))));
}

#[test]
fn lu_one_param_examples() {
    let low = model(&chain("x <= 5 - p"));
    let prop = property(&low, "E<> loc == b");
    let r = synth_lu_one_param(&low, &prop).unwrap();
    assert!(r.region.set_eq(&Region::from_box(vec![Interval::closed(0, 5)])).unwrap());
    for p in 0..=17 {
        assert_eq!(member(&r.region, &[p]), check(&low, &fin(p), &prop).unwrap());
    }

    let up = model(&chain("x >= 3 && x <= p"));
    let prop = property(&up, "E<> loc == b");
    let r = synth_lu_one_param(&up, &prop).unwrap();
    assert!(r.region.set_eq(&Region::from_box(vec![Interval::from(3)])).unwrap());
    for p in 0..=10 {
        assert_eq!(member(&r.region, &[p]), check(&up, &fin(p), &prop).unwrap());
    }
    assert!(check(&up, &ParamValuation::new(vec![ParamValue::Inf]), &prop).unwrap());
    assert!(r.constant_b.unwrap() >= 3);
    certificates_reproduce(&up, &prop, &r);

    let dual_prop = property(&up, "A[] !(loc == b)");
    let d = synth_lu_one_param(&up, &dual_prop).unwrap();
    assert!(d.region.set_eq(&Region::from_box(vec![Interval::closed(0, 2)])).unwrap());
    certificates_reproduce(&up, &dual_prop, &d);
}

#[test]
fn lu_one_param_empty_cases() {
    let low = model(&chain("x >= p && x <= 1 && x >= 2"));
    assert!(synth_lu_one_param(&low, &property(&low, "E<> loc == b")).unwrap().region.is_empty());
    let up = model(&chain("x <= p && x <= 1 && x >= 2"));
    assert!(synth_lu_one_param(&up, &property(&up, "E<> loc == b")).unwrap().region.is_empty());
}

fn two_params(guard: &str) -> ptasynth::model::Pta {
    model(&format!("pta T {{ clocks: x; params: p1, p2; init: a; loc a {{ inv: true; }} loc b {{ inv: true; }} trans a -> b {{ act: go; guard: {guard}; reset: ; }} }}"))
}

#[test]
fn l_only_sum_bound() {
    let pta = two_params("x <= 4 - p1 - p2");
    let prop = property(&pta, "E<> loc == b");
    let r = synth_l_only(&pta, &prop).unwrap();
    for j in 0..=8 {
        for k in 0..=8 {
            let oracle = check(&pta, &ParamValuation::finite(&[j, k]), &prop).unwrap();
            assert_eq!(oracle, j + k <= 4);
            assert_eq!(member(&r.region, &[j, k]), oracle, "({j}, {k})");
        }
    }
    certificates_reproduce(&pta, &prop, &r);
}

#[test]
fn u_only_corner() {
    let pta = two_params("x >= 2 && x <= p1 && x <= p2");
    let prop = property(&pta, "E<> loc == b");
    let r = synth_u_only(&pta, &prop).unwrap();
    let expected = Region::up_set(2, 2);
    assert!(r.region.set_eq(&expected).unwrap(), "{}", r.region);
    for j in 0..=6 {
        for k in 0..=6 {
            let oracle = check(&pta, &ParamValuation::finite(&[j, k]), &prop).unwrap();
            assert_eq!(member(&r.region, &[j, k]), oracle);
        }
    }
    let inf = ParamValue::Inf;
    assert!(check(&pta, &ParamValuation::new(vec![inf, inf]), &prop).unwrap());
    assert!(!check(&pta, &ParamValuation::new(vec![ParamValue::Fin(1), inf]), &prop).unwrap());
}

#[test]
fn uniform_synthesis_with_one_parameter_matches_base_case() {
    for guard in ["x <= 5 - p", "x >= 3 && x <= p"] {
        let pta = model(&chain(guard));
        let prop = property(&pta, "E<> loc == b");
        let base = synth_lu_one_param(&pta, &prop).unwrap().region;
        let lower = guard.contains('-');
        let r = if lower { synth_l_only(&pta, &prop).unwrap() } else { synth_u_only(&pta, &prop).unwrap() };
        assert_eq!(r.region, base);
    }
}

#[test]
fn auto_mode_dispatch() {
    let one = model(&chain("x <= 5 - p"));
    assert_eq!(synthesize(&one, &property(&one, "E<> loc == b"), Mode::Auto).unwrap().method, Method::OneOne);
    let u = two_params("x >= 2 && x <= p1 && x <= p2");
    assert_eq!(synthesize(&u, &property(&u, "E<> loc == b"), Mode::Auto).unwrap().method, Method::UOnly);
    let mixed = two_params("x >= p1 && x <= p2");
    assert!(matches!(
        synthesize(&mixed, &property(&mixed, "E<> loc == b"), Mode::Auto),
        Err(Error::Undecidable(_))
    ));
    assert!(mode_obstacle(&mixed, &property(&mixed, "E<> loc == b"), Mode::LOnly).is_some());
}

#[test]
fn verdicts_stabilize_from_c() {
    for (pta, prop) in one_one_models(21, 25) {
        let c = constant_c(&pta, &prop);
        let at_c = check(&pta, &fin(c), &prop).unwrap();
        for k in 1..=5 {
            assert_eq!(check(&pta, &fin(c + k), &prop).unwrap(), at_c);
        }
    }
}

#[test]
fn one_one_synthesis_agrees_with_oracle() {
    for (pta, prop) in one_one_models(22, 15) {
        let r = synth_one_one(&pta, &prop).unwrap();
        let c = r.constant_c.unwrap();
        for p in 0..=c + 5 {
            assert_eq!(member(&r.region, &[p]), check(&pta, &fin(p), &prop).unwrap(), "p = {p}");
        }
    }
}

#[test]
fn strip_invariants_preserves_feasibility() {
    let mut r = rng(23);
    for _ in 0..80 {
        let mut g = Gen { rng: &mut r, shape: lower_upper_shape(vec![ParamClass::Mixed], 2, None) };
        let mut pta = g.pta();
        if g.rng.gen_bool(0.5) {
            pta.invariants[0] = SimpleConstraint::new(g.atom().into_iter().collect());
        }
        let path = random_path(g.rng, &pta, 4);
        let tau = SyntacticRun::from_transitions(&pta, &path).unwrap();
        let beta = tau.strip_invariants();
        for _ in 0..3 {
            let v = fin(g.rng.gen_range(0..8));
            let init_ok = pta.invariants[0].holds(&v, &ClockValuation::zero(2)).unwrap();
            assert_eq!(
                tau.is_feasible(&pta, &v).unwrap(),
                init_ok && beta.is_feasible(&pta, &v).unwrap(),
                "path {path:?} at {v:?}"
            );
        }
    }
}

#[test]
fn effective_bounds_are_ordered_along_feasible_runs() {
    for (_, tau, _) in simple_feasible_runs(24, 40) {
        for i in 0..tau.len() {
            for j in i..tau.len() {
                let lo = elb(&tau.steps[i].guard, X, P);
                let up = eup(&tau.steps[j].guard, X, P);
                if !lo.is_sentinel() && !up.is_sentinel() {
                    assert!(lo.cf(P).unwrap() <= up.cf(P).unwrap());
                }
            }
        }
    }
}

#[test]
fn gsr_runs_replay_beyond_c() {
    let mut failures = BTreeSet::new();
    let runs = simple_feasible_runs(25, 30);
    for (n, (pta, tau, c)) in runs.iter().enumerate() {
        let chain = tau.automaton(pta);
        for t in [*c, c + 1, c + 2, c + 5, c + 11] {
            let (concrete, _) = gsr(tau, X, P, t).unwrap();
            if replay(&chain, &fin(t), &concrete, None).is_err() {
                failures.insert(n);
            }
        }
    }
    assert!(failures.is_empty(), "runs {failures:?} failed to replay");
}

#[test]
fn lu_one_param_agrees_with_oracle_and_is_monotone() {
    let mut r = rng(26);
    let mut done = 0;
    while done < 20 {
        let class = if r.gen_bool(0.5) { ParamClass::Lower } else { ParamClass::Upper };
        let mut g = Gen { rng: &mut r, shape: lower_upper_shape(vec![class], 2, Some(vec![0])) };
        let pta = g.pta();
        let prop = Property::exists(g.positive_formula(&pta, 2));
        if mode_obstacle(&pta, &prop, Mode::LuOneParam).is_some() {
            continue;
        }
        done += 1;
        let res = synth_lu_one_param(&pta, &prop).unwrap();
        let top = res.constant_c.unwrap_or(0).max(res.constant_b.unwrap_or(0)) + 5;
        let verdicts: Vec<bool> = (0..=top).map(|p| check(&pta, &fin(p), &prop).unwrap()).collect();
        for (p, &v) in verdicts.iter().enumerate() {
            assert_eq!(member(&res.region, &[p as u64]), v);
        }
        let closed = if class == ParamClass::Upper {
            verdicts.windows(2).all(|w| !w[0] || w[1])
        } else {
            verdicts.windows(2).all(|w| w[0] || !w[1])
        };
        assert!(closed, "{class:?}: {verdicts:?}");
        certificates_reproduce(&pta, &prop, &res);
    }
}

/// Strict bounds one apart admit only fractional values, which integer `theta` misses.
#[test]
fn gsr_misses_open_unit_gaps() {
    let pta = two_step("x > p && x < p + 1", "true");
    let run = SyntacticRun::from_transitions(&pta, &[0, 1]).unwrap();
    let c = constant_c(&run.automaton(&pta), &Property::exists(StateFormula::True));
    assert!(run.is_feasible(&pta, &fin(c)).unwrap());
    let (concrete, _) = gsr(&run, X, P, c).unwrap();
    assert!(replay(&run.automaton(&pta), &fin(c), &concrete, None).is_err());
}
