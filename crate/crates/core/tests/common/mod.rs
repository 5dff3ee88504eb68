#![allow(dead_code)]

//! Random automata and properties shared by the integration and acceptance tests.

use ptasynth::model::{
    constant_c, Atom, ClockId, ClockTerm, LinearExpr, LocId, ParamClass, ParamId, ParamValuation, Property,
    Pta, Rel, Resets, SimpleConstraint, StateFormula, Transition,
};
use ptasynth::synth::{mode_obstacle, Mode, SyntacticRun};
use ptasynth::textio::{parse_model, parse_property, Source};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn model(text: &str) -> Pta {
    parse_model(&Source::anonymous(text)).unwrap()
}

pub fn property(pta: &Pta, text: &str) -> Property {
    parse_property(&Source::anonymous(text), pta).unwrap()
}

/// Shape of generated automata. `classes[i]` fixes the sign of parameter `i` in every
/// expression: `Upper` positive, `Lower` negative, `Mixed` either.
#[derive(Clone, Debug)]
pub struct Shape {
    pub max_locs: usize,
    pub clocks: usize,
    pub max_const: i64,
    pub classes: Vec<ParamClass>,
    /// Clocks allowed in parametric atoms; `None` means all.
    pub parametric_clocks: Option<Vec<usize>>,
    pub diagonals: bool,
    pub resets: bool,
    pub invariants: bool,
    pub max_coeff: i64,
}

impl Shape {
    pub fn concrete(max_locs: usize, clocks: usize, max_const: i64) -> Self {
        Shape {
            max_locs,
            clocks,
            max_const,
            classes: vec![],
            parametric_clocks: None,
            diagonals: true,
            resets: true,
            invariants: true,
            max_coeff: 1,
        }
    }
}

pub struct Gen<'a> {
    pub rng: &'a mut ChaCha8Rng,
    pub shape: Shape,
}

impl Gen<'_> {
    fn expr(&mut self, parametric: bool) -> LinearExpr {
        let c = self.rng.gen_range(-self.shape.max_const..=self.shape.max_const);
        let mut e = LinearExpr::constant(c);
        if parametric {
            for (i, class) in self.shape.classes.clone().into_iter().enumerate() {
                if self.rng.gen_bool(0.6) || self.shape.classes.len() == 1 {
                    let mag = self.rng.gen_range(1..=self.shape.max_coeff);
                    let sign = match class {
                        ParamClass::Upper => 1,
                        ParamClass::Lower => -1,
                        _ => {
                            if self.rng.gen_bool(0.5) {
                                1
                            } else {
                                -1
                            }
                        }
                    };
                    e.add_term(ParamId(i), sign * mag);
                }
            }
        }
        e
    }

    fn lhs(&mut self, allowed: &[usize]) -> Option<ClockTerm> {
        if allowed.is_empty() {
            return None;
        }
        let x = ClockId(*allowed.choose(self.rng).unwrap());
        let roll = self.rng.gen_range(0..10);
        Some(if roll < 4 {
            ClockTerm::Clock(x)
        } else if roll < 8 || !self.shape.diagonals || self.shape.clocks < 2 {
            ClockTerm::Neg(x)
        } else {
            let others: Vec<usize> = (0..self.shape.clocks).filter(|&c| c != x.0).collect();
            let y = ClockId(*others.choose(self.rng).unwrap());
            if self.rng.gen_bool(0.5) {
                ClockTerm::Diff(x, y)
            } else {
                ClockTerm::Diff(y, x)
            }
        })
    }

    pub fn atom(&mut self) -> Option<Atom> {
        let parametric = !self.shape.classes.is_empty() && self.rng.gen_bool(0.5);
        let all: Vec<usize> = (0..self.shape.clocks).collect();
        let allowed = if parametric { self.shape.parametric_clocks.clone().unwrap_or(all) } else { all };
        let mut lhs = self.lhs(&allowed)?;
        if parametric {
            // keep the diagonal inside the parametric clock set
            if let ClockTerm::Diff(x, y) = lhs {
                if !allowed.contains(&x.0) || !allowed.contains(&y.0) {
                    lhs = ClockTerm::Clock(x);
                }
            }
        }
        let rel = if self.rng.gen_bool(0.5) { Rel::Lt } else { Rel::Le };
        let mut e = self.expr(parametric);
        // nonnegative-ish constants for plain upper bounds keep most guards satisfiable
        if matches!(lhs, ClockTerm::Clock(_)) && e.con() < 0 && self.rng.gen_bool(0.7) {
            let shift = -2 * e.con();
            e = e + shift;
        }
        Some(Atom::new(lhs, rel, e))
    }

    fn constraint(&mut self, max_atoms: usize) -> SimpleConstraint {
        let n = self.rng.gen_range(0..=max_atoms);
        SimpleConstraint::new((0..n).filter_map(|_| self.atom()).collect())
    }

    pub fn pta(&mut self) -> Pta {
        let locs = self.rng.gen_range(1..=self.shape.max_locs);
        let invariants = (0..locs)
            .map(|i| {
                if self.shape.invariants && i > 0 && self.rng.gen_bool(0.3) {
                    // upper bounds only, so time can always start in the location
                    let c = self.constraint(1);
                    SimpleConstraint::new(
                        c.atoms.into_iter().filter(|a| matches!(a.lhs, ClockTerm::Clock(_))).collect(),
                    )
                } else {
                    SimpleConstraint::truth()
                }
            })
            .collect();
        let ntrans = self.rng.gen_range(locs.saturating_sub(1)..=locs + 2);
        let mut transitions = Vec::new();
        for k in 0..ntrans {
            let src = if k + 1 < locs { k } else { self.rng.gen_range(0..locs) };
            let dst = if k + 1 < locs { k + 1 } else { self.rng.gen_range(0..locs) };
            let mut resets = Resets::none();
            if self.shape.resets {
                for x in 0..self.shape.clocks {
                    if self.rng.gen_bool(0.3) {
                        let b = if self.rng.gen_bool(0.8) { 0 } else { self.rng.gen_range(1..=2) };
                        resets.insert(ClockId(x), b);
                    }
                }
            }
            transitions.push(Transition {
                src: LocId(src),
                guard: self.constraint(2),
                action: format!("a{k}"),
                resets,
                dst: LocId(dst),
            });
        }
        Pta::new(
            "gen",
            (0..self.shape.clocks).map(|i| format!("x{i}")).collect(),
            (0..self.shape.classes.len()).map(|i| format!("p{}", i + 1)).collect(),
            (0..locs).map(|i| format!("l{i}")).collect(),
            LocId(0),
            invariants,
            transitions,
        )
        .unwrap()
    }

    /// A formula without negation over parametric atoms, so that parameter classes
    /// survive in its negation normal form.
    pub fn positive_formula(&mut self, pta: &Pta, depth: usize) -> StateFormula {
        let leaf = |g: &mut Self| -> StateFormula {
            if g.rng.gen_bool(0.5) || pta.num_clocks() == 0 {
                StateFormula::Loc(LocId(g.rng.gen_range(0..pta.locations.len())))
            } else {
                match g.atom() {
                    Some(a) => StateFormula::Atom(a),
                    None => StateFormula::True,
                }
            }
        };
        if depth == 0 || self.rng.gen_bool(0.4) {
            return leaf(self);
        }
        let a = self.positive_formula(pta, depth - 1);
        let b = self.positive_formula(pta, depth - 1);
        if self.rng.gen_bool(0.6) {
            a.and(b)
        } else {
            a.or(b)
        }
    }

    /// Any formula; only for concrete automata.
    pub fn formula(&mut self, pta: &Pta, depth: usize) -> StateFormula {
        let f = self.positive_formula(pta, depth);
        if self.rng.gen_bool(0.3) {
            f.not()
        } else {
            f
        }
    }
}

pub fn lower_upper_shape(
    classes: Vec<ParamClass>,
    clocks: usize,
    parametric_clocks: Option<Vec<usize>>,
) -> Shape {
    Shape {
        max_locs: 4,
        clocks,
        max_const: 5,
        classes,
        parametric_clocks,
        diagonals: true,
        resets: true,
        invariants: true,
        max_coeff: 2,
    }
}

/// One clock, one parameter of either sign.
pub fn one_one_shape() -> Shape {
    Shape {
        max_locs: 4,
        clocks: 1,
        max_const: 5,
        classes: vec![ParamClass::Mixed],
        parametric_clocks: None,
        diagonals: false,
        resets: true,
        invariants: true,
        max_coeff: 2,
    }
}

/// A random path from the initial location of at most `max_len` transitions.
pub fn random_path(rng: &mut ChaCha8Rng, pta: &Pta, max_len: usize) -> Vec<usize> {
    let mut q = pta.init;
    let mut path = Vec::new();
    while path.len() < max_len {
        let out: Vec<usize> = pta.outgoing(q).map(|(i, _)| i).collect();
        if out.is_empty() || (!path.is_empty() && rng.gen_bool(0.2)) {
            break;
        }
        let t = *out.choose(rng).unwrap();
        path.push(t);
        q = pta.transitions[t].dst;
    }
    path
}

/// `count` random one-one automata with properties of either quantifier.
pub fn one_one_models(seed: u64, count: usize) -> Vec<(Pta, Property)> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let mut g = Gen { rng: &mut r, shape: one_one_shape() };
        let pta = g.pta();
        let f = g.formula(&pta, 2);
        let prop = if g.rng.gen_bool(0.7) { Property::exists(f) } else { Property::forall(f) };
        if mode_obstacle(&pta, &prop, Mode::OneOne).is_none() {
            out.push((pta, prop));
        }
    }
    out
}

/// Invariant-free, reset-free one-one runs feasible at some `T1 >= C`.
pub fn simple_feasible_runs(seed: u64, count: usize) -> Vec<(Pta, SyntacticRun, u64)> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let mut shape = one_one_shape();
        shape.resets = false;
        shape.invariants = false;
        let mut g = Gen { rng: &mut r, shape };
        let pta = g.pta();
        let path = random_path(g.rng, &pta, 4);
        let tau = SyntacticRun::from_transitions(&pta, &path).unwrap();
        let c = constant_c(&tau.automaton(&pta), &Property::exists(StateFormula::True));
        let t1 = c + g.rng.gen_range(0..4);
        if tau.is_feasible(&pta, &ParamValuation::finite(&[t1])).unwrap() {
            out.push((pta, tau, c));
        }
    }
    out
}

/// `not f` with negation pushed to the leaves, built without the library's DNF code.
pub fn negate(f: &StateFormula) -> StateFormula {
    match f {
        StateFormula::True => StateFormula::False,
        StateFormula::False => StateFormula::True,
        StateFormula::Atom(a) => StateFormula::Atom(a.negate()),
        StateFormula::Loc(_) => f.clone().not(),
        StateFormula::Not(g) => (**g).clone(),
        StateFormula::And(a, b) => negate(a).or(negate(b)),
        StateFormula::Or(a, b) => negate(a).and(negate(b)),
    }
}

/// Best margin over planes fixed by two or three support points, in floating point.
pub fn brute_margin(goods: &[Vec<u64>], bads: &[Vec<u64>]) -> Option<f64> {
    let f = |p: &Vec<u64>| (p[0] as f64, p[1] as f64);
    let g: Vec<(f64, f64)> = goods.iter().map(f).collect();
    let b: Vec<(f64, f64)> = bads.iter().map(f).collect();
    let mut candidates: Vec<((f64, f64), f64)> = Vec::new();
    for &gp in &g {
        for &bp in &b {
            // perpendicular bisector
            let w = (gp.0 - bp.0, gp.1 - bp.1);
            let mid = ((gp.0 + bp.0) / 2.0, (gp.1 + bp.1) / 2.0);
            candidates.push((w, -(w.0 * mid.0 + w.1 * mid.1)));
        }
    }
    for (same, other) in [(&g, &b), (&b, &g)] {
        for i in 0..same.len() {
            for j in i + 1..same.len() {
                let (a1, a2) = (same[i], same[j]);
                let n = (-(a2.1 - a1.1), a2.0 - a1.0);
                for &c in other.iter() {
                    let off_a = n.0 * a1.0 + n.1 * a1.1;
                    let off_c = n.0 * c.0 + n.1 * c.1;
                    candidates.push((n, -(off_a + off_c) / 2.0));
                }
            }
        }
    }
    let mut best: Option<f64> = None;
    for (w, bias) in candidates {
        let norm = (w.0 * w.0 + w.1 * w.1).sqrt();
        if norm < 1e-12 {
            continue;
        }
        for sign in [1.0, -1.0] {
            let val = |p: (f64, f64)| sign * (w.0 * p.0 + w.1 * p.1 + bias) / norm;
            let m = g.iter().map(|&p| val(p)).chain(b.iter().map(|&p| -val(p))).fold(f64::INFINITY, f64::min);
            if m > 1e-9 && best.is_none_or(|x| m > x) {
                best = Some(m);
            }
        }
    }
    best
}

/// 2 to 6 distinct points of `[0, 5]^2`, split into nonempty good and bad sets.
pub fn random_instance(r: &mut ChaCha8Rng) -> (Vec<Vec<u64>>, Vec<Vec<u64>>) {
    let n = r.gen_range(2..=6);
    let mut points: Vec<Vec<u64>> = Vec::new();
    while points.len() < n {
        let p = vec![r.gen_range(0..=5), r.gen_range(0..=5)];
        if !points.contains(&p) {
            points.push(p);
        }
    }
    let k = r.gen_range(1..n);
    let bads = points.split_off(k);
    (points, bads)
}
