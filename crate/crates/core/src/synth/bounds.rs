//! Effective bounds of guards and the simple-run generator for one-one automata.

use crate::error::{Error, Result};
use crate::mc::ConcreteRun;
use crate::model::{Atom, ClockId, ClockTerm, LinearExpr, LocId, ParamId, Rat, Rel, SimpleConstraint};
use crate::synth::run::SyntacticRun;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundKind {
    Lower,
    Upper,
}

/// `x > e`, `x >= e`, `x < e` or `x <= e` on one clock. `expr == None` only for the
/// upper sentinel `x < inf`; the lower sentinel is `x > -1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EffectiveBound {
    pub kind: BoundKind,
    pub clock: ClockId,
    pub strict: bool,
    pub expr: Option<LinearExpr>,
}

impl EffectiveBound {
    pub fn lower(clock: ClockId, strict: bool, expr: LinearExpr) -> Self {
        EffectiveBound { kind: BoundKind::Lower, clock, strict, expr: Some(expr) }
    }

    pub fn upper(clock: ClockId, strict: bool, expr: LinearExpr) -> Self {
        EffectiveBound { kind: BoundKind::Upper, clock, strict, expr: Some(expr) }
    }

    /// `x > -1`
    pub fn lower_sentinel(clock: ClockId) -> Self {
        EffectiveBound::lower(clock, true, LinearExpr::constant(-1))
    }

    /// `x < inf`
    pub fn upper_sentinel(clock: ClockId) -> Self {
        EffectiveBound { kind: BoundKind::Upper, clock, strict: true, expr: None }
    }

    pub fn is_sentinel(&self) -> bool {
        match self.kind {
            BoundKind::Lower => *self == EffectiveBound::lower_sentinel(self.clock),
            BoundKind::Upper => self.expr.is_none(),
        }
    }

    /// Reads `atom` as a bound on `x`; `None` for atoms of other shapes.
    pub fn from_atom(atom: &Atom, x: ClockId) -> Option<Self> {
        let strict = atom.rel.is_strict();
        match atom.lhs {
            ClockTerm::Clock(y) if y == x => Some(EffectiveBound::upper(x, strict, atom.expr.clone())),
            ClockTerm::Neg(y) if y == x => Some(EffectiveBound::lower(x, strict, -atom.expr.clone())),
            _ => None,
        }
    }

    /// The bound as an atom; `None` for `x < inf`.
    pub fn to_atom(&self) -> Option<Atom> {
        let e = self.expr.clone()?;
        Some(match self.kind {
            BoundKind::Lower => Atom::lower(self.clock, self.strict, e),
            BoundKind::Upper => Atom::upper(self.clock, if self.strict { Rel::Lt } else { Rel::Le }, e),
        })
    }

    /// `cf(e, p)`; the upper sentinel has none.
    pub fn cf(&self, p: ParamId) -> Option<i64> {
        self.expr.as_ref().map(|e| e.cf(p))
    }
}

/// `b1 ⊒_p b2` on lower bounds of the same clock.
pub fn bound_order_geq(b1: &EffectiveBound, b2: &EffectiveBound, p: ParamId) -> bool {
    debug_assert!(b1.kind == BoundKind::Lower && b2.kind == BoundKind::Lower);
    let (e1, e2) = (b1.expr.as_ref().unwrap(), b2.expr.as_ref().unwrap());
    e1.cf(p) > e2.cf(p)
        || (e1.cf(p) == e2.cf(p) && e1.con() > e2.con())
        || (e1 == e2 && b1.strict)
        || (e1 == e2 && !b2.strict)
}

/// `b1 ⊑_p b2` on upper bounds of the same clock; `x < inf` is the greatest.
pub fn bound_order_leq(b1: &EffectiveBound, b2: &EffectiveBound, p: ParamId) -> bool {
    debug_assert!(b1.kind == BoundKind::Upper && b2.kind == BoundKind::Upper);
    match (&b1.expr, &b2.expr) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(e1), Some(e2)) => {
            e1.cf(p) < e2.cf(p)
                || (e1.cf(p) == e2.cf(p) && e1.con() < e2.con())
                || (e1 == e2 && b1.strict)
                || (e1 == e2 && !b2.strict)
        }
    }
}

/// The first candidate dominating every other one, or the first candidate when none does.
fn dominant(
    candidates: Vec<EffectiveBound>,
    dominates: impl Fn(&EffectiveBound, &EffectiveBound) -> bool,
) -> Option<EffectiveBound> {
    candidates.iter().find(|b| candidates.iter().all(|o| dominates(b, o))).or(candidates.first()).cloned()
}

/// `elb(g, p)` for clock `x`.
pub fn elb(g: &SimpleConstraint, x: ClockId, p: ParamId) -> EffectiveBound {
    let lows = g
        .atoms
        .iter()
        .filter_map(|a| EffectiveBound::from_atom(a, x))
        .filter(|b| b.kind == BoundKind::Lower)
        .collect();
    dominant(lows, |a, b| bound_order_geq(a, b, p)).unwrap_or_else(|| EffectiveBound::lower_sentinel(x))
}

/// `eup(g, p)` for clock `x`.
pub fn eup(g: &SimpleConstraint, x: ClockId, p: ParamId) -> EffectiveBound {
    let ups = g
        .atoms
        .iter()
        .filter_map(|a| EffectiveBound::from_atom(a, x))
        .filter(|b| b.kind == BoundKind::Upper)
        .collect();
    dominant(ups, |a, b| bound_order_leq(a, b, p)).unwrap_or_else(|| EffectiveBound::upper_sentinel(x))
}

fn eval_at(e: &LinearExpr, p: ParamId, t: u64) -> i64 {
    e.con() + e.cf(p) * t as i64
}

/// `theta(g, T)`: the least integer value of `x` meeting `elb(g, p)` at `p = T`, clamped at 0.
pub fn theta(g: &SimpleConstraint, x: ClockId, p: ParamId, t: u64) -> u64 {
    let b = elb(g, x, p);
    let v = eval_at(b.expr.as_ref().unwrap(), p, t) + i64::from(b.strict);
    v.max(0) as u64
}

/// `Theta(tau, T)`: `w0 = 0` and `wi = theta(gi, T)`.
pub fn theta_run(run: &SyntacticRun, x: ClockId, p: ParamId, t: u64) -> Vec<u64> {
    std::iter::once(0).chain(run.steps.iter().map(|e| theta(&e.guard, x, p, t))).collect()
}

/// Algorithm GSR on an invariant-free, reset-free run of a one-one automaton: starts from
/// `Theta(tau, T)` and raises each `wi` below its predecessor until the sequence is
/// nondecreasing. Returns the run on `tau.automaton(..)` with delays `w_{i+1} - w_i` and a
/// final zero delay, together with the final `w`.
pub fn gsr(run: &SyntacticRun, x: ClockId, p: ParamId, t: u64) -> Result<(ConcreteRun, Vec<u64>)> {
    if run.has_resets() || run.has_invariants() {
        return Err(Error::Precondition(
            "simple run generation needs a run without resets or invariants".into(),
        ));
    }
    let mut w = theta_run(run, x, p, t);
    while w.windows(2).any(|s| s[1] < s[0]) {
        for i in 1..w.len() {
            if w[i] < w[i - 1] {
                w[i] = w[i - 1];
            }
        }
    }
    let mut delays: Vec<Rat> = w.windows(2).map(|s| Rat::from_integer((s[1] - s[0]) as i64)).collect();
    delays.push(Rat::from_integer(0));
    let concrete = ConcreteRun { start: LocId(0), delays, transitions: (0..run.len()).collect() };
    Ok((concrete, w))
}
