//! Region-automaton reachability, used to cross-check the zone engine.
//!
//! A region records, per clock, its integer part up to `Kc` (or that it lies above `Kc`),
//! the ordering of the fractional parts of clocks below `Kc`, and, per clock pair, the
//! class of their difference relative to `K`. Here `K` bounds every constant compared
//! against and `Kc = K + max reset value`; the latter guarantees that a reset `x := b`
//! determines the class of `x - y` from the class of `y` alone.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::model::{ClockTerm, ConcreteAtom, LocId, ParamValuation, Pta, Rel, StateFormula};

pub const DEFAULT_CAP: i64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Class {
    Exact(i64),
    /// `(n, n + 1)`
    Open(i64),
    /// Beyond the upper threshold.
    Above,
    /// Below the lower threshold (differences only).
    Below,
}

impl Class {
    fn negate(self) -> Class {
        match self {
            Class::Exact(n) => Class::Exact(-n),
            Class::Open(n) => Class::Open(-n - 1),
            Class::Above => Class::Below,
            Class::Below => Class::Above,
        }
    }

    /// Truth of `v rel c` for every `v` in the class; thresholds must dominate `|c|`.
    fn compare(self, rel: Rel, c: i64) -> bool {
        match self {
            Class::Exact(n) => rel.holds(n.into(), c.into()),
            Class::Open(n) => n < c,
            Class::Above => false,
            Class::Below => true,
        }
    }

    fn clip(self, k: i64) -> Class {
        match self {
            Class::Exact(n) if n > k => Class::Above,
            Class::Exact(n) if n < -k => Class::Below,
            Class::Open(n) if n >= k => Class::Above,
            Class::Open(n) if n < -k => Class::Below,
            other => other,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Region {
    clocks: Vec<Class>,
    /// Clocks with `Open` class grouped by equal fractional part, ascending.
    frac: Vec<Vec<usize>>,
    /// Class of `x_i - x_j` for `i < j`, row-major over pairs.
    diffs: Vec<Class>,
}

struct Ctx {
    n: usize,
    k: i64,
    kc: i64,
}

impl Ctx {
    fn pair(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j);
        i * self.n + j
    }

    fn diff(&self, r: &Region, i: usize, j: usize) -> Class {
        if i < j {
            r.diffs[self.pair(i, j)]
        } else {
            r.diffs[self.pair(j, i)].negate()
        }
    }

    fn initial(&self) -> Region {
        Region {
            clocks: vec![Class::Exact(0); self.n],
            frac: vec![],
            diffs: vec![Class::Exact(0); self.n * self.n],
        }
    }

    fn holds(&self, r: &Region, a: ConcreteAtom) -> bool {
        match a {
            ConcreteAtom::True => true,
            ConcreteAtom::False => false,
            ConcreteAtom::Bound { lhs, rel, bound } => match lhs {
                ClockTerm::Zero => rel.holds(0.into(), bound.into()),
                ClockTerm::Clock(x) => r.clocks[x.0].compare(rel, bound),
                ClockTerm::Neg(x) => r.clocks[x.0].negate().compare(rel, bound),
                ClockTerm::Diff(x, y) => self.diff(r, x.0, y.0).compare(rel, bound),
            },
        }
    }

    /// The next region along a delay, or `None` once every clock is above `Kc`.
    fn time_successor(&self, r: &Region) -> Option<Region> {
        let mut next = r.clone();
        let exact: Vec<usize> = (0..self.n).filter(|&i| matches!(r.clocks[i], Class::Exact(_))).collect();
        if !exact.is_empty() {
            let mut group = Vec::new();
            for i in exact {
                let Class::Exact(v) = r.clocks[i] else { unreachable!() };
                if v >= self.kc {
                    next.clocks[i] = Class::Above;
                } else {
                    next.clocks[i] = Class::Open(v);
                    group.push(i);
                }
            }
            if !group.is_empty() {
                next.frac.insert(0, group);
            }
            return Some(next);
        }
        let top = next.frac.pop()?;
        for i in top {
            let Class::Open(v) = r.clocks[i] else { unreachable!() };
            next.clocks[i] = Class::Exact(v + 1);
        }
        Some(next)
    }

    fn reset(&self, r: &mut Region, x: usize, b: i64) {
        for g in &mut r.frac {
            g.retain(|&i| i != x);
        }
        r.frac.retain(|g| !g.is_empty());
        r.clocks[x] = Class::Exact(b);
        for y in 0..self.n {
            if y == x {
                continue;
            }
            // class of b - y
            let d = match r.clocks[y] {
                Class::Exact(v) => Class::Exact(b - v),
                Class::Open(v) => Class::Open(b - v - 1),
                Class::Above | Class::Below => Class::Below,
            }
            .clip(self.k);
            if x < y {
                r.diffs[self.pair(x, y)] = d;
            } else {
                r.diffs[self.pair(y, x)] = d.negate();
            }
        }
    }
}

/// Evaluates a state formula on a region; atoms are constant on regions.
fn eval(ctx: &Ctx, f: &StateFormula, q: LocId, r: &Region, params: &ParamValuation) -> Result<bool> {
    Ok(match f {
        StateFormula::True => true,
        StateFormula::False => false,
        StateFormula::Loc(l) => *l == q,
        StateFormula::Atom(a) => ctx.holds(r, a.concretize(params)?),
        StateFormula::Not(g) => !eval(ctx, g, q, r, params)?,
        StateFormula::And(a, b) => eval(ctx, a, q, r, params)? && eval(ctx, b, q, r, params)?,
        StateFormula::Or(a, b) => eval(ctx, a, q, r, params)? || eval(ctx, b, q, r, params)?,
    })
}

fn holds_all(ctx: &Ctx, r: &Region, atoms: &[ConcreteAtom]) -> bool {
    atoms.iter().all(|&a| ctx.holds(r, a))
}

/// `A[gamma] |= E<> target` by region-graph search. Fails with `CapExceeded` when a
/// finite constant exceeds `cap`.
pub fn reachable_regions(
    pta: &Pta,
    params: &ParamValuation,
    target: &StateFormula,
    cap: i64,
) -> Result<bool> {
    let concretize = |atoms: &[crate::model::Atom]| -> Result<Vec<ConcreteAtom>> {
        atoms.iter().map(|a| a.concretize(params)).collect()
    };
    let invariants: Vec<Vec<ConcreteAtom>> =
        pta.invariants.iter().map(|c| concretize(&c.atoms)).collect::<Result<_>>()?;
    let guards: Vec<Vec<ConcreteAtom>> =
        pta.transitions.iter().map(|t| concretize(&t.guard.atoms)).collect::<Result<_>>()?;
    let target_atoms: Vec<ConcreteAtom> =
        target.atoms().into_iter().map(|a| a.concretize(params)).collect::<Result<_>>()?;

    let mut k = 0i64;
    for a in invariants.iter().chain(&guards).flatten().chain(&target_atoms) {
        if let ConcreteAtom::Bound { lhs, bound, .. } = a {
            if *lhs != ClockTerm::Zero {
                k = k.max(bound.abs());
            }
        }
    }
    let b = pta.reset_constants().max().unwrap_or(0) as i64;
    for c in [k, b] {
        if c > cap {
            return Err(Error::CapExceeded { constant: c, cap });
        }
    }
    let ctx = Ctx { n: pta.num_clocks(), k, kc: k + b };

    let init = ctx.initial();
    if !holds_all(&ctx, &init, &invariants[pta.init.0]) {
        return Ok(false);
    }
    let mut seen: HashSet<(LocId, Region)> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert((pta.init, init.clone()));
    queue.push_back((pta.init, init));
    while let Some((q, r)) = queue.pop_front() {
        if eval(&ctx, target, q, &r, params)? {
            return Ok(true);
        }
        let mut succ = Vec::new();
        if let Some(next) = ctx.time_successor(&r) {
            if next != r && holds_all(&ctx, &next, &invariants[q.0]) {
                succ.push((q, next));
            }
        }
        for (t, guard) in pta.transitions.iter().zip(&guards) {
            if t.src != q || !holds_all(&ctx, &r, guard) {
                continue;
            }
            let mut next = r.clone();
            for (x, v) in t.resets.iter() {
                ctx.reset(&mut next, x.0, v as i64);
            }
            if holds_all(&ctx, &next, &invariants[t.dst.0]) {
                succ.push((t.dst, next));
            }
        }
        for s in succ {
            if seen.insert(s.clone()) {
                queue.push_back(s);
            }
        }
    }
    Ok(false)
}
