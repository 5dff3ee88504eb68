//! `A[gamma]` as DBM constraints.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::mc::dbm::{self, Bound, Dbm};
use crate::model::{Atom, ClockTerm, ConcreteAtom, Literal, LocId, ParamValuation, Pta, StateFormula};

/// `x_i - x_j <= b` in DBM indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cons {
    pub i: usize,
    pub j: usize,
    pub b: Bound,
}

impl Cons {
    pub fn negate(self) -> Cons {
        Cons { i: self.j, j: self.i, b: dbm::negate(self.b) }
    }
}

/// A conjunction after substituting `gamma`; `None` is unsatisfiable.
pub type Conj = Option<Vec<Cons>>;

fn compile_atom(atom: &Atom, params: &ParamValuation) -> Result<Option<Option<Cons>>> {
    // Some(None) is a dropped (true) atom, None a false one.
    Ok(match atom.concretize(params)? {
        ConcreteAtom::True => Some(None),
        ConcreteAtom::False => None,
        ConcreteAtom::Bound { lhs: ClockTerm::Zero, rel, bound } => {
            let holds = if rel.is_strict() { 0 < bound } else { 0 <= bound };
            holds.then_some(None)
        }
        ConcreteAtom::Bound { lhs, rel, bound } => {
            let (i, j) = lhs.dbm_indices();
            Some(Some(Cons { i, j, b: dbm::bound(bound, rel.is_strict()) }))
        }
    })
}

pub fn compile_atoms<'a>(atoms: impl IntoIterator<Item = &'a Atom>, params: &ParamValuation) -> Result<Conj> {
    let mut out = Vec::new();
    for a in atoms {
        match compile_atom(a, params)? {
            None => return Ok(None),
            Some(Some(c)) => out.push(c),
            Some(None) => {}
        }
    }
    Ok(Some(out))
}

/// One disjunct of the target formula.
#[derive(Clone, Debug)]
pub struct TargetDisjunct {
    pub locs: Vec<(LocId, bool)>,
    pub cons: Vec<Cons>,
}

impl TargetDisjunct {
    pub fn matches_loc(&self, q: LocId) -> bool {
        self.locs.iter().all(|&(l, pos)| (l == q) == pos)
    }
}

#[derive(Clone, Debug)]
pub struct CompiledTransition {
    pub src: LocId,
    pub dst: LocId,
    pub guard: Vec<Cons>,
    pub resets: Vec<(usize, i64)>,
}

/// The concrete timed automaton `A[gamma]` plus a compiled reachability target.
#[derive(Clone, Debug)]
pub struct ConcreteTa {
    pub clocks: usize,
    pub init: LocId,
    pub invariants: Vec<Conj>,
    /// Indexed like the source transitions; `None` when the guard is unsatisfiable.
    pub transitions: Vec<Option<CompiledTransition>>,
    pub target: Vec<TargetDisjunct>,
    /// Per-DBM-index maximal constant; `k[0] = 0`.
    pub k: Vec<i64>,
    /// Diagonal constraints, each listed once up to negation.
    pub diagonals: Vec<Cons>,
}

impl ConcreteTa {
    pub fn new(pta: &Pta, params: &ParamValuation, target: Option<&StateFormula>) -> Result<Self> {
        let invariants =
            pta.invariants.iter().map(|c| compile_atoms(&c.atoms, params)).collect::<Result<Vec<_>>>()?;
        let mut transitions = Vec::with_capacity(pta.transitions.len());
        for t in &pta.transitions {
            transitions.push(compile_atoms(&t.guard.atoms, params)?.map(|guard| CompiledTransition {
                src: t.src,
                dst: t.dst,
                guard,
                resets: t.resets.iter().map(|(x, b)| (x.0 + 1, b as i64)).collect(),
            }));
        }
        let mut disjuncts = Vec::new();
        if let Some(f) = target {
            for conj in f.dnf() {
                let mut locs = Vec::new();
                let mut atoms = Vec::new();
                for lit in conj {
                    match lit {
                        Literal::Loc { loc, positive } => locs.push((loc, positive)),
                        Literal::Atom(a) => atoms.push(a),
                    }
                }
                if let Some(cons) = compile_atoms(&atoms, params)? {
                    disjuncts.push(TargetDisjunct { locs, cons });
                }
            }
        }

        let n = pta.num_clocks() + 1;
        let mut k = vec![0i64; n];
        let mut diagonals = BTreeSet::new();
        let all_cons = invariants
            .iter()
            .flatten()
            .flatten()
            .chain(transitions.iter().flatten().flat_map(|t| t.guard.iter()))
            .chain(disjuncts.iter().flat_map(|d| d.cons.iter()));
        for c in all_cons {
            let v = dbm::bound_value(c.b).abs();
            k[c.i] = k[c.i].max(v);
            k[c.j] = k[c.j].max(v);
            if c.i != 0 && c.j != 0 {
                let neg = c.negate();
                diagonals.insert(if neg < *c { neg } else { *c });
            }
        }
        for t in transitions.iter().flatten() {
            for &(i, b) in &t.resets {
                k[i] = k[i].max(b);
            }
        }
        k[0] = 0;
        Ok(ConcreteTa {
            clocks: pta.num_clocks(),
            init: pta.init,
            invariants,
            transitions,
            target: disjuncts,
            k,
            diagonals: diagonals.into_iter().collect(),
        })
    }

    /// Splits `zone` along every diagonal, extrapolates each piece and restores the
    /// diagonal side it lies on. Keeps diagonal guards exact under extrapolation.
    pub fn normalize(&self, zone: Dbm) -> Vec<Dbm> {
        let mut pieces = vec![zone];
        for d in &self.diagonals {
            let mut next = Vec::with_capacity(pieces.len() * 2);
            for p in pieces {
                let mut inside = p.clone();
                let mut outside = p;
                if inside.constrain(d.i, d.j, d.b) {
                    next.push(inside);
                }
                let nd = d.negate();
                if outside.constrain(nd.i, nd.j, nd.b) {
                    next.push(outside);
                }
            }
            pieces = next;
        }
        let mut out = Vec::with_capacity(pieces.len());
        for mut p in pieces {
            let sides: Vec<Cons> = self
                .diagonals
                .iter()
                .map(|d| if p.satisfies(d.i, d.j, d.b) { *d } else { d.negate() })
                .collect();
            p.extrapolate(&self.k);
            if sides.iter().all(|c| p.constrain(c.i, c.j, c.b)) {
                out.push(p);
            }
        }
        out
    }
}

pub fn apply(zone: &mut Dbm, cons: &[Cons]) -> bool {
    cons.iter().all(|c| zone.constrain(c.i, c.j, c.b))
}
