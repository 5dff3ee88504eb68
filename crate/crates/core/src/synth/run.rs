//! Syntactic runs, the target encoding `alpha` and invariant stripping `beta`.

use crate::error::{Error, Result};
use crate::mc;
use crate::model::{
    Literal, LocId, ParamValuation, Property, Pta, Resets, SimpleConstraint, StateFormula, Transition,
};

/// One step `g & a [u]` of a syntactic run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunEdge {
    pub guard: SimpleConstraint,
    pub action: String,
    pub resets: Resets,
}

/// `(q0, I0) -g1&a1[u1]-> (q1, I1) ... -gl&al[ul]-> (ql, Il)`.
///
/// `locs.len() == invariants.len() == steps.len() + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntacticRun {
    pub locs: Vec<LocId>,
    pub invariants: Vec<SimpleConstraint>,
    pub steps: Vec<RunEdge>,
}

impl SyntacticRun {
    /// The run following `transitions` from the initial location.
    pub fn from_transitions(pta: &Pta, transitions: &[usize]) -> Result<Self> {
        let mut locs = vec![pta.init];
        let mut steps = Vec::with_capacity(transitions.len());
        for &t in transitions {
            let tr =
                pta.transitions.get(t).ok_or_else(|| Error::InvalidModel(format!("no transition {t}")))?;
            if tr.src != *locs.last().unwrap() {
                return Err(Error::InvalidModel(format!(
                    "transition {t} does not leave location {}",
                    pta.locations[locs.last().unwrap().0]
                )));
            }
            locs.push(tr.dst);
            steps.push(RunEdge {
                guard: tr.guard.clone(),
                action: tr.action.clone(),
                resets: tr.resets.clone(),
            });
        }
        let invariants = locs.iter().map(|&q| pta.invariant(q).clone()).collect();
        Ok(SyntacticRun { locs, invariants, steps })
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn last_loc(&self) -> LocId {
        *self.locs.last().unwrap()
    }

    /// `A_tau`: a chain automaton with locations `s0..sl` and transition `i` leaving `si`,
    /// over the clocks and parameters of `pta`.
    pub fn automaton(&self, pta: &Pta) -> Pta {
        let transitions = self
            .steps
            .iter()
            .enumerate()
            .map(|(i, e)| Transition {
                src: LocId(i),
                guard: e.guard.clone(),
                action: e.action.clone(),
                resets: e.resets.clone(),
                dst: LocId(i + 1),
            })
            .collect();
        Pta {
            name: format!("{}_run", pta.name),
            clocks: pta.clocks.clone(),
            params: pta.params.clone(),
            locations: (0..self.locs.len()).map(|i| format!("s{i}")).collect(),
            init: LocId(0),
            invariants: self.invariants.clone(),
            transitions,
        }
    }

    /// `R(A_tau[gamma])` is nonempty: the last location of the chain is reachable.
    pub fn is_feasible(&self, pta: &Pta, params: &ParamValuation) -> Result<bool> {
        let chain = self.automaton(pta);
        let target = StateFormula::Loc(LocId(self.len()));
        mc::check(&chain, params, &Property::exists(target))
    }

    /// `alpha(tau)` split into one run per disjunct of `alpha(phi, ql)`, each conjoined to
    /// the invariant of the last location. Empty when the encoding is `false`.
    pub fn encode_target(&self, phi: &StateFormula) -> Vec<SyntacticRun> {
        encode_alpha(phi, self.last_loc())
            .dnf()
            .into_iter()
            .map(|conj| {
                let extra = conj
                    .into_iter()
                    .map(|lit| match lit {
                        Literal::Atom(a) => a,
                        Literal::Loc { .. } => unreachable!("alpha removes location atoms"),
                    })
                    .collect();
                let mut run = self.clone();
                let last = run.invariants.last_mut().unwrap();
                *last = last.and(&SimpleConstraint::new(extra));
                run
            })
            .collect()
    }

    /// `beta(tau)`: invariants become `true` and guard `i` becomes
    /// `g_i && I_{q_{i-1}} && I_{q_i}[u_i]`.
    pub fn strip_invariants(&self) -> SyntacticRun {
        let steps = self
            .steps
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let post = self.invariants[i + 1].atoms.iter().map(|a| a.after_reset(&e.resets)).collect();
                RunEdge {
                    guard: e.guard.and(&self.invariants[i]).and(&SimpleConstraint::new(post)),
                    ..e.clone()
                }
            })
            .collect();
        SyntacticRun {
            locs: self.locs.clone(),
            invariants: vec![SimpleConstraint::truth(); self.locs.len()],
            steps,
        }
    }

    pub fn has_resets(&self) -> bool {
        self.steps.iter().any(|e| !e.resets.is_empty())
    }

    pub fn has_invariants(&self) -> bool {
        self.invariants.iter().any(|i| !i.is_true())
    }
}

/// `alpha(phi, q)`: location atoms become `true` at `q` and `false` elsewhere; clock atoms
/// and connectives are kept. Constant subformulas are folded.
pub fn encode_alpha(phi: &StateFormula, q: LocId) -> StateFormula {
    use StateFormula::*;
    match phi {
        True | False | Atom(_) => phi.clone(),
        Loc(l) => {
            if *l == q {
                True
            } else {
                False
            }
        }
        Not(f) => match encode_alpha(f, q) {
            True => False,
            False => True,
            g => g.not(),
        },
        And(a, b) => match (encode_alpha(a, q), encode_alpha(b, q)) {
            (False, _) | (_, False) => False,
            (True, g) | (g, True) => g,
            (g, h) => g.and(h),
        },
        Or(a, b) => match (encode_alpha(a, q), encode_alpha(b, q)) {
            (True, _) | (_, True) => True,
            (False, g) | (g, False) => g,
            (g, h) => g.or(h),
        },
    }
}
