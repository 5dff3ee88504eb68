use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::constraint::{Atom, ClockId, Resets, SimpleConstraint};
use crate::model::expr::{LinearExpr, ParamId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocId(pub usize);

/// `q --g & a [u]--> q'`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub src: LocId,
    pub guard: SimpleConstraint,
    pub action: String,
    pub resets: Resets,
    pub dst: LocId,
}

/// Parametric timed automaton `(Sigma, Q, q0, I, ->)` over declared clocks and parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pta {
    pub name: String,
    pub clocks: Vec<String>,
    pub params: Vec<String>,
    pub locations: Vec<String>,
    pub init: LocId,
    pub invariants: Vec<SimpleConstraint>,
    pub transitions: Vec<Transition>,
}

impl Pta {
    /// Builds and validates an automaton. The action alphabet is the set of transition labels.
    pub fn new(
        name: impl Into<String>,
        clocks: Vec<String>,
        params: Vec<String>,
        locations: Vec<String>,
        init: LocId,
        invariants: Vec<SimpleConstraint>,
        transitions: Vec<Transition>,
    ) -> Result<Self> {
        let pta = Pta { name: name.into(), clocks, params, locations, init, invariants, transitions };
        pta.validate()?;
        Ok(pta)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidModel(msg));
        if self.init.0 >= self.locations.len() {
            return bad("initial location is not declared".into());
        }
        if self.invariants.len() != self.locations.len() {
            return bad("one invariant per location is required".into());
        }
        let check_atom = |atom: &Atom| -> Result<()> {
            for x in atom.clocks() {
                if x.0 >= self.clocks.len() {
                    return Err(Error::InvalidModel(format!("undeclared clock #{}", x.0)));
                }
            }
            if let crate::model::ClockTerm::Diff(x, y) = atom.lhs {
                if x == y {
                    return Err(Error::InvalidModel("difference of a clock with itself".into()));
                }
            }
            for p in atom.expr.params() {
                if p.0 >= self.params.len() {
                    return Err(Error::InvalidModel(format!("undeclared parameter #{}", p.0)));
                }
            }
            Ok(())
        };
        for inv in &self.invariants {
            inv.atoms.iter().try_for_each(check_atom)?;
        }
        for t in &self.transitions {
            if t.src.0 >= self.locations.len() || t.dst.0 >= self.locations.len() {
                return bad("transition endpoint is not a declared location".into());
            }
            t.guard.atoms.iter().try_for_each(check_atom)?;
            for (x, _) in t.resets.iter() {
                if x.0 >= self.clocks.len() {
                    return bad(format!("reset of undeclared clock #{}", x.0));
                }
            }
        }
        Ok(())
    }

    pub fn num_clocks(&self) -> usize {
        self.clocks.len()
    }

    pub fn num_params(&self) -> usize {
        self.params.len()
    }

    pub fn clock_ids(&self) -> impl Iterator<Item = ClockId> {
        (0..self.clocks.len()).map(ClockId)
    }

    pub fn param_ids(&self) -> impl Iterator<Item = ParamId> {
        (0..self.params.len()).map(ParamId)
    }

    pub fn actions(&self) -> BTreeSet<&str> {
        self.transitions.iter().map(|t| t.action.as_str()).collect()
    }

    pub fn invariant(&self, q: LocId) -> &SimpleConstraint {
        &self.invariants[q.0]
    }

    pub fn location_id(&self, name: &str) -> Option<LocId> {
        self.locations.iter().position(|l| l == name).map(LocId)
    }

    pub fn clock_id(&self, name: &str) -> Option<ClockId> {
        self.clocks.iter().position(|c| c == name).map(ClockId)
    }

    pub fn param_id(&self, name: &str) -> Option<ParamId> {
        self.params.iter().position(|p| p == name).map(ParamId)
    }

    pub fn outgoing(&self, q: LocId) -> impl Iterator<Item = (usize, &Transition)> {
        self.transitions.iter().enumerate().filter(move |(_, t)| t.src == q)
    }

    /// Every atom of every guard and invariant.
    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.invariants
            .iter()
            .flat_map(|c| c.atoms.iter())
            .chain(self.transitions.iter().flat_map(|t| t.guard.atoms.iter()))
    }

    /// `expr(A)`: expressions of guards and invariants.
    pub fn expressions(&self) -> impl Iterator<Item = &LinearExpr> {
        self.atoms().map(|a| &a.expr)
    }

    pub fn reset_constants(&self) -> impl Iterator<Item = u64> + '_ {
        self.transitions.iter().flat_map(|t| t.resets.iter().map(|(_, b)| b))
    }

    /// Rewrites every expression of the automaton.
    pub fn map_exprs(&self, f: impl Fn(&LinearExpr) -> LinearExpr) -> Pta {
        let map =
            |c: &SimpleConstraint| SimpleConstraint::new(c.atoms.iter().map(|a| a.map_expr(&f)).collect());
        Pta {
            name: self.name.clone(),
            clocks: self.clocks.clone(),
            params: self.params.clone(),
            locations: self.locations.clone(),
            init: self.init,
            invariants: self.invariants.iter().map(map).collect(),
            transitions: self
                .transitions
                .iter()
                .map(|t| Transition { guard: map(&t.guard), ..t.clone() })
                .collect(),
        }
    }
}
