use std::collections::BTreeMap;

use crate::error::Result;
use crate::model::expr::{ExtInt, LinearExpr};
use crate::model::valuation::{ClockValuation, ParamValuation, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClockId(pub usize);

/// `<` or `<=`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Lt,
    Le,
}

impl Rel {
    pub fn is_strict(self) -> bool {
        self == Rel::Lt
    }

    /// Relation of the negated atom after moving to the other side.
    pub fn flip(self) -> Rel {
        match self {
            Rel::Lt => Rel::Le,
            Rel::Le => Rel::Lt,
        }
    }

    pub fn holds(self, lhs: Rat, rhs: Rat) -> bool {
        match self {
            Rel::Lt => lhs < rhs,
            Rel::Le => lhs <= rhs,
        }
    }
}

/// Left-hand side of an atomic constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClockTerm {
    /// `x`
    Clock(ClockId),
    /// `-x`
    Neg(ClockId),
    /// `x - y`, with `x != y`
    Diff(ClockId, ClockId),
    /// The constant `0`; only produced by substituting resets into atoms.
    Zero,
}

impl ClockTerm {
    pub fn negate(self) -> ClockTerm {
        match self {
            ClockTerm::Clock(x) => ClockTerm::Neg(x),
            ClockTerm::Neg(x) => ClockTerm::Clock(x),
            ClockTerm::Diff(x, y) => ClockTerm::Diff(y, x),
            ClockTerm::Zero => ClockTerm::Zero,
        }
    }

    pub fn clocks(self) -> Vec<ClockId> {
        match self {
            ClockTerm::Clock(x) | ClockTerm::Neg(x) => vec![x],
            ClockTerm::Diff(x, y) => vec![x, y],
            ClockTerm::Zero => vec![],
        }
    }

    pub fn value(self, clocks: &ClockValuation) -> Rat {
        match self {
            ClockTerm::Clock(x) => clocks.get(x),
            ClockTerm::Neg(x) => -clocks.get(x),
            ClockTerm::Diff(x, y) => clocks.get(x) - clocks.get(y),
            ClockTerm::Zero => Rat::from_integer(0),
        }
    }

    /// DBM indices `(i, j)` such that the term is `x_i - x_j`, index 0 being the zero clock.
    pub fn dbm_indices(self) -> (usize, usize) {
        match self {
            ClockTerm::Clock(x) => (x.0 + 1, 0),
            ClockTerm::Neg(x) => (0, x.0 + 1),
            ClockTerm::Diff(x, y) => (x.0 + 1, y.0 + 1),
            ClockTerm::Zero => (0, 0),
        }
    }

    pub fn is_diagonal(self) -> bool {
        matches!(self, ClockTerm::Diff(..))
    }
}

/// `lhs rel expr`, e.g. `x - y < 2*p + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub lhs: ClockTerm,
    pub rel: Rel,
    pub expr: LinearExpr,
}

/// An atom after substituting a parameter valuation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConcreteAtom {
    True,
    False,
    Bound { lhs: ClockTerm, rel: Rel, bound: i64 },
}

impl ConcreteAtom {
    pub fn negate(self) -> ConcreteAtom {
        match self {
            ConcreteAtom::True => ConcreteAtom::False,
            ConcreteAtom::False => ConcreteAtom::True,
            ConcreteAtom::Bound { lhs, rel, bound } => {
                ConcreteAtom::Bound { lhs: lhs.negate(), rel: rel.flip(), bound: -bound }
            }
        }
    }

    pub fn holds(self, clocks: &ClockValuation) -> bool {
        match self {
            ConcreteAtom::True => true,
            ConcreteAtom::False => false,
            ConcreteAtom::Bound { lhs, rel, bound } => rel.holds(lhs.value(clocks), Rat::from_integer(bound)),
        }
    }
}

impl Atom {
    pub fn new(lhs: ClockTerm, rel: Rel, expr: LinearExpr) -> Self {
        Atom { lhs, rel, expr }
    }

    /// `x rel e`
    pub fn upper(x: ClockId, rel: Rel, expr: LinearExpr) -> Self {
        Atom::new(ClockTerm::Clock(x), rel, expr)
    }

    /// `x > e` (strict) or `x >= e`, stored as `-x < -e` / `-x <= -e`.
    pub fn lower(x: ClockId, strict: bool, expr: LinearExpr) -> Self {
        let rel = if strict { Rel::Lt } else { Rel::Le };
        Atom::new(ClockTerm::Neg(x), rel, -expr)
    }

    pub fn diff(x: ClockId, y: ClockId, rel: Rel, expr: LinearExpr) -> Self {
        Atom::new(ClockTerm::Diff(x, y), rel, expr)
    }

    /// The complementary atom: `not (t rel e)` is `-t flip(rel) -e`.
    pub fn negate(&self) -> Atom {
        Atom { lhs: self.lhs.negate(), rel: self.rel.flip(), expr: -self.expr.clone() }
    }

    pub fn clocks(&self) -> Vec<ClockId> {
        self.lhs.clocks()
    }

    pub fn is_parametric(&self) -> bool {
        !self.expr.is_concrete()
    }

    pub fn concretize(&self, params: &ParamValuation) -> Result<ConcreteAtom> {
        Ok(match self.expr.evaluate(params)? {
            ExtInt::PosInf => ConcreteAtom::True,
            ExtInt::NegInf => ConcreteAtom::False,
            ExtInt::Fin(bound) => ConcreteAtom::Bound { lhs: self.lhs, rel: self.rel, bound },
        })
    }

    /// `(gamma, omega) |= atom`; `t < inf` is true and `t < -inf` false.
    pub fn holds(&self, params: &ParamValuation, clocks: &ClockValuation) -> Result<bool> {
        Ok(self.concretize(params)?.holds(clocks))
    }

    pub fn map_expr(&self, f: impl Fn(&LinearExpr) -> LinearExpr) -> Atom {
        Atom { lhs: self.lhs, rel: self.rel, expr: f(&self.expr) }
    }

    /// `atom[u]`: substitutes reset constants for reset clocks. When every clock of the
    /// atom is reset the result is a clock-free `0 rel e'`.
    pub fn after_reset(&self, resets: &Resets) -> Atom {
        let value = |x: ClockId| resets.get(x).map(|b| b as i64);
        let (lhs, shift) = match self.lhs {
            // b rel e  <=>  0 rel e - b
            ClockTerm::Clock(x) => match value(x) {
                Some(b) => (ClockTerm::Zero, -b),
                None => (self.lhs, 0),
            },
            ClockTerm::Neg(x) => match value(x) {
                Some(b) => (ClockTerm::Zero, b),
                None => (self.lhs, 0),
            },
            ClockTerm::Diff(x, y) => match (value(x), value(y)) {
                (Some(bx), Some(by)) => (ClockTerm::Zero, by - bx),
                (Some(bx), None) => (ClockTerm::Neg(y), -bx),
                (None, Some(by)) => (ClockTerm::Clock(x), by),
                (None, None) => (self.lhs, 0),
            },
            ClockTerm::Zero => (ClockTerm::Zero, 0),
        };
        Atom::new(lhs, self.rel, self.expr.clone() + shift)
    }

    /// True for clock-free atoms that hold for every parameter valuation over the naturals.
    pub fn is_trivially_true(&self) -> bool {
        self.lhs == ClockTerm::Zero
            && self.expr.terms().all(|(_, c)| c >= 0)
            && match self.rel {
                Rel::Lt => self.expr.con() > 0,
                Rel::Le => self.expr.con() >= 0,
            }
    }
}

/// Finite conjunction of atoms; the empty conjunction is `true`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SimpleConstraint {
    pub atoms: Vec<Atom>,
}

impl SimpleConstraint {
    pub fn truth() -> Self {
        SimpleConstraint { atoms: Vec::new() }
    }

    pub fn new(atoms: Vec<Atom>) -> Self {
        SimpleConstraint { atoms }
    }

    pub fn is_true(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn and(&self, other: &SimpleConstraint) -> SimpleConstraint {
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        SimpleConstraint { atoms }
    }

    /// Sorted, duplicate-free copy.
    pub fn normalized(&self) -> SimpleConstraint {
        let mut atoms = self.atoms.clone();
        atoms.sort();
        atoms.dedup();
        SimpleConstraint { atoms }
    }

    pub fn holds(&self, params: &ParamValuation, clocks: &ClockValuation) -> Result<bool> {
        for atom in &self.atoms {
            if !atom.holds(params, clocks)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn concretize(&self, params: &ParamValuation) -> Result<Vec<ConcreteAtom>> {
        self.atoms.iter().map(|a| a.concretize(params)).collect()
    }
}

/// `(gamma, omega) |= g`
pub fn satisfies(params: &ParamValuation, clocks: &ClockValuation, guard: &SimpleConstraint) -> Result<bool> {
    guard.holds(params, clocks)
}

/// Update set `x := b`, at most one assignment per clock.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Resets(BTreeMap<ClockId, u64>);

impl Resets {
    pub fn none() -> Self {
        Resets(BTreeMap::new())
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (ClockId, u64)>) -> Self {
        Resets(pairs.into_iter().collect())
    }

    pub fn insert(&mut self, x: ClockId, b: u64) -> Option<u64> {
        self.0.insert(x, b)
    }

    pub fn get(&self, x: ClockId) -> Option<u64> {
        self.0.get(&x).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ClockId, u64)> + '_ {
        self.0.iter().map(|(&x, &b)| (x, b))
    }

    pub fn apply(&self, clocks: &ClockValuation) -> ClockValuation {
        let mut out = clocks.clone();
        for (x, b) in self.iter() {
            out.set(x, Rat::from_integer(b as i64));
        }
        out
    }
}
