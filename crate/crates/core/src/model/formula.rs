use crate::error::Result;
use crate::model::constraint::Atom;
use crate::model::expr::LinearExpr;
use crate::model::pta::LocId;
use crate::model::valuation::{ClockValuation, ParamValuation};

/// State predicate: clock atoms, location atoms and Boolean connectives.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum StateFormula {
    True,
    False,
    Atom(Atom),
    Loc(LocId),
    Not(Box<StateFormula>),
    And(Box<StateFormula>, Box<StateFormula>),
    Or(Box<StateFormula>, Box<StateFormula>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    /// `E<>`
    Exists,
    /// `A[]`
    Forall,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Property {
    pub quantifier: Quantifier,
    pub formula: StateFormula,
}

/// Literal of a formula in negation normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Literal {
    /// Location atom, possibly negated.
    Loc {
        loc: LocId,
        positive: bool,
    },
    Atom(Atom),
}

impl StateFormula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> StateFormula {
        StateFormula::Not(Box::new(self))
    }

    pub fn and(self, other: StateFormula) -> StateFormula {
        StateFormula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: StateFormula) -> StateFormula {
        StateFormula::Or(Box::new(self), Box::new(other))
    }

    pub fn holds(&self, q: LocId, params: &ParamValuation, clocks: &ClockValuation) -> Result<bool> {
        Ok(match self {
            StateFormula::True => true,
            StateFormula::False => false,
            StateFormula::Atom(a) => a.holds(params, clocks)?,
            StateFormula::Loc(l) => *l == q,
            StateFormula::Not(f) => !f.holds(q, params, clocks)?,
            StateFormula::And(a, b) => a.holds(q, params, clocks)? && b.holds(q, params, clocks)?,
            StateFormula::Or(a, b) => a.holds(q, params, clocks)? || b.holds(q, params, clocks)?,
        })
    }

    /// Disjunctive normal form with negations pushed into the literals.
    ///
    /// `[]` is `false`; a conjunct `[]` is `true`.
    pub fn dnf(&self) -> Vec<Vec<Literal>> {
        self.dnf_signed(true)
    }

    fn dnf_signed(&self, positive: bool) -> Vec<Vec<Literal>> {
        match (self, positive) {
            (StateFormula::True, true) | (StateFormula::False, false) => vec![vec![]],
            (StateFormula::True, false) | (StateFormula::False, true) => vec![],
            (StateFormula::Atom(a), true) => vec![vec![Literal::Atom(a.clone())]],
            (StateFormula::Atom(a), false) => vec![vec![Literal::Atom(a.negate())]],
            (StateFormula::Loc(l), _) => vec![vec![Literal::Loc { loc: *l, positive }]],
            (StateFormula::Not(f), _) => f.dnf_signed(!positive),
            (StateFormula::And(a, b), true) | (StateFormula::Or(a, b), false) => {
                let left = a.dnf_signed(positive);
                let right = b.dnf_signed(positive);
                let mut out = Vec::with_capacity(left.len() * right.len());
                for l in &left {
                    for r in &right {
                        let mut c = l.clone();
                        c.extend(r.iter().cloned());
                        out.push(c);
                    }
                }
                out
            }
            (StateFormula::Or(a, b), true) | (StateFormula::And(a, b), false) => {
                let mut out = a.dnf_signed(positive);
                out.extend(b.dnf_signed(positive));
                out
            }
        }
    }

    /// Clock atoms as written, ignoring polarity.
    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            StateFormula::Atom(a) => out.push(a),
            StateFormula::Not(f) => f.collect_atoms(out),
            StateFormula::And(a, b) | StateFormula::Or(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            _ => {}
        }
    }

    /// Atoms with the polarity they take in negation normal form.
    pub fn nnf_atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.collect_nnf_atoms(true, &mut out);
        out
    }

    fn collect_nnf_atoms(&self, positive: bool, out: &mut Vec<Atom>) {
        match self {
            StateFormula::Atom(a) if positive => out.push(a.clone()),
            StateFormula::Atom(a) => out.push(a.negate()),
            StateFormula::Not(f) => f.collect_nnf_atoms(!positive, out),
            StateFormula::And(a, b) | StateFormula::Or(a, b) => {
                a.collect_nnf_atoms(positive, out);
                b.collect_nnf_atoms(positive, out);
            }
            _ => {}
        }
    }

    pub fn map_exprs(&self, f: &impl Fn(&LinearExpr) -> LinearExpr) -> StateFormula {
        match self {
            StateFormula::Atom(a) => StateFormula::Atom(a.map_expr(f)),
            StateFormula::Not(x) => x.map_exprs(f).not(),
            StateFormula::And(a, b) => a.map_exprs(f).and(b.map_exprs(f)),
            StateFormula::Or(a, b) => a.map_exprs(f).or(b.map_exprs(f)),
            other => other.clone(),
        }
    }

    pub fn locations(&self) -> Vec<LocId> {
        match self {
            StateFormula::Loc(l) => vec![*l],
            StateFormula::Not(f) => f.locations(),
            StateFormula::And(a, b) | StateFormula::Or(a, b) => {
                let mut v = a.locations();
                v.extend(b.locations());
                v
            }
            _ => vec![],
        }
    }
}

impl Property {
    pub fn exists(formula: StateFormula) -> Self {
        Property { quantifier: Quantifier::Exists, formula }
    }

    pub fn forall(formula: StateFormula) -> Self {
        Property { quantifier: Quantifier::Forall, formula }
    }

    /// The formula whose reachability decides the property: `phi` for `E<> phi`,
    /// `not phi` for `A[] phi` (whose verdict is then negated).
    pub fn reach_target(&self) -> StateFormula {
        match self.quantifier {
            Quantifier::Exists => self.formula.clone(),
            Quantifier::Forall => self.formula.clone().not(),
        }
    }

    /// `E<> not phi` for `A[] phi` and vice versa.
    pub fn dual(&self) -> Property {
        match self.quantifier {
            Quantifier::Exists => Property::forall(self.formula.clone().not()),
            Quantifier::Forall => Property::exists(self.formula.clone().not()),
        }
    }

    pub fn map_exprs(&self, f: &impl Fn(&LinearExpr) -> LinearExpr) -> Property {
        Property { quantifier: self.quantifier, formula: self.formula.map_exprs(f) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ClockId, Rel};

    #[test]
    fn dnf_pushes_negation_into_atoms() {
        let a = Atom::upper(ClockId(0), Rel::Le, LinearExpr::constant(3));
        let f = StateFormula::Atom(a.clone()).or(StateFormula::Loc(LocId(1))).not();
        let dnf = f.dnf();
        assert_eq!(dnf.len(), 1);
        assert_eq!(dnf[0], vec![Literal::Atom(a.negate()), Literal::Loc { loc: LocId(1), positive: false }]);
    }

    #[test]
    fn dnf_of_constants() {
        assert_eq!(StateFormula::True.dnf(), vec![Vec::<Literal>::new()]);
        assert!(StateFormula::False.dnf().is_empty());
        assert!(StateFormula::True.not().dnf().is_empty());
    }
}
