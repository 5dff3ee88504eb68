use std::collections::BTreeSet;

use serde::Serialize;

use crate::model::constraint::{Atom, ClockId};
use crate::model::expr::ParamId;
use crate::model::formula::Property;
use crate::model::pta::Pta;

/// Sign-of-occurrence class of a parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamClass {
    Unused,
    /// Occurs only with negative coefficients.
    Lower,
    /// Occurs only with positive coefficients.
    Upper,
    Mixed,
}

impl ParamClass {
    fn observe(self, coeff: i64) -> ParamClass {
        use ParamClass::*;
        let seen = if coeff > 0 { Upper } else { Lower };
        match self {
            Unused => seen,
            same if same == seen => same,
            _ => Mixed,
        }
    }
}

/// Atoms that constrain the reachability check of `property` on `pta`: all guards and
/// invariants plus the target formula's atoms with their negation-normal-form polarity.
pub fn reach_atoms(pta: &Pta, property: &Property) -> Vec<Atom> {
    let mut atoms: Vec<Atom> = pta.atoms().cloned().collect();
    atoms.extend(property.reach_target().nnf_atoms());
    atoms
}

/// Classifies every parameter of `pta` as lower, upper, mixed or unused.
///
/// Property atoms are classified by the polarity they take in the reachability target
/// (`phi` for `E<>`, `not phi` for `A[]`), which is the formula the checker intersects
/// with reachable states.
pub fn classify_params(pta: &Pta, property: &Property) -> Vec<ParamClass> {
    let mut classes = vec![ParamClass::Unused; pta.num_params()];
    for atom in reach_atoms(pta, property) {
        for (p, c) in atom.expr.terms() {
            classes[p.0] = classes[p.0].observe(c);
        }
    }
    classes
}

/// True when no parameter is mixed.
pub fn is_lu(classes: &[ParamClass]) -> bool {
    classes.iter().all(|c| *c != ParamClass::Mixed)
}

/// `maxC(A)`: largest absolute constant term over guards, invariants and reset values.
pub fn max_constant_model(pta: &Pta) -> u64 {
    pta.expressions().map(|e| e.con().unsigned_abs()).chain(pta.reset_constants()).max().unwrap_or(0)
}

/// `maxV(psi)`: largest absolute constant among the property's atoms.
pub fn max_constant_property(property: &Property) -> u64 {
    property.formula.atoms().iter().map(|a| a.expr.con().unsigned_abs()).max().unwrap_or(0)
}

/// `C = 2 * max(maxC(A), maxV(psi)) + 2`.
pub fn constant_c(pta: &Pta, property: &Property) -> u64 {
    2 * max_constant_model(pta).max(max_constant_property(property)) + 2
}

/// Clocks occurring in some atom with a parameter in the reachability check.
pub fn parametric_clocks(pta: &Pta, property: &Property) -> BTreeSet<ClockId> {
    reach_atoms(pta, property).iter().filter(|a| a.is_parametric()).flat_map(|a| a.clocks()).collect()
}

/// Clocks occurring in any atom of the model or the property.
pub fn active_clocks(pta: &Pta, property: &Property) -> BTreeSet<ClockId> {
    reach_atoms(pta, property).iter().flat_map(|a| a.clocks()).collect()
}

/// Parameters occurring in the model or the property.
pub fn used_params(pta: &Pta, property: &Property) -> BTreeSet<ParamId> {
    reach_atoms(pta, property).iter().flat_map(|a| a.expr.params().collect::<Vec<_>>()).collect()
}
