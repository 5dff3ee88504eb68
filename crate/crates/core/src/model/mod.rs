//! Immutable domain model: linear expressions, constraints, automata, valuations and
//! state properties.

mod analysis;
mod constraint;
mod expr;
mod formula;
mod pta;
mod valuation;

pub use analysis::{
    active_clocks, classify_params, constant_c, is_lu, max_constant_model, max_constant_property,
    parametric_clocks, reach_atoms, used_params, ParamClass,
};
pub use constraint::{satisfies, Atom, ClockId, ClockTerm, ConcreteAtom, Rel, Resets, SimpleConstraint};
pub use expr::{ExtInt, LinearExpr, ParamId};
pub use formula::{Literal, Property, Quantifier, StateFormula};
pub use pta::{LocId, Pta, Transition};
pub use valuation::{ClockValuation, ParamValuation, ParamValue, Rat};

use crate::error::{Error, Result};

/// Checks that `params` covers the model and assigns infinity only to upper-bound
/// parameters.
pub fn validate_valuation(pta: &Pta, property: &Property, params: &ParamValuation) -> Result<()> {
    if params.len() != pta.num_params() {
        return Err(Error::InvalidValuation(format!(
            "expected {} parameter values, got {}",
            pta.num_params(),
            params.len()
        )));
    }
    let classes = classify_params(pta, property);
    for (i, v) in params.values().iter().enumerate() {
        if *v == ParamValue::Inf && !matches!(classes[i], ParamClass::Upper | ParamClass::Unused) {
            return Err(Error::InvalidValuation(format!(
                "inf assigned to non-upper-bound parameter {}",
                pta.params[i]
            )));
        }
    }
    Ok(())
}
