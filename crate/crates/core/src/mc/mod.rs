//! Model checking of `A[gamma] |= psi` for concrete valuations.
//!
//! [`check`] explores the zone graph; [`check_bruteforce`] explores the region graph and
//! exists to cross-validate it. Both reduce `A[] phi` to `not E<> not phi`.

mod compile;
pub mod dbm;
mod regions;
mod run;
mod zone;

pub use dbm::Dbm;
pub use regions::DEFAULT_CAP;
pub use run::{replay, witness_run, ConcreteRun, RunStep, Witness};
pub use zone::{reach_zone_graph, SymState};

use crate::error::Result;
use crate::model::{ParamValuation, Property, Pta, Quantifier};

/// Zone-based verdict for `A[gamma] |= psi`.
pub fn check(pta: &Pta, params: &ParamValuation, property: &Property) -> Result<bool> {
    let hit = zone::reachable(pta, params, &property.reach_target())?;
    Ok(match property.quantifier {
        Quantifier::Exists => hit,
        Quantifier::Forall => !hit,
    })
}

/// Region-automaton verdict for `A[gamma] |= psi` with the default constant cap.
pub fn check_bruteforce(pta: &Pta, params: &ParamValuation, property: &Property) -> Result<bool> {
    check_bruteforce_capped(pta, params, property, DEFAULT_CAP)
}

pub fn check_bruteforce_capped(
    pta: &Pta,
    params: &ParamValuation,
    property: &Property,
    cap: i64,
) -> Result<bool> {
    let hit = regions::reachable_regions(pta, params, &property.reach_target(), cap)?;
    Ok(match property.quantifier {
        Quantifier::Exists => hit,
        Quantifier::Forall => !hit,
    })
}
