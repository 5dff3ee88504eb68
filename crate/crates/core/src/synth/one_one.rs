use crate::error::{Error, Result};
use crate::model::{constant_c, ParamValuation, Property, Pta};
use crate::synth::{decide, existential_dual, mode_obstacle, region_1d, Method, Mode, SynthesisResult};

/// Feasible region of a one-one automaton.
///
/// `E<> phi`: verdicts stabilize from `C` on, so the region is the feasible part of
/// `0..C` plus `[C, inf)` when `p = C` is feasible. `A[] phi`: complement of `E<> not phi`.
///
/// Clocks other than the parametric one may be reset but must not occur in constraints;
/// with such clocks the stabilization bound does not hold.
pub fn synth_one_one(pta: &Pta, property: &Property) -> Result<SynthesisResult> {
    if let Some(why) = mode_obstacle(pta, property, Mode::OneOne) {
        return Err(Error::Precondition(why));
    }
    if let Some(primal) = existential_dual(property) {
        return Ok(synth_one_one(pta, &primal)?.complemented());
    }
    let c = constant_c(pta, property);
    let candidates = (0..=c).map(|v| ParamValuation::finite(&[v])).collect();
    let checks = decide(pta, property, candidates)?;
    let feasible_below = (0..c).filter(|&v| checks[v as usize].verdict);
    let tail = checks[c as usize].verdict.then_some(c);
    let mut result = SynthesisResult::new(region_1d(feasible_below, tail), Method::OneOne);
    result.constant_c = Some(c);
    result.certificate_checks = checks;
    Ok(result)
}
