//! Exact parameter synthesis.
//!
//! [`synth_one_one`] handles one parameter on one clock with any property shape;
//! [`synth_lu_one_param`], [`synth_l_only`] and [`synth_u_only`] handle L/U automata with
//! one parametrically constrained clock. Every procedure decides candidate valuations with
//! [`mc::check`] and records those calls as certificates. `A[] phi` is synthesized as the
//! complement of `E<> not phi`.
//!
//! [`bounds`] and [`run`] hold the run-level machinery (`alpha`, `beta`, effective bounds,
//! the simple-run generator), which is exposed for run extraction and testing but is not on
//! the decision path.

pub mod bounds;
mod lu;
mod one_one;
pub mod run;

pub use bounds::{
    bound_order_geq, bound_order_leq, elb, eup, gsr, theta, theta_run, BoundKind, EffectiveBound,
};
pub use lu::{lu_emptiness, synth_l_only, synth_lu_one_param, synth_u_only, zero_inf_valuation};
pub use one_one::synth_one_one;
pub use run::{encode_alpha, RunEdge, SyntacticRun};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mc;
use crate::model::{
    active_clocks, classify_params, parametric_clocks, ParamClass, ParamValuation, Property, Pta, Quantifier,
};
use crate::par;
use crate::region::{Interval, Region};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    OneOne,
    LuOneParam,
    LOnly,
    UOnly,
}

/// One oracle call made while synthesizing; reproducible with `mc::check` on the input
/// automaton and property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub valuation: ParamValuation,
    pub verdict: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthesisResult {
    pub region: Region,
    pub method: Method,
    /// Computed as the complement of the `E<> not phi` region.
    pub dual: bool,
    /// `C`, when the procedure scanned up to it.
    pub constant_c: Option<u64>,
    /// The witness-derived scan bound of the upper-parameter case.
    pub constant_b: Option<u64>,
    pub certificate_checks: Vec<Certificate>,
}

impl SynthesisResult {
    fn new(region: Region, method: Method) -> Self {
        SynthesisResult {
            region,
            method,
            dual: false,
            constant_c: None,
            constant_b: None,
            certificate_checks: Vec::new(),
        }
    }

    /// The `A[] phi` result from the `E<> not phi` one.
    fn complemented(self) -> Self {
        SynthesisResult {
            region: self.region.complement(),
            dual: true,
            certificate_checks: self
                .certificate_checks
                .into_iter()
                .map(|c| Certificate { verdict: !c.verdict, ..c })
                .collect(),
            ..self
        }
    }
}

/// Synthesis mode selection; `Auto` takes the first applicable exact mode in the order
/// one-one, L/U one-parameter, L-only, U-only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Auto,
    OneOne,
    LuOneParam,
    LOnly,
    UOnly,
}

/// `E<> not phi` for `A[] phi`; `None` for existential properties.
fn existential_dual(property: &Property) -> Option<Property> {
    match property.quantifier {
        Quantifier::Exists => None,
        Quantifier::Forall => Some(property.dual()),
    }
}

/// Checks every valuation, in parallel when enabled, and returns certificates in input order.
fn decide(pta: &Pta, property: &Property, valuations: Vec<ParamValuation>) -> Result<Vec<Certificate>> {
    let verdicts = par::try_map(&valuations, |v| mc::check(pta, v, property))?;
    Ok(valuations
        .into_iter()
        .zip(verdicts)
        .map(|(valuation, verdict)| Certificate { valuation, verdict })
        .collect())
}

/// The one-dimensional region of the given feasible points plus, when `tail` is set,
/// every value from `tail` on.
fn region_1d(points: impl IntoIterator<Item = u64>, tail: Option<u64>) -> Region {
    let boxes = points
        .into_iter()
        .map(|v| vec![Interval::point(v)])
        .chain(tail.map(|t| vec![Interval::from(t)]))
        .collect();
    Region::from_boxes(1, boxes).expect("one-dimensional boxes").normalize()
}

/// Why `mode` does not apply, or `None` when it does.
pub fn mode_obstacle(pta: &Pta, property: &Property, mode: Mode) -> Option<String> {
    let classes = classify_params(pta, property);
    let pclocks = parametric_clocks(pta, property).len();
    let mixed = classes.contains(&ParamClass::Mixed);
    match mode {
        Mode::Auto => [Mode::OneOne, Mode::LuOneParam, Mode::LOnly, Mode::UOnly]
            .iter()
            .find(|&&m| mode_obstacle(pta, property, m).is_none())
            .map_or_else(
                || Some("no exact procedure fits this model; `learn` handles general L/U automata".into()),
                |_| None,
            ),
        Mode::OneOne => {
            if pta.num_params() != 1 {
                Some(format!("one-one needs exactly one parameter, found {}", pta.num_params()))
            } else if pclocks != 1 {
                Some(format!("one-one needs exactly one parametric clock, found {pclocks}"))
            } else if active_clocks(pta, property).len() != 1 {
                Some("one-one needs every constrained clock to be the parametric clock".into())
            } else {
                None
            }
        }
        Mode::LuOneParam => {
            if pta.num_params() != 1 {
                Some(format!("needs exactly one parameter, found {}", pta.num_params()))
            } else if mixed {
                Some("the parameter is mixed".into())
            } else if pclocks > 1 {
                Some(format!("needs one parametric clock, found {pclocks}"))
            } else {
                None
            }
        }
        Mode::LOnly | Mode::UOnly => {
            let wanted = if mode == Mode::LOnly { ParamClass::Lower } else { ParamClass::Upper };
            if pclocks > 1 {
                Some(format!("needs one parametric clock, found {pclocks}"))
            } else {
                classes.iter().position(|&c| c != wanted && c != ParamClass::Unused).map(|i| {
                    format!("parameter {} is not a {wanted:?} parameter", pta.params[i]).to_lowercase()
                })
            }
        }
    }
}

/// Dispatches to the procedure selected by `mode`.
pub fn synthesize(pta: &Pta, property: &Property, mode: Mode) -> Result<SynthesisResult> {
    let chosen = match mode {
        Mode::Auto => [Mode::OneOne, Mode::LuOneParam, Mode::LOnly, Mode::UOnly]
            .into_iter()
            .find(|&m| mode_obstacle(pta, property, m).is_none())
            .ok_or_else(|| Error::Undecidable(mode_obstacle(pta, property, Mode::Auto).unwrap()))?,
        m => m,
    };
    match chosen {
        Mode::OneOne => synth_one_one(pta, property),
        Mode::LuOneParam => synth_lu_one_param(pta, property),
        Mode::LOnly => synth_l_only(pta, property),
        Mode::UOnly => synth_u_only(pta, property),
        Mode::Auto => unreachable!(),
    }
}
