//! Parameter synthesis for parametric timed automata.
//!
//! - [`model`]: expressions, constraints, automata, valuations and properties.
//! - [`region`]: finite unions of integer boxes, the shape of synthesized parameter sets.
//! - [`textio`]: model, property and valuation parsers; JSON emitters.
//! - [`mc`]: zone-based model checking of concrete valuations, a region-automaton
//!   cross-check and witness runs.
//! - [`synth`]: exact synthesis for one-one automata and L/U automata with one parametric
//!   clock.
//! - [`learn`]: max-margin boundary learning for general L/U automata.

pub mod error;
pub mod learn;
pub mod mc;
pub mod model;
pub mod par;
pub mod region;
pub mod synth;
pub mod textio;

pub use error::{Error, Result};
