//! Textual model, property and valuation formats, plus JSON output.
//!
//! The model grammar is line-agnostic: declarations end in `;`, comments run from `#` to
//! the end of the line, and keywords are lowercase.
//!
//! ```text
//! pta T {
//!   clocks: x, y;
//!   params: p;
//!   init: a;
//!   loc a { inv: x <= p; }
//!   loc b { inv: true; }
//!   trans a -> b { act: go; guard: x >= 2 && x - y < p + 1; reset: y := 0; }
//! }
//! ```
//!
//! Besides `x`, `-x` and `x - y`, an atom may have the constant `0` on its left. This
//! form only arises from substituting resets into invariants and is accepted so that
//! every model round-trips through [`emit_model`].
//!
//! Properties are `E<> phi` or `A[] phi` over atoms, `loc == name`, `true`, `false`, `!`,
//! `&&`, `||` and parentheses. Valuations are `p = 3, q = inf`.

mod diag;
mod emit;
mod lexer;
mod parser;
mod run;

pub use diag::{Diagnostic, Diagnostics, Pos, Severity, Source};
pub use emit::{
    emit_atom, emit_constraint, emit_expr, emit_formula, emit_model, emit_property, emit_region,
    emit_valuation, parse_region, rat_string,
};
pub use parser::{parse_model, parse_property, parse_valuation};
pub use run::emit_run;
