use std::fmt::Write;

use crate::model::{
    Atom, ClockTerm, LinearExpr, ParamValuation, Property, Pta, Quantifier, Rat, Rel, SimpleConstraint,
    StateFormula,
};
use crate::region::Region;
use crate::textio::diag::{Diagnostics, Pos};

pub fn emit_expr(e: &LinearExpr, params: &[String]) -> String {
    let mut out = String::new();
    for (p, c) in e.terms() {
        let name = &params[p.0];
        let mag = c.unsigned_abs();
        if out.is_empty() {
            if c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(if c < 0 { " - " } else { " + " });
        }
        if mag == 1 {
            out.push_str(name);
        } else {
            let _ = write!(out, "{mag}*{name}");
        }
    }
    let c = e.con();
    if out.is_empty() {
        let _ = write!(out, "{c}");
    } else if c != 0 {
        let _ = write!(out, " {} {}", if c < 0 { "-" } else { "+" }, c.unsigned_abs());
    }
    out
}

pub fn emit_atom(a: &Atom, clocks: &[String], params: &[String]) -> String {
    let op = |r: Rel, lower: bool| match (r, lower) {
        (Rel::Lt, false) => "<",
        (Rel::Le, false) => "<=",
        (Rel::Lt, true) => ">",
        (Rel::Le, true) => ">=",
    };
    match a.lhs {
        // -x < e  is written  x > -e
        ClockTerm::Neg(x) => {
            format!("{} {} {}", clocks[x.0], op(a.rel, true), emit_expr(&-a.expr.clone(), params))
        }
        ClockTerm::Clock(x) => format!("{} {} {}", clocks[x.0], op(a.rel, false), emit_expr(&a.expr, params)),
        ClockTerm::Diff(x, y) => {
            format!("{} - {} {} {}", clocks[x.0], clocks[y.0], op(a.rel, false), emit_expr(&a.expr, params))
        }
        ClockTerm::Zero => format!("0 {} {}", op(a.rel, false), emit_expr(&a.expr, params)),
    }
}

pub fn emit_constraint(c: &SimpleConstraint, clocks: &[String], params: &[String]) -> String {
    if c.atoms.is_empty() {
        return "true".into();
    }
    c.atoms.iter().map(|a| emit_atom(a, clocks, params)).collect::<Vec<_>>().join(" && ")
}

/// Textual model accepted by `parse_model`; `parse_model(emit_model(a)) == a`.
pub fn emit_model(pta: &Pta) -> String {
    let (clocks, params) = (&pta.clocks, &pta.params);
    let mut out = String::new();
    let _ = writeln!(out, "pta {} {{", pta.name);
    let _ = writeln!(out, "  clocks: {};", clocks.join(", "));
    let _ = writeln!(out, "  params: {};", params.join(", "));
    let _ = writeln!(out, "  init: {};", pta.locations[pta.init.0]);
    for (name, inv) in pta.locations.iter().zip(&pta.invariants) {
        let _ = writeln!(out, "  loc {name} {{ inv: {}; }}", emit_constraint(inv, clocks, params));
    }
    for t in &pta.transitions {
        let resets: Vec<String> = t.resets.iter().map(|(x, b)| format!("{} := {b}", clocks[x.0])).collect();
        let _ = writeln!(
            out,
            "  trans {} -> {} {{ act: {}; guard: {}; reset: {}; }}",
            pta.locations[t.src.0],
            pta.locations[t.dst.0],
            t.action,
            emit_constraint(&t.guard, clocks, params),
            resets.join(", ")
        );
    }
    out.push_str("}\n");
    out
}

pub fn emit_formula(f: &StateFormula, pta: &Pta) -> String {
    match f {
        StateFormula::True => "true".into(),
        StateFormula::False => "false".into(),
        StateFormula::Atom(a) => emit_atom(a, &pta.clocks, &pta.params),
        StateFormula::Loc(q) => format!("loc == {}", pta.locations[q.0]),
        StateFormula::Not(g) => format!("!({})", emit_formula(g, pta)),
        StateFormula::And(a, b) => format!("({}) && ({})", emit_formula(a, pta), emit_formula(b, pta)),
        StateFormula::Or(a, b) => format!("({}) || ({})", emit_formula(a, pta), emit_formula(b, pta)),
    }
}

pub fn emit_property(p: &Property, pta: &Pta) -> String {
    let q = match p.quantifier {
        Quantifier::Exists => "E<>",
        Quantifier::Forall => "A[]",
    };
    format!("{q} {}", emit_formula(&p.formula, pta))
}

/// `p1=3,p2=inf`
pub fn emit_valuation(v: &ParamValuation, pta: &Pta) -> String {
    v.values().iter().zip(&pta.params).map(|(v, p)| format!("{p}={v}")).collect::<Vec<_>>().join(",")
}

/// `{"dims":m,"boxes":[[[lo,hi],...],...]}` with `"inf"` for unbounded ends.
pub fn emit_region(r: &Region) -> String {
    serde_json::to_string(r).expect("regions always serialize")
}

pub fn parse_region(text: &str) -> Result<Region, Diagnostics> {
    let bad = |line: usize, col: usize, msg: String| {
        Diagnostics::single("<region>", Pos { line: line.max(1), col: col.max(1) }, msg)
    };
    let r: Region = serde_json::from_str(text).map_err(|e| bad(e.line(), e.column(), e.to_string()))?;
    Region::from_boxes(r.dims(), r.boxes().to_vec()).map_err(|e| bad(1, 1, e.to_string()))
}

/// Exact rational as `"n"` or `"n/d"`.
pub fn rat_string(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
