use std::collections::{BTreeMap, BTreeSet};

use crate::model::{
    Atom, ClockId, ClockTerm, LinearExpr, LocId, ParamId, ParamValuation, ParamValue, Property, Pta,
    Quantifier, Rel, Resets, SimpleConstraint, StateFormula, Transition,
};
use crate::textio::diag::{Diagnostics, Pos, Source};
use crate::textio::lexer::{lex, Tok, Token};

const RESERVED: &[&str] = &["loc", "true", "false", "inf"];

type PResult<T> = Result<T, Diagnostics>;

/// Clock and parameter names in scope while parsing atoms and expressions.
struct Scope<'a> {
    clocks: &'a [String],
    params: &'a [String],
}

impl Scope<'_> {
    fn clock(&self, name: &str) -> Option<ClockId> {
        self.clocks.iter().position(|c| c == name).map(ClockId)
    }

    fn param(&self, name: &str) -> Option<ParamId> {
        self.params.iter().position(|p| p == name).map(ParamId)
    }
}

struct Parser<'a> {
    src: &'a Source<'a>,
    toks: Vec<Token>,
    idx: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a Source<'a>) -> PResult<Self> {
        Ok(Parser { src, toks: lex(src)?, idx: 0 })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.idx + k).map(|t| &t.tok)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.idx).map_or_else(|| self.src.end_pos(), |t| t.pos)
    }

    fn error<T>(&self, pos: Pos, msg: impl Into<String>) -> PResult<T> {
        Err(Diagnostics::single(self.src.origin, pos, msg))
    }

    fn found(&self) -> String {
        self.peek().map_or("end of input".into(), |t| t.describe())
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|t| t.tok.clone());
        self.idx += 1;
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok) -> PResult<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            let msg = format!("expected {}, found {}", tok.describe(), self.found());
            self.error(self.pos(), msg)
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        if self.at_keyword(kw) {
            self.idx += 1;
            Ok(())
        } else {
            let msg = format!("expected `{kw}`, found {}", self.found());
            self.error(self.pos(), msg)
        }
    }

    fn ident(&mut self) -> PResult<(String, Pos)> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.idx += 1;
                Ok((s, pos))
            }
            _ => {
                let msg = format!("expected identifier, found {}", self.found());
                self.error(pos, msg)
            }
        }
    }

    fn finish(&self) -> PResult<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) => {
                let msg = format!("unexpected {} after end of input", self.found());
                self.error(self.pos(), msg)
            }
        }
    }

    /// `name, name, ...` up to (not including) `;`; possibly empty.
    fn decl_list(&mut self, what: &str, taken: &BTreeSet<String>) -> PResult<Vec<String>> {
        let mut names = Vec::new();
        if self.peek() == Some(&Tok::Semi) {
            return Ok(names);
        }
        loop {
            let (name, pos) = self.ident()?;
            if RESERVED.contains(&name.as_str()) {
                return self.error(pos, format!("`{name}` is reserved"));
            }
            if names.contains(&name) || taken.contains(&name) {
                return self.error(pos, format!("duplicate {what} {name}"));
            }
            names.push(name);
            if !self.eat(&Tok::Comma) {
                return Ok(names);
            }
        }
    }

    fn nat(&mut self) -> PResult<u64> {
        match self.peek() {
            Some(Tok::Nat(n)) => {
                let n = *n;
                self.idx += 1;
                Ok(n)
            }
            _ => {
                let msg = format!("expected natural number, found {}", self.found());
                self.error(self.pos(), msg)
            }
        }
    }

    fn overflow<T>(&self, pos: Pos) -> PResult<T> {
        self.error(pos, "integer overflow in expression")
    }

    /// `t := ["-"] (NAT ["*" PARAM] | PARAM)`, returned with the sign applied.
    fn term(&mut self, scope: &Scope, negate: bool) -> PResult<LinearExpr> {
        let pos = self.pos();
        let sign: i64 = if negate { -1 } else { 1 };
        match self.bump() {
            Some(Tok::Nat(n)) => {
                let n = n as i64 * sign;
                if self.eat(&Tok::Star) {
                    let (name, ppos) = self.ident()?;
                    let p = self.param_ref(scope, &name, ppos)?;
                    Ok(LinearExpr::constant(0).with_term(p, n))
                } else {
                    Ok(LinearExpr::constant(n))
                }
            }
            Some(Tok::Ident(name)) => {
                let p = self.param_ref(scope, &name, pos)?;
                Ok(LinearExpr::constant(0).with_term(p, sign))
            }
            _ => {
                self.idx -= 1;
                let msg = format!("expected expression term, found {}", self.found());
                self.error(pos, msg)
            }
        }
    }

    fn param_ref(&self, scope: &Scope, name: &str, pos: Pos) -> PResult<ParamId> {
        if let Some(p) = scope.param(name) {
            Ok(p)
        } else if scope.clock(name).is_some() {
            self.error(pos, format!("clock {name} cannot occur in a parameter expression"))
        } else {
            self.error(pos, format!("undeclared parameter {name}"))
        }
    }

    fn expr(&mut self, scope: &Scope) -> PResult<LinearExpr> {
        let pos = self.pos();
        let lead_neg = self.eat(&Tok::Minus);
        let mut acc = self.term(scope, lead_neg)?;
        loop {
            let neg = if self.eat(&Tok::Plus) {
                false
            } else if self.eat(&Tok::Minus) {
                true
            } else {
                return Ok(acc);
            };
            let t = self.term(scope, neg)?;
            let constant = match acc.con().checked_add(t.con()) {
                Some(c) => c,
                None => return self.overflow(pos),
            };
            let mut next = LinearExpr::constant(constant);
            for (p, c) in acc.terms().chain(t.terms()) {
                if next.cf(p).checked_add(c).is_none() {
                    return self.overflow(pos);
                }
                next.add_term(p, c);
            }
            acc = next;
        }
    }

    fn clock_ref(&mut self, scope: &Scope) -> PResult<ClockId> {
        let (name, pos) = self.ident()?;
        match scope.clock(&name) {
            Some(x) => Ok(x),
            None if scope.param(&name).is_some() => {
                self.error(pos, format!("parameter {name} cannot occur on the clock side"))
            }
            None => self.error(pos, format!("undeclared clock {name}")),
        }
    }

    /// `["-"] CLOCK ["-" CLOCK] REL expr`, or `0 REL expr`. Returns one atom, or two for `==`.
    fn atom(&mut self, scope: &Scope) -> PResult<Vec<Atom>> {
        let pos = self.pos();
        let lhs = match self.peek() {
            Some(Tok::Nat(0)) => {
                self.idx += 1;
                ClockTerm::Zero
            }
            Some(Tok::Minus) => {
                self.idx += 1;
                ClockTerm::Neg(self.clock_ref(scope)?)
            }
            Some(Tok::Ident(_)) => {
                let x = self.clock_ref(scope)?;
                if self.peek() == Some(&Tok::Minus) {
                    self.idx += 1;
                    let ypos = self.pos();
                    let y = self.clock_ref(scope)?;
                    if x == y {
                        return self.error(ypos, "difference of a clock with itself");
                    }
                    ClockTerm::Diff(x, y)
                } else {
                    ClockTerm::Clock(x)
                }
            }
            _ => {
                let msg = format!("expected clock constraint, found {}", self.found());
                return self.error(pos, msg);
            }
        };
        let rel_pos = self.pos();
        let rel = self.bump();
        let e = self.expr(scope)?;
        let upper = |rel| Atom::new(lhs, rel, e.clone());
        let lower = |rel| Atom::new(lhs.negate(), rel, -e.clone());
        Ok(match rel {
            Some(Tok::Lt) => vec![upper(Rel::Lt)],
            Some(Tok::Le) => vec![upper(Rel::Le)],
            Some(Tok::Gt) => vec![lower(Rel::Lt)],
            Some(Tok::Ge) => vec![lower(Rel::Le)],
            Some(Tok::EqEq) => vec![upper(Rel::Le), lower(Rel::Le)],
            _ => return self.error(rel_pos, "expected one of <, <=, >, >=, =="),
        })
    }

    /// `"true" | atom ("&&" atom)*`
    fn constraint(&mut self, scope: &Scope) -> PResult<SimpleConstraint> {
        let mut atoms = Vec::new();
        loop {
            if self.at_keyword("true") {
                self.idx += 1;
            } else {
                atoms.extend(self.atom(scope)?);
            }
            if !self.eat(&Tok::AndAnd) {
                return Ok(SimpleConstraint::new(atoms));
            }
        }
    }

    fn resets(&mut self, scope: &Scope) -> PResult<Resets> {
        let mut resets = Resets::none();
        if self.peek() == Some(&Tok::Semi) {
            return Ok(resets);
        }
        loop {
            let pos = self.pos();
            let x = self.clock_ref(scope)?;
            let b = if self.eat(&Tok::Assign) {
                if self.peek() == Some(&Tok::Minus) {
                    return self.error(self.pos(), "negative reset constant");
                }
                self.nat()?
            } else {
                0
            };
            if resets.insert(x, b).is_some() {
                return self.error(pos, format!("clock {} reset twice", scope.clocks[x.0]));
            }
            if !self.eat(&Tok::Comma) {
                return Ok(resets);
            }
        }
    }

    fn model(&mut self) -> PResult<Pta> {
        let start = self.pos();
        self.keyword("pta")?;
        let (name, _) = self.ident()?;
        self.expect(&Tok::LBrace)?;

        self.keyword("clocks")?;
        self.expect(&Tok::Colon)?;
        let clocks = self.decl_list("clock", &BTreeSet::new())?;
        self.expect(&Tok::Semi)?;
        self.keyword("params")?;
        self.expect(&Tok::Colon)?;
        let taken: BTreeSet<String> = clocks.iter().cloned().collect();
        let params = self.decl_list("parameter", &taken)?;
        self.expect(&Tok::Semi)?;
        self.keyword("init")?;
        self.expect(&Tok::Colon)?;
        let (init_name, init_pos) = self.ident()?;
        self.expect(&Tok::Semi)?;

        let scope = Scope { clocks: &clocks, params: &params };
        let mut locations: Vec<String> = Vec::new();
        let mut invariants = Vec::new();
        while self.at_keyword("loc") {
            self.idx += 1;
            let (lname, lpos) = self.ident()?;
            if locations.contains(&lname) {
                return self.error(lpos, format!("duplicate location {lname}"));
            }
            self.expect(&Tok::LBrace)?;
            self.keyword("inv")?;
            self.expect(&Tok::Colon)?;
            invariants.push(self.constraint(&scope)?);
            self.expect(&Tok::Semi)?;
            self.expect(&Tok::RBrace)?;
            locations.push(lname);
        }
        let loc_ref = |p: &Parser, name: &str, pos: Pos| -> PResult<LocId> {
            match locations.iter().position(|l| l == name) {
                Some(i) => Ok(LocId(i)),
                None => p.error(pos, format!("undeclared location {name}")),
            }
        };
        let init = loc_ref(self, &init_name, init_pos)?;

        let mut transitions = Vec::new();
        while self.at_keyword("trans") {
            self.idx += 1;
            let (src_name, src_pos) = self.ident()?;
            let src = loc_ref(self, &src_name, src_pos)?;
            self.expect(&Tok::Arrow)?;
            let (dst_name, dst_pos) = self.ident()?;
            let dst = loc_ref(self, &dst_name, dst_pos)?;
            self.expect(&Tok::LBrace)?;
            self.keyword("act")?;
            self.expect(&Tok::Colon)?;
            let (action, _) = self.ident()?;
            self.expect(&Tok::Semi)?;
            self.keyword("guard")?;
            self.expect(&Tok::Colon)?;
            let guard = self.constraint(&scope)?;
            self.expect(&Tok::Semi)?;
            self.keyword("reset")?;
            self.expect(&Tok::Colon)?;
            let resets = self.resets(&scope)?;
            self.expect(&Tok::Semi)?;
            self.expect(&Tok::RBrace)?;
            transitions.push(Transition { src, guard, action, resets, dst });
        }
        if !self.eat(&Tok::RBrace) {
            let msg = format!("expected `loc`, `trans` or `}}`, found {}", self.found());
            return self.error(self.pos(), msg);
        }
        self.finish()?;
        Pta::new(name, clocks, params, locations, init, invariants, transitions)
            .or_else(|e| self.error(start, e.to_string()))
    }

    fn formula(&mut self, pta: &Pta) -> PResult<StateFormula> {
        let mut f = self.conjunction(pta)?;
        while self.eat(&Tok::OrOr) {
            f = f.or(self.conjunction(pta)?);
        }
        Ok(f)
    }

    fn conjunction(&mut self, pta: &Pta) -> PResult<StateFormula> {
        let mut f = self.unary(pta)?;
        while self.eat(&Tok::AndAnd) {
            f = f.and(self.unary(pta)?);
        }
        Ok(f)
    }

    fn unary(&mut self, pta: &Pta) -> PResult<StateFormula> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Exists) | Some(Tok::Forall) => self.error(pos, "nested quantifier"),
            Some(Tok::Bang) => {
                self.idx += 1;
                Ok(self.unary(pta)?.not())
            }
            Some(Tok::LParen) => {
                self.idx += 1;
                let f = self.formula(pta)?;
                self.expect(&Tok::RParen)?;
                Ok(f)
            }
            Some(Tok::Ident(s)) if s == "true" => {
                self.idx += 1;
                Ok(StateFormula::True)
            }
            Some(Tok::Ident(s)) if s == "false" => {
                self.idx += 1;
                Ok(StateFormula::False)
            }
            Some(Tok::Ident(s)) if s == "loc" && self.peek_at(1) == Some(&Tok::EqEq) => {
                self.idx += 2;
                let (name, npos) = self.ident()?;
                match pta.location_id(&name) {
                    Some(q) => Ok(StateFormula::Loc(q)),
                    None => self.error(npos, format!("undeclared location {name}")),
                }
            }
            _ => {
                let scope = Scope { clocks: &pta.clocks, params: &pta.params };
                let atoms = self.atom(&scope)?;
                let mut it = atoms.into_iter().map(StateFormula::Atom);
                let first = it.next().expect("atom yields at least one conjunct");
                Ok(it.fold(first, StateFormula::and))
            }
        }
    }

    fn property(&mut self, pta: &Pta) -> PResult<Property> {
        let quantifier = match self.bump() {
            Some(Tok::Exists) => Quantifier::Exists,
            Some(Tok::Forall) => Quantifier::Forall,
            _ => {
                self.idx = self.idx.saturating_sub(1);
                return self.error(self.pos(), "expected `E<>` or `A[]`");
            }
        };
        let formula = self.formula(pta)?;
        self.finish()?;
        Ok(Property { quantifier, formula })
    }

    fn valuation(&mut self, pta: &Pta) -> PResult<ParamValuation> {
        let mut values: BTreeMap<ParamId, ParamValue> = BTreeMap::new();
        if self.peek().is_some() {
            loop {
                let (name, pos) = self.ident()?;
                let Some(p) = pta.param_id(&name) else {
                    return self.error(pos, format!("undeclared parameter {name}"));
                };
                self.expect(&Tok::Eq)?;
                let vpos = self.pos();
                let v = match self.bump() {
                    Some(Tok::Nat(n)) => ParamValue::Fin(n),
                    Some(Tok::Ident(s)) if s == "inf" => ParamValue::Inf,
                    Some(Tok::Minus) => return self.error(vpos, "negative parameter"),
                    _ => return self.error(vpos, "expected a natural number or `inf`"),
                };
                if values.insert(p, v).is_some() {
                    return self.error(pos, format!("parameter {name} assigned twice"));
                }
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.finish()?;
        let mut out = Vec::with_capacity(pta.num_params());
        for p in pta.param_ids() {
            match values.get(&p) {
                Some(v) => out.push(*v),
                None => {
                    return self.error(
                        self.src.end_pos(),
                        format!("missing value for parameter {}", pta.params[p.0]),
                    )
                }
            }
        }
        Ok(ParamValuation::new(out))
    }
}

pub fn parse_model(src: &Source) -> PResult<Pta> {
    Parser::new(src)?.model()
}

/// Parses `E<> phi` or `A[] phi` against the names declared by `pta`.
pub fn parse_property(src: &Source, pta: &Pta) -> PResult<Property> {
    Parser::new(src)?.property(pta)
}

/// Parses `p1=3,p2=inf`. Every parameter of `pta` must be assigned exactly once.
pub fn parse_valuation(src: &Source, pta: &Pta) -> PResult<ParamValuation> {
    Parser::new(src)?.valuation(pta)
}
