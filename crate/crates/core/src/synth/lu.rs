use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::mc::{self, witness_run};
use crate::model::{
    classify_params, constant_c, LinearExpr, ParamClass, ParamId, ParamValuation, ParamValue, Property, Pta,
    StateFormula,
};
use crate::region::Region;
use crate::synth::{
    decide, existential_dual, mode_obstacle, region_1d, Certificate, Method, Mode, SynthesisResult,
};

/// `[0, inf]`: lower and unused parameters at 0, upper parameters at infinity.
pub fn zero_inf_valuation(classes: &[ParamClass]) -> ParamValuation {
    ParamValuation::new(
        classes
            .iter()
            .map(|c| match c {
                ParamClass::Upper => ParamValue::Inf,
                _ => ParamValue::Fin(0),
            })
            .collect(),
    )
}

/// `Gamma(A, E<> phi)` is nonempty, decided by one check at `[0, inf]`.
pub fn lu_emptiness(pta: &Pta, phi: &StateFormula) -> Result<bool> {
    let property = Property::exists(phi.clone());
    let classes = classify_params(pta, &property);
    if let Some(i) = classes.iter().position(|&c| c == ParamClass::Mixed) {
        return Err(Error::Precondition(format!(
            "parameter {} occurs as both a lower and an upper bound",
            pta.params[i]
        )));
    }
    mc::check(pta, &zero_inf_valuation(&classes), &property)
}

/// Least constant term over the automaton and the target, `T'` of the scan bound.
fn smallest_constant(pta: &Pta, phi: &StateFormula) -> i64 {
    pta.expressions().map(LinearExpr::con).chain(phi.atoms().iter().map(|a| a.expr.con())).min().unwrap_or(0)
}

/// Feasible region of an L/U automaton with one parameter and at most one parametric clock.
///
/// Lower parameter: empty unless `p = 0` is feasible; otherwise `[0, i]` for the largest
/// feasible `i < C`, or everything when `p = C` is feasible. Upper parameter: empty unless
/// `p = inf` is feasible; otherwise `[i, inf)` for the least feasible `i <= B`, where
/// `B = T + |T'| + 1` comes from a witness at `p = inf`.
pub fn synth_lu_one_param(pta: &Pta, property: &Property) -> Result<SynthesisResult> {
    if let Some(why) = mode_obstacle(pta, property, Mode::LuOneParam) {
        return Err(Error::Precondition(why));
    }
    if let Some(primal) = existential_dual(property) {
        return Ok(synth_lu_one_param(pta, &primal)?.complemented());
    }
    let class = classify_params(pta, property)[0];
    let fin = |v: u64| ParamValuation::finite(&[v]);
    if class == ParamClass::Upper {
        let inf = ParamValuation::new(vec![ParamValue::Inf]);
        let open = mc::check(pta, &inf, property)?;
        let mut checks = vec![Certificate { valuation: inf.clone(), verdict: open }];
        if !open {
            let mut r = SynthesisResult::new(Region::empty(1), Method::LuOneParam);
            r.certificate_checks = checks;
            return Ok(r);
        }
        let target = property.reach_target();
        let t = witness_run(pta, &inf, &target)?.max_clock;
        let b = t + smallest_constant(pta, &target).unsigned_abs() + 1;
        let scan = decide(pta, property, (0..=b).map(fin).collect())?;
        let least = scan
            .iter()
            .position(|c| c.verdict)
            .ok_or_else(|| Error::Precondition(format!("p = {b} is infeasible although p = inf is")))?
            as u64;
        if scan[least as usize..].iter().any(|c| !c.verdict) {
            return Err(Error::Precondition("verdicts are not upward closed".into()));
        }
        checks.extend(scan);
        let mut r = SynthesisResult::new(region_1d([], Some(least)), Method::LuOneParam);
        r.constant_b = Some(b);
        r.certificate_checks = checks;
        return Ok(r);
    }

    let c = constant_c(pta, property);
    let mut checks = decide(pta, property, vec![fin(0)])?;
    let mut result = SynthesisResult::new(Region::empty(1), Method::LuOneParam);
    result.constant_c = Some(c);
    if checks[0].verdict {
        checks.extend(decide(pta, property, (1..=c).map(fin).collect())?);
        let feasible: Vec<u64> = (0..=c).filter(|&v| checks[v as usize].verdict).collect();
        let top = *feasible.last().unwrap();
        if feasible.len() as u64 != top + 1 {
            return Err(Error::Precondition("verdicts are not downward closed".into()));
        }
        result.region = if top == c { Region::full(1) } else { region_1d(0..=top, None) };
    }
    result.certificate_checks = checks;
    Ok(result)
}

/// Feasible region when every parameter is a lower-bound parameter.
pub fn synth_l_only(pta: &Pta, property: &Property) -> Result<SynthesisResult> {
    synth_uniform(pta, property, Mode::LOnly)
}

/// Feasible region when every parameter is an upper-bound parameter.
pub fn synth_u_only(pta: &Pta, property: &Property) -> Result<SynthesisResult> {
    synth_uniform(pta, property, Mode::UOnly)
}

fn synth_uniform(pta: &Pta, property: &Property, mode: Mode) -> Result<SynthesisResult> {
    if let Some(why) = mode_obstacle(pta, property, mode) {
        return Err(Error::Precondition(why));
    }
    if let Some(primal) = existential_dual(property) {
        return Ok(synth_uniform(pta, &primal, mode)?.complemented());
    }
    let method = if mode == Mode::LOnly { Method::LOnly } else { Method::UOnly };
    let mut solver = Uniform {
        pta,
        phi: &property.formula,
        lower: mode == Mode::LOnly,
        memo: HashMap::new(),
        checks: Vec::new(),
    };
    let region = solver.solve(&BTreeMap::new())?;
    let mut result = SynthesisResult::new(region, method);
    result.certificate_checks = solver.checks;
    Ok(result)
}

/// Recursion over partial assignments: collapse the free parameters into one, solve the
/// one-parameter problem, then fix each free parameter below the threshold in turn.
struct Uniform<'a> {
    pta: &'a Pta,
    phi: &'a StateFormula,
    lower: bool,
    memo: HashMap<Vec<(usize, u64)>, Region>,
    checks: Vec<Certificate>,
}

impl Uniform<'_> {
    fn solve(&mut self, fixed: &BTreeMap<ParamId, u64>) -> Result<Region> {
        let key: Vec<(usize, u64)> = fixed.iter().map(|(p, v)| (p.0, *v)).collect();
        if let Some(r) = self.memo.get(&key) {
            return Ok(r.clone());
        }
        let free: Vec<ParamId> = self.pta.param_ids().filter(|p| !fixed.contains_key(p)).collect();
        let k = free.len();
        let region = if k == 0 {
            let v = self.full_valuation(fixed, &free, ParamValue::Fin(0));
            let verdict = mc::check(self.pta, &v, &Property::exists(self.phi.clone()))?;
            self.checks.push(Certificate { valuation: v, verdict });
            if verdict {
                Region::full(0)
            } else {
                Region::empty(0)
            }
        } else {
            let (collapsed, property) = self.collapse(fixed, &free);
            let one = synth_lu_one_param(&collapsed, &property)?;
            for c in one.certificate_checks {
                let valuation = self.full_valuation(fixed, &free, c.valuation.values()[0]);
                self.checks.push(Certificate { valuation, verdict: c.verdict });
            }
            let h = one.region;
            if k == 1 {
                h
            } else if h.is_empty() {
                Region::empty(k)
            } else if h.is_full() {
                Region::full(k)
            } else {
                let bound = &h.boxes()[0][0];
                let (mut acc, fixed_values) = if self.lower {
                    let t = bound.hi.expect("downward closed region is bounded");
                    (Region::empty(k), 0..=t)
                } else {
                    let t = bound.lo;
                    (Region::up_set(k, t), 0..=t - 1)
                };
                for (i, &p) in free.iter().enumerate() {
                    for j in fixed_values.clone() {
                        let mut next = fixed.clone();
                        next.insert(p, j);
                        let sub = self.solve(&next)?;
                        acc = acc.union(&sub.lift(i, j))?;
                    }
                }
                acc
            }
        };
        self.memo.insert(key, region.clone());
        Ok(region)
    }

    /// Valuation of the source automaton with `fixed` values and every free parameter at `v`.
    fn full_valuation(
        &self,
        fixed: &BTreeMap<ParamId, u64>,
        free: &[ParamId],
        v: ParamValue,
    ) -> ParamValuation {
        let mut out = ParamValuation::new(vec![ParamValue::Fin(0); self.pta.num_params()]);
        for (&p, &x) in fixed {
            out.set(p, ParamValue::Fin(x));
        }
        for &p in free {
            out.set(p, v);
        }
        out
    }

    /// The automaton and `E<>` property with `fixed` substituted and every free parameter
    /// replaced by a single parameter.
    fn collapse(&self, fixed: &BTreeMap<ParamId, u64>, free: &[ParamId]) -> (Pta, Property) {
        let f = |e: &LinearExpr| e.substitute(fixed).collapse(free, ParamId(0));
        let mut pta = self.pta.map_exprs(f);
        pta.params = vec![free.iter().map(|p| self.pta.params[p.0].as_str()).collect::<Vec<_>>().join("+")];
        (pta, Property::exists(self.phi.map_exprs(&f)))
    }
}
