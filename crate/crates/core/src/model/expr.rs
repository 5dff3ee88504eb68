use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::model::valuation::{ParamValuation, ParamValue};

/// Index of a parameter in the enclosing model's parameter list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamId(pub usize);

/// Integer extended with both infinities.
///
/// Products follow the usual convention for partial valuations: `0 * inf = 0`,
/// a positive factor keeps the sign of the infinity and a negative one flips it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtInt {
    NegInf,
    Fin(i64),
    PosInf,
}

impl ExtInt {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtInt::Fin(_))
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            ExtInt::Fin(v) => Some(v),
            _ => None,
        }
    }

    pub fn scale(self, factor: i64) -> ExtInt {
        match self {
            ExtInt::Fin(v) => ExtInt::Fin(v * factor),
            _ if factor == 0 => ExtInt::Fin(0),
            ExtInt::PosInf if factor > 0 => ExtInt::PosInf,
            ExtInt::PosInf => ExtInt::NegInf,
            ExtInt::NegInf if factor > 0 => ExtInt::NegInf,
            ExtInt::NegInf => ExtInt::PosInf,
        }
    }

    /// Sum of two extended integers; `+inf + -inf` is an error.
    pub fn checked_add(self, other: ExtInt) -> Result<ExtInt> {
        use ExtInt::*;
        match (self, other) {
            (Fin(a), Fin(b)) => Ok(Fin(a + b)),
            (PosInf, NegInf) | (NegInf, PosInf) => {
                Err(Error::IllFormedEvaluation("+inf and -inf in the same expression".into()))
            }
            (PosInf, _) | (_, PosInf) => Ok(PosInf),
            (NegInf, _) | (_, NegInf) => Ok(NegInf),
        }
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::NegInf => write!(f, "-inf"),
            ExtInt::Fin(v) => write!(f, "{v}"),
            ExtInt::PosInf => write!(f, "inf"),
        }
    }
}

/// `c0 + c1*p1 + ... + cm*pm` with integer coefficients. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearExpr {
    constant: i64,
    coeffs: BTreeMap<ParamId, i64>,
}

impl LinearExpr {
    pub fn constant(c: i64) -> Self {
        LinearExpr { constant: c, coeffs: BTreeMap::new() }
    }

    pub fn param(p: ParamId) -> Self {
        LinearExpr::constant(0).with_term(p, 1)
    }

    /// Adds `coeff * p` to the expression.
    pub fn with_term(mut self, p: ParamId, coeff: i64) -> Self {
        self.add_term(p, coeff);
        self
    }

    pub fn add_term(&mut self, p: ParamId, coeff: i64) {
        let entry = self.coeffs.entry(p).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.coeffs.remove(&p);
        }
    }

    /// `con(e)`
    pub fn con(&self) -> i64 {
        self.constant
    }

    /// `cf(e, p)`
    pub fn cf(&self, p: ParamId) -> i64 {
        self.coeffs.get(&p).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (ParamId, i64)> + '_ {
        self.coeffs.iter().map(|(&p, &c)| (p, c))
    }

    pub fn is_concrete(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn params(&self) -> impl Iterator<Item = ParamId> + '_ {
        self.coeffs.keys().copied()
    }

    /// `e[gamma]` under extended arithmetic.
    pub fn evaluate(&self, valuation: &ParamValuation) -> Result<ExtInt> {
        let mut acc = ExtInt::Fin(self.constant);
        for (p, c) in self.terms() {
            let v = match valuation.get(p) {
                Some(ParamValue::Fin(v)) => ExtInt::Fin(v as i64),
                Some(ParamValue::Inf) => ExtInt::PosInf,
                None => return Err(Error::InvalidValuation(format!("parameter #{} has no value", p.0))),
            };
            acc = acc.checked_add(v.scale(c))?;
        }
        Ok(acc)
    }

    /// Replaces the given parameters by constants, folding them into `con(e)`.
    pub fn substitute(&self, fixed: &BTreeMap<ParamId, u64>) -> LinearExpr {
        let mut out = LinearExpr::constant(self.constant);
        for (p, c) in self.terms() {
            match fixed.get(&p) {
                Some(&v) => out.constant += c * v as i64,
                None => out.add_term(p, c),
            }
        }
        out
    }

    /// Replaces every parameter in `group` by `target`, summing their coefficients.
    pub fn collapse(&self, group: &[ParamId], target: ParamId) -> LinearExpr {
        let mut out = LinearExpr::constant(self.constant);
        for (p, c) in self.terms() {
            if group.contains(&p) {
                out.add_term(target, c);
            } else {
                out.add_term(p, c);
            }
        }
        out
    }

    /// Sum of the coefficients of the parameters in `group`.
    pub fn group_coeff(&self, group: &[ParamId]) -> i64 {
        group.iter().map(|&p| self.cf(p)).sum()
    }
}

impl Add for LinearExpr {
    type Output = LinearExpr;

    fn add(mut self, rhs: LinearExpr) -> LinearExpr {
        self.constant += rhs.constant;
        for (p, c) in rhs.terms() {
            self.add_term(p, c);
        }
        self
    }
}

impl Sub for LinearExpr {
    type Output = LinearExpr;

    fn sub(self, rhs: LinearExpr) -> LinearExpr {
        self + (-rhs)
    }
}

impl Neg for LinearExpr {
    type Output = LinearExpr;

    fn neg(self) -> LinearExpr {
        LinearExpr {
            constant: -self.constant,
            coeffs: self.coeffs.into_iter().map(|(p, c)| (p, -c)).collect(),
        }
    }
}

impl Add<i64> for LinearExpr {
    type Output = LinearExpr;

    fn add(mut self, rhs: i64) -> LinearExpr {
        self.constant += rhs;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gamma(values: &[ParamValue]) -> ParamValuation {
        ParamValuation::new(values.to_vec())
    }

    #[test]
    fn substitution_example() {
        // 2 + 3 p1 - p2 at (1, 4)
        let e = LinearExpr::constant(2).with_term(ParamId(0), 3).with_term(ParamId(1), -1);
        let g = gamma(&[ParamValue::Fin(1), ParamValue::Fin(4)]);
        assert_eq!(e.evaluate(&g).unwrap(), ExtInt::Fin(1));
    }

    #[test]
    fn zero_times_infinity_is_zero() {
        let e = LinearExpr::constant(5).with_term(ParamId(0), 0);
        assert!(e.is_concrete());
        let g = gamma(&[ParamValue::Inf]);
        assert_eq!(e.evaluate(&g).unwrap(), ExtInt::Fin(5));
        assert_eq!(ExtInt::PosInf.scale(0), ExtInt::Fin(0));
    }

    #[test]
    fn positive_coefficient_forces_infinity() {
        let e = LinearExpr::constant(-3).with_term(ParamId(0), 2);
        let g = gamma(&[ParamValue::Inf]);
        assert_eq!(e.evaluate(&g).unwrap(), ExtInt::PosInf);
        let e = LinearExpr::constant(-3).with_term(ParamId(0), -2);
        assert_eq!(e.evaluate(&g).unwrap(), ExtInt::NegInf);
    }

    #[test]
    fn mixed_infinities_are_rejected() {
        let e = LinearExpr::param(ParamId(0)).with_term(ParamId(1), -1);
        let g = gamma(&[ParamValue::Inf, ParamValue::Inf]);
        assert!(matches!(e.evaluate(&g), Err(Error::IllFormedEvaluation(_))));
    }

    #[test]
    fn missing_parameter_is_an_error() {
        let e = LinearExpr::param(ParamId(3));
        assert!(e.evaluate(&gamma(&[])).is_err());
    }

    #[test]
    fn collapse_sums_coefficients() {
        let e = LinearExpr::constant(4).with_term(ParamId(0), -1).with_term(ParamId(1), -1);
        let c = e.collapse(&[ParamId(0), ParamId(1)], ParamId(0));
        assert_eq!(c.cf(ParamId(0)), -2);
        assert_eq!(c.cf(ParamId(1)), 0);
        let fixed = BTreeMap::from([(ParamId(0), 3)]);
        let s = e.substitute(&fixed);
        assert_eq!(s.con(), 1);
        assert_eq!(s.cf(ParamId(1)), -1);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn finite_evaluation_is_integer_arithmetic(
                c0 in -50i64..50,
                coeffs in proptest::collection::vec(-5i64..5, 0..4),
                values in proptest::collection::vec(0u64..20, 4),
            ) {
                let mut e = LinearExpr::constant(c0);
                let mut expected = c0;
                for (i, &c) in coeffs.iter().enumerate() {
                    e.add_term(ParamId(i), c);
                    expected += c * values[i] as i64;
                }
                let g = ParamValuation::new(values.iter().map(|&v| ParamValue::Fin(v)).collect());
                prop_assert_eq!(e.evaluate(&g).unwrap(), ExtInt::Fin(expected));
            }
        }
    }
}
