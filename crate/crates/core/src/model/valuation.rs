use std::fmt;

use num_rational::Rational64;

use crate::model::expr::ParamId;
use crate::model::ClockId;

/// Exact rational used for clock values and delays.
pub type Rat = Rational64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParamValue {
    Fin(u64),
    Inf,
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Fin(v) => write!(f, "{v}"),
            ParamValue::Inf => write!(f, "inf"),
        }
    }
}

/// Parameter valuation, indexed by [`ParamId`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamValuation(Vec<ParamValue>);

impl ParamValuation {
    pub fn new(values: Vec<ParamValue>) -> Self {
        ParamValuation(values)
    }

    pub fn finite(values: &[u64]) -> Self {
        ParamValuation(values.iter().map(|&v| ParamValue::Fin(v)).collect())
    }

    pub fn get(&self, p: ParamId) -> Option<ParamValue> {
        self.0.get(p.0).copied()
    }

    pub fn set(&mut self, p: ParamId, v: ParamValue) {
        self.0[p.0] = v;
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[ParamValue] {
        &self.0
    }
}

/// Clock valuation with nonnegative exact rationals, indexed by [`ClockId`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClockValuation(Vec<Rat>);

impl ClockValuation {
    pub fn zero(clocks: usize) -> Self {
        ClockValuation(vec![Rat::from_integer(0); clocks])
    }

    pub fn new(values: Vec<Rat>) -> Self {
        debug_assert!(values.iter().all(|v| *v >= Rat::from_integer(0)));
        ClockValuation(values)
    }

    pub fn get(&self, x: ClockId) -> Rat {
        self.0[x.0]
    }

    pub fn set(&mut self, x: ClockId, v: Rat) {
        self.0[x.0] = v;
    }

    pub fn delayed(&self, d: Rat) -> ClockValuation {
        ClockValuation(self.0.iter().map(|v| v + d).collect())
    }

    pub fn values(&self) -> &[Rat] {
        &self.0
    }

    pub fn max_value(&self) -> Rat {
        self.0.iter().copied().max().unwrap_or_else(|| Rat::from_integer(0))
    }
}
