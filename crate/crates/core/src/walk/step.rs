use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::weight::{ratio, Weight};

/// Nearest-neighbour step law on `Z`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StepLawZ {
    pub p_minus: BigRational,
    pub p_zero: BigRational,
    pub p_plus: BigRational,
}

impl StepLawZ {
    pub fn new(p_minus: BigRational, p_zero: BigRational, p_plus: BigRational) -> Result<Self> {
        if p_minus.is_negative() || p_zero.is_negative() || p_plus.is_negative() {
            return Err(domain("step probabilities must be nonnegative"));
        }
        if &p_minus + &p_zero + &p_plus != BigRational::one() {
            return Err(domain("step probabilities must sum to 1"));
        }
        Ok(StepLawZ {
            p_minus,
            p_zero,
            p_plus,
        })
    }

    /// `(p, 1 - 2p, p)` for `p ∈ (0, 1/2]`.
    pub fn symmetric(p: BigRational) -> Result<Self> {
        if !p.is_positive() || p > ratio(1, 2) {
            return Err(domain("symmetric step needs p in (0, 1/2]"));
        }
        let zero = BigRational::one() - &p - &p;
        Self::new(p.clone(), zero, p)
    }

    /// The default lazy law `(1/4, 1/2, 1/4)`.
    pub fn lazy() -> Self {
        Self::symmetric(ratio(1, 4)).unwrap()
    }

    pub fn is_symmetric(&self) -> bool {
        self.p_minus == self.p_plus
    }

    pub fn is_aperiodic(&self) -> bool {
        !self.p_zero.is_zero()
    }

    /// `(p_minus, p_zero, p_plus)` in the requested weight type.
    pub fn weights<W: Weight>(&self) -> (W, W, W) {
        (
            W::from_rational(&self.p_minus),
            W::from_rational(&self.p_zero),
            W::from_rational(&self.p_plus),
        )
    }

    /// Variance of one step.
    pub fn variance(&self) -> f64 {
        let (m, _, p): (f64, f64, f64) = self.weights();
        m + p - (p - m) * (p - m)
    }
}

/// Lazy nearest-neighbour step on `Z²`: hold with `p_hold`, otherwise a uniform neighbour.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StepLawZ2 {
    pub p_hold: BigRational,
}

impl StepLawZ2 {
    pub fn new(p_hold: BigRational) -> Result<Self> {
        if p_hold.is_negative() || p_hold >= BigRational::one() {
            return Err(domain("holding probability must be in [0, 1)"));
        }
        Ok(StepLawZ2 { p_hold })
    }

    /// 1/8 to each neighbour, 1/2 hold.
    pub fn lazy() -> Self {
        StepLawZ2 { p_hold: ratio(1, 2) }
    }

    pub fn neighbour_weight(&self) -> BigRational {
        (BigRational::one() - &self.p_hold) / BigRational::from_integer(4.into())
    }
}

/// Base step of a switch-walk-switch measure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum BaseStep {
    Line(StepLawZ),
    Plane(StepLawZ2),
}

impl From<StepLawZ> for BaseStep {
    fn from(s: StepLawZ) -> Self {
        BaseStep::Line(s)
    }
}

impl From<StepLawZ2> for BaseStep {
    fn from(s: StepLawZ2) -> Self {
        BaseStep::Plane(s)
    }
}
