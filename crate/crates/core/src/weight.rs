//! Probability weights: exact rationals or `f64`.
//!
//! Every exact kernel in the crate is generic over [`Weight`] so the same code
//! path runs in both modes. Rational mode is used for the exact-equality checks,
//! float mode for the large-`n` profiles.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightMode {
    Rational,
    Float,
}

impl WeightMode {
    pub fn as_str(self) -> &'static str {
        match self {
            WeightMode::Rational => "rational",
            WeightMode::Float => "float",
        }
    }
}

impl std::str::FromStr for WeightMode {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "rational" | "exact" => Ok(WeightMode::Rational),
            "float" | "f64" => Ok(WeightMode::Float),
            other => Err(crate::Error::Parse(format!("unknown weight mode `{other}`"))),
        }
    }
}

pub trait Weight:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + 'static
{
    const MODE: WeightMode;

    fn from_rational(r: &BigRational) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    /// Exact binary value of `x` (rational mode) or `x` itself.
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;
    fn add_assign_ref(&mut self, other: &Self);
    fn mul_ref(&self, other: &Self) -> Self;

    /// `base^exp` for a possibly negative exponent.
    fn powi(base: i64, exp: i64) -> Self {
        let b = Self::from_ratio(base, 1);
        let mut acc = Self::one();
        for _ in 0..exp.unsigned_abs() {
            acc = acc.mul_ref(&b);
        }
        if exp < 0 {
            Self::one() / acc
        } else {
            acc
        }
    }

    /// Natural log, evaluated in floating point.
    fn ln(&self) -> f64 {
        self.to_f64().ln()
    }
}

impl Weight for f64 {
    const MODE: WeightMode = WeightMode::Float;

    fn from_rational(r: &BigRational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += *other;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn powi(base: i64, exp: i64) -> Self {
        (base as f64).powf(exp as f64)
    }
}

impl Weight for BigRational {
    const MODE: WeightMode = WeightMode::Rational;

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).unwrap_or_default()
    }
    fn to_f64(&self) -> f64 {
        // Direct conversion overflows for huge numerators/denominators; fall back to logs.
        match ToPrimitive::to_f64(self) {
            Some(v) if v.is_finite() && (v != 0.0 || self.is_zero()) => v,
            _ => {
                let ln = ln_bigint(self.numer()) - ln_bigint(self.denom());
                let sign = if self.is_negative() { -1.0 } else { 1.0 };
                sign * ln.exp()
            }
        }
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn powi(base: i64, exp: i64) -> Self {
        let p = num_traits::pow(BigInt::from(base), exp.unsigned_abs() as usize);
        if exp < 0 {
            BigRational::new(BigInt::one(), p)
        } else {
            BigRational::from_integer(p)
        }
    }
    fn ln(&self) -> f64 {
        ln_bigint(self.numer()) - ln_bigint(self.denom())
    }
}

fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().unwrap().abs().ln();
    }
    let shift = bits - 64;
    let top: BigInt = x.abs() >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Exact rational `num/den`.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
