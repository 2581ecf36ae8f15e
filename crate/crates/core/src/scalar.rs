//! Scalar abstractions.
//!
//! Two families are used throughout the crate:
//!
//! * [`Real`] is a floating-point type (`f32` or `f64`) used by the matrix
//!   samplers, the eigensolver and the hypergeometric evaluator.
//! * [`Scalar`] is anything closed under the field operations that can absorb
//!   an arbitrary-precision integer. It is implemented for the floats and for
//!   [`BigRational`], so polynomial weights in the sign parameter can be
//!   evaluated exactly or in floating point with the same code.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

pub trait Real:
    Float + FromPrimitive + ToPrimitive + Sum + Send + Sync + Debug + Display + Default + 'static
{
    /// Lossy conversion used for constants; panics only if `v` is not representable at all.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("constant representable in target float")
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub trait Scalar: Num + Clone + Debug {
    fn from_bigint(v: &BigInt) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_bigint(&BigInt::from(v))
    }

    /// Nearest `f64`, for reporting.
    fn to_f64_lossy(&self) -> f64;

    /// `2p - 1`, the expected value of a single sign.
    fn sign_mean(p: &Self) -> Self {
        p.clone() + p.clone() - Self::one()
    }
}

impl Scalar for f64 {
    fn from_bigint(v: &BigInt) -> Self {
        v.to_f64().unwrap_or(f64::INFINITY)
    }

    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn from_bigint(v: &BigInt) -> Self {
        v.to_f32().unwrap_or(f32::INFINITY)
    }

    fn to_f64_lossy(&self) -> f64 {
        *self as f64
    }
}

impl Scalar for BigRational {
    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// `base^exp` by repeated squaring.
pub fn powu<T: Scalar>(base: &T, exp: usize) -> T {
    num_traits::pow::pow(base.clone(), exp)
}
