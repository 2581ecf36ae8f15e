//! Exact chord-diagram crossing combinatorics and Monte Carlo simulation of
//! sign-weighted structured random matrix ensembles.
//!
//! The numeric core is generic over the scalar: floating-point code is written
//! against [`Real`] (`f32`/`f64`) and polynomial weights in the sign parameter
//! against [`Scalar`], which also covers exact [`Rational`] arithmetic.

pub mod crossing_stats;
pub mod ensembles;
pub mod error;
pub mod numbers;
pub mod pairings;
pub mod rng;
pub mod scalar;
pub mod spectra;
pub mod theory;
pub mod verify;

pub use ensembles::{Matrix32, Matrix64};
pub use error::{Error, Result};
pub use scalar::{Real, Scalar};
pub use spectra::{Spectrum32, Spectrum64};

/// Exact rational numbers.
pub type Rational = num_rational::BigRational;
