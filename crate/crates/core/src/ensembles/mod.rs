//! Structured real symmetric random matrices and `±1` sign masks.
//!
//! Every Toeplitz-type ensemble is `a[i][j] = b[var(|i - j|)]` for an index map
//! `var` that identifies the diagonals sharing one random variable:
//!
//! | kind                    | `var(d)`                         |
//! |-------------------------|----------------------------------|
//! | `Toeplitz`              | `d`                              |
//! | `PalindromicToeplitz`   | `min(d, N-1-d)`                  |
//! | `HighlyPalindromic(n)`  | same, applied to `d mod N/2^n`   |

mod matrix;

pub use matrix::{hadamard, SignMatrix, SymmetricMatrix};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numbers::double_factorial;
use crate::rng::{stream, StreamRng};
use crate::scalar::Real;
use crate::Rational;

pub type Matrix64 = SymmetricMatrix<f64>;
pub type Matrix32 = SymmetricMatrix<f32>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleKind {
    FullSymmetric,
    Toeplitz,
    PalindromicToeplitz,
    /// First row made of `2^n` copies of a palindrome.
    HighlyPalindromic(u32),
}

impl EnsembleKind {
    /// Palindromicity degree: `None` for non-palindromic kinds.
    pub fn degree(self) -> Option<u32> {
        match self {
            EnsembleKind::PalindromicToeplitz => Some(0),
            EnsembleKind::HighlyPalindromic(n) => Some(n),
            _ => None,
        }
    }

    /// Block length `N / 2^n` of the repeated palindrome.
    fn period(self, size: usize) -> usize {
        match self.degree() {
            Some(n) => size >> n,
            None => size,
        }
    }

    /// Number of independent random variables in an `N x N` matrix.
    pub fn num_variables(self, size: usize) -> usize {
        match self {
            EnsembleKind::FullSymmetric => size * (size + 1) / 2,
            EnsembleKind::Toeplitz => size,
            _ => self.period(size).div_ceil(2),
        }
    }

    /// Identity of the random variable at entry `(i, j)`.
    pub fn variable_index(self, size: usize, i: usize, j: usize) -> usize {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        match self {
            EnsembleKind::FullSymmetric => a * (2 * size - a + 1) / 2 + (b - a),
            EnsembleKind::Toeplitz => b - a,
            _ => {
                let len = self.period(size);
                let r = (b - a) % len;
                r.min(len - 1 - r)
            }
        }
    }

    /// How often each variable occurs in the first row.
    pub fn first_row_occurrences(self, size: usize) -> Vec<usize> {
        let mut count = vec![0; self.num_variables(size)];
        for j in 0..size {
            count[self.variable_index(size, 0, j)] += 1;
        }
        count
    }

    pub fn validate_size(self, size: usize) -> Result<()> {
        if size == 0 {
            return Err(invalid("matrix dimension must be positive"));
        }
        if let Some(n) = self.degree() {
            if n >= usize::BITS || !size.is_multiple_of(1usize << n) {
                return Err(invalid(format!("N = {size} is not a multiple of 2^{n}")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnsembleKind::FullSymmetric => f.write_str("full"),
            EnsembleKind::Toeplitz => f.write_str("toeplitz"),
            EnsembleKind::PalindromicToeplitz => f.write_str("palindromic"),
            EnsembleKind::HighlyPalindromic(n) => write!(f, "highly-palindromic({n})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseDistribution {
    StandardGaussian,
    Rademacher,
    /// Uniform on `[-sqrt 3, sqrt 3]`.
    UniformScaled,
}

impl BaseDistribution {
    pub fn sample<R: Rng + ?Sized>(self, rng: &mut R) -> f64 {
        match self {
            BaseDistribution::StandardGaussian => StandardNormal.sample(rng),
            BaseDistribution::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            BaseDistribution::UniformScaled => {
                let s = 3f64.sqrt();
                Uniform::new_inclusive(-s, s).expect("valid bounds").sample(rng)
            }
        }
    }

    /// Exact `E(b^r)`.
    pub fn moment(self, r: usize) -> Rational {
        if r % 2 == 1 {
            return Rational::from_integer(0.into());
        }
        let m = r / 2;
        match self {
            BaseDistribution::StandardGaussian => {
                Rational::from_integer(double_factorial(r as i64 - 1).into())
            }
            BaseDistribution::Rademacher => Rational::from_integer(1.into()),
            BaseDistribution::UniformScaled => Rational::new(
                num_traits::pow(BigInt::from(3), m),
                BigInt::from(2 * m + 1),
            ),
        }
    }
}

impl FromStr for BaseDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" | "normal" => Ok(BaseDistribution::StandardGaussian),
            "rademacher" | "sign" => Ok(BaseDistribution::Rademacher),
            "uniform" => Ok(BaseDistribution::UniformScaled),
            _ => Err(invalid(format!("unknown base distribution '{s}'"))),
        }
    }
}

impl fmt::Display for BaseDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaseDistribution::StandardGaussian => "gaussian",
            BaseDistribution::Rademacher => "rademacher",
            BaseDistribution::UniformScaled => "uniform",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub size: usize,
    /// Probability of a `+1` sign.
    pub p: f64,
    pub base: BaseDistribution,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, size: usize, p: f64) -> Self {
        EnsembleSpec { kind, size, p, base: BaseDistribution::StandardGaussian, seed: 0 }
    }

    pub fn with_base(mut self, base: BaseDistribution) -> Self {
        self.base = base;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.kind.validate_size(self.size)?;
        check_p(self.p)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("spec serializes")
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(0.5..=1.0).contains(&p) {
        return Err(invalid(format!("sign parameter p = {p} outside [1/2, 1]")));
    }
    Ok(())
}

/// Draw an unsigned matrix from `spec` using the spec's own seed.
pub fn sample_matrix<T: Real>(spec: &EnsembleSpec) -> Result<SymmetricMatrix<T>> {
    sample_matrix_with_rng(spec, &mut stream(spec.seed, 0))
}

pub fn sample_matrix_with_rng<T: Real, R: Rng + ?Sized>(
    spec: &EnsembleSpec,
    rng: &mut R,
) -> Result<SymmetricMatrix<T>> {
    spec.validate()?;
    let n = spec.size;
    let mut out = SymmetricMatrix::zeros(n);
    if spec.kind == EnsembleKind::FullSymmetric {
        for i in 0..n {
            for j in i..n {
                out.set(i, j, T::lit(spec.base.sample(rng)));
            }
        }
    } else {
        let b: Vec<T> = (0..spec.kind.num_variables(n))
            .map(|_| T::lit(spec.base.sample(rng)))
            .collect();
        let diag: Vec<T> = (0..n).map(|d| b[spec.kind.variable_index(n, 0, d)]).collect();
        for i in 0..n {
            for j in i..n {
                out.set(i, j, diag[j - i]);
            }
        }
    }
    Ok(out)
}

/// Symmetric `±1` matrix with independent entries on and above the diagonal,
/// `+1` with probability `p`.
pub fn sample_sign_mask(size: usize, p: f64, seed: u64) -> Result<SignMatrix> {
    sample_sign_mask_with_rng(size, p, &mut stream(seed, 0))
}

pub fn sample_sign_mask_with_rng<R: Rng + ?Sized>(size: usize, p: f64, rng: &mut R) -> Result<SignMatrix> {
    check_p(p)?;
    let mut mask = SignMatrix::ones(size);
    if p < 1.0 {
        for i in 0..size {
            for j in i..size {
                if rng.random::<f64>() >= p {
                    mask.set(i, j, -1);
                }
            }
        }
    }
    Ok(mask)
}

/// The matrix for Monte Carlo sample `index`: structured draw, then sign mask.
pub fn sample_signed<T: Real>(spec: &EnsembleSpec, index: u64) -> Result<SymmetricMatrix<T>> {
    let mut rng: StreamRng = stream(spec.seed, index);
    let a = sample_matrix_with_rng(spec, &mut rng)?;
    if spec.p >= 1.0 {
        return Ok(a);
    }
    let mask = sample_sign_mask_with_rng(spec.size, spec.p, &mut rng)?;
    hadamard(&a, &mask)
}
