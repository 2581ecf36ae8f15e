//! Statistics of `Y_{2k}`, the number of vertices of a uniformly random
//! pairing of `2k` points that lie on a crossing chord.
//!
//! Exact values come from a finite binomial-ratio sum (mean) and from the
//! two-chord probabilities `p_a`, `p_b` (second moment). The hypergeometric
//! expression for the mean and the Monte Carlo estimator are alternate paths
//! checked against the exact ones.

mod hypergeometric;
mod montecarlo;

pub use hypergeometric::hyp2f1_at_minus_one;
pub use montecarlo::{monte_carlo_crossing, SampleMoments, MC_BATCH};

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{invalid, Result};
use crate::numbers::{binomial, binomial_int, double_factorial, matching_count};
use crate::pairings::{crossing_census, Cap};
use crate::scalar::Real;
use crate::Rational;

fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    Rational::new(num.into(), den.into())
}

fn require_k(k: usize) -> Result<()> {
    if k < 2 {
        return Err(invalid(format!("crossing statistics need k >= 2, got {k}")));
    }
    Ok(())
}

/// Terms `binom(k-2, m-2) / binom(2k-3, 2m-3)` for `m = 2..k-1`.
pub fn mean_sum_terms(k: usize) -> Result<Vec<Rational>> {
    require_k(k)?;
    let k = k as i64;
    Ok((2..k)
        .map(|m| ratio(binomial_int(k - 2, m - 2), binomial_int(2 * k - 3, 2 * m - 3)))
        .collect())
}

/// Exact `E(Y_{2k})`.
pub fn mean_crossing_exact(k: usize) -> Result<Rational> {
    let sum: Rational = mean_sum_terms(k)?.into_iter().sum();
    let k = k as i64;
    let lead = ratio(2 * k * (2 * k - 3), 2 * k - 1);
    Ok(lead - ratio(2 * k, 2 * k - 1) * sum)
}

/// The same mean written with two hypergeometric values at `-1`.
pub fn mean_crossing_hypergeometric<T: Real>(k: usize) -> Result<T> {
    require_k(k)?;
    let kf = T::from_usize(k).ok_or_else(|| invalid("k not representable"))?;
    let one = T::one();
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let f1 = hyp2f1_at_minus_one(one, T::lit(1.5), T::lit(2.5) - kf)?;
    let f2 = hyp2f1_at_minus_one(one, half + kf, T::lit(1.5))?;
    let n = two * kf;
    Ok(n / (n - one) * (n - two - f1 / (n - T::lit(3.0)) - (n - one) * f2))
}

/// Leading asymptotics `2k - 2 - 2/k`.
pub fn mean_asymptotic(k: usize) -> f64 {
    let k = k as f64;
    2.0 * k - 2.0 - 2.0 / k
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingMoments {
    pub mean: Rational,
    pub variance: Rational,
}

/// Exact mean and variance of `Y_{2k}` by exhaustive enumeration.
pub fn crossing_moments_enumerated(k: usize, cap: Cap) -> Result<CrossingMoments> {
    let census = crossing_census(k, cap)?;
    let total = BigInt::from(census.total());
    let mut first = BigInt::zero();
    let mut second = BigInt::zero();
    for (&m, count) in &census.cr {
        let y = BigInt::from(2 * m);
        let c = BigInt::from(count.clone());
        second += &y * &y * &c;
        first += y * c;
    }
    let mean = Rational::new(first, total.clone());
    let variance = Rational::new(second, total) - &mean * &mean;
    Ok(CrossingMoments { mean, variance })
}

/// Probabilities for two distinct chords of a random pairing.
///
/// `p_a`: the two chords cross each other.
/// `p_b`: both chords are crossing chords, given that they do not cross each other.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChordCrossingProbs {
    pub p_a: Rational,
    pub p_b: Rational,
}

/// `p_a` as a sum over the position of the partner of a fixed vertex.
pub fn p_a(k: usize) -> Result<Rational> {
    require_k(k)?;
    let n = 2 * k as i64;
    let den = (n - 1) * (n - 2) * (n - 3);
    Ok((2..=n).map(|m| ratio(2 * (m - 2) * (n - m), den)).sum())
}

/// Number of completions of the two non-crossing chords `(1, m)` and
/// `(p, q)` (1-based, `1 < m < p < q <= 2k`) in which at most one of them is
/// crossed by some other chord.
pub fn n_kmpq(k: usize, m: usize, p: usize, q: usize) -> Result<BigUint> {
    require_k(k)?;
    if !(1 < m && m < p && p < q && q <= 2 * k) {
        return Err(invalid(format!(
            "need 1 < m < p < q <= 2k, got m={m} p={p} q={q} with k={k}"
        )));
    }
    let l = m - 2;
    let r = q - p - 1;
    let mid = p - m - 1 + 2 * k - q;
    Ok(n_by_gaps(k, l, mid, r, &|x| matching_count(x)))
}

fn n_by_gaps(k: usize, l: usize, mid: usize, r: usize, pm: &dyn Fn(usize) -> BigUint) -> BigUint {
    if l == 0 || r == 0 {
        return double_factorial(2 * k as i64 - 5);
    }
    pm(l + mid) * pm(r) + pm(r + mid) * pm(l) - pm(l) * pm(mid) * pm(r)
}

/// Exact `p_b`. The sum over `(m, p, q)` depends only on the gap sizes
/// `(L, M, R)`, and each `(L, R)` occurs `M + 1` times.
pub fn p_b(k: usize) -> Result<Rational> {
    require_k(k)?;
    let table: Vec<BigUint> = (0..=2 * k).map(matching_count).collect();
    let pm = |x: usize| table[x].clone();
    let gaps = 2 * k - 4;
    let mut sum = BigUint::zero();
    for l in 0..=gaps {
        for r in 0..=gaps - l {
            let mid = gaps - l - r;
            sum += n_by_gaps(k, l, mid, r, &pm) * BigUint::from(mid + 1);
        }
    }
    let den = binomial(2 * k as i64 - 1, 3) * double_factorial(2 * k as i64 - 5);
    Ok(Rational::from_integer(1.into()) - ratio(sum, den))
}

pub fn chord_crossing_probs(k: usize) -> Result<ChordCrossingProbs> {
    Ok(ChordCrossingProbs { p_a: p_a(k)?, p_b: p_b(k)? })
}

/// Exact `Var(Y_{2k})` from `E(Y^2) = 2 E(Y) + 4k(k-1) (p_a + (1 - p_a) p_b)`.
pub fn variance_exact(k: usize) -> Result<Rational> {
    let mean = mean_crossing_exact(k)?;
    let ChordCrossingProbs { p_a, p_b } = chord_crossing_probs(k)?;
    let one = Rational::from_integer(1.into());
    let pairs = Rational::from_integer(BigInt::from(4 * k * (k - 1)));
    let second = Rational::from_integer(2.into()) * &mean + pairs * (&p_a + (one - &p_a) * p_b);
    Ok(second - &mean * &mean)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Enumeration,
    ExactSum,
    Hypergeometric,
    MonteCarlo,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Enumeration => "enumeration",
            Method::ExactSum => "exact-sum",
            Method::Hypergeometric => "hypergeometric",
            Method::MonteCarlo => "monte-carlo",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Variance {
    Exact(Rational),
    Estimate(f64),
}

impl Variance {
    pub fn to_f64(&self) -> f64 {
        match self {
            Variance::Exact(v) => rational_to_f64(v),
            Variance::Estimate(v) => *v,
        }
    }
}

pub(crate) fn rational_to_f64(v: &Rational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingStatsReport {
    pub k: usize,
    pub mean_exact: Rational,
    pub mean_hypergeometric: f64,
    pub mean_asymptotic: f64,
    pub variance: Variance,
    pub method: Method,
    /// Monte Carlo only.
    pub sample: Option<SampleMoments>,
}

impl CrossingStatsReport {
    /// Mean produced by the report's method.
    pub fn mean_float(&self) -> f64 {
        match (&self.method, &self.sample) {
            (Method::MonteCarlo, Some(s)) => s.mean,
            (Method::Hypergeometric, _) => self.mean_hypergeometric,
            _ => rational_to_f64(&self.mean_exact),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut out = json!({
            "k": self.k,
            "mean_exact": self.mean_exact.to_string(),
            "mean_float": self.mean_float(),
            "mean_hypergeometric": self.mean_hypergeometric,
            "mean_asymptotic": self.mean_asymptotic,
            "variance": self.variance.to_f64(),
            "method": self.method.name(),
            "trials": self.sample.as_ref().map(|s| s.trials),
            "seed": self.sample.as_ref().map(|s| s.seed),
            "stderr": self.sample.as_ref().map(|s| s.mean_stderr),
        });
        if let Variance::Exact(v) = &self.variance {
            out["variance_exact"] = Value::String(v.to_string());
        }
        if let Some(s) = &self.sample {
            out["variance_stderr"] = json!(s.variance_stderr);
        }
        out
    }
}

fn base_report(k: usize, method: Method, variance: Variance) -> Result<CrossingStatsReport> {
    Ok(CrossingStatsReport {
        k,
        mean_exact: mean_crossing_exact(k)?,
        mean_hypergeometric: mean_crossing_hypergeometric::<f64>(k)?,
        mean_asymptotic: mean_asymptotic(k),
        variance,
        method,
        sample: None,
    })
}

/// Report built from the exact sums; no enumeration, any `k >= 2`.
pub fn exact_report(k: usize) -> Result<CrossingStatsReport> {
    base_report(k, Method::ExactSum, Variance::Exact(variance_exact(k)?))
}

/// Report whose variance comes from the exhaustive census.
pub fn enumerated_report(k: usize, cap: Cap) -> Result<CrossingStatsReport> {
    let moments = crossing_moments_enumerated(k, cap)?;
    base_report(k, Method::Enumeration, Variance::Exact(moments.variance))
}

#[cfg(test)]
mod tests;
