//! Limiting signed moments `M_{2k}(p) = Σ_c x(c) (2p-1)^{e(c)}` over pairings
//! `c`, where `e(c)` counts the vertices on crossing chords.
//!
//! * Palindromic Toeplitz: every `x(c) = 1`, so the moment is a polynomial in
//!   `2p - 1` with the crossing census as coefficients; evaluated exactly.
//! * Toeplitz: `x(c)` is a volume, estimated by Monte Carlo per rotation class.
//! * Highly palindromic (`n >= 1`): the crossing count does not determine the
//!   contribution, so only the `p = 1/2` endpoint and `M_2` are predicted.

mod brute;
mod toeplitz;

pub use brute::{brute_force_finite_moment, BRUTE_FORCE_BUDGET};
pub use toeplitz::{signed_moment_toeplitz, toeplitz_x, XEstimate, MIN_X_SAMPLES, Z99};

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use serde_json::{json, Value};

use crate::ensembles::EnsembleKind;
use crate::error::{invalid, Error, Result};
use crate::numbers::{catalan, pairing_count};
use crate::pairings::{closed_form_cr, crossing_census, Cap, MAX_CLOSED_FORM_M};
use crate::scalar::{powu, Scalar};
use crate::spectra::{MomentReport, TheoryValue};
use crate::Rational;

/// Exact `E(ε_{i1 i2} ε_{i2 i3} ... ε_{in i1})` for independent symmetric signs
/// with `P(ε = 1) = p`: each unordered index pair used an odd number of times
/// contributes `2p - 1`, the others contribute 1.
pub fn epsilon_weight<T: Scalar>(cycle: &[usize], p: &T) -> T {
    powu(&T::sign_mean(p), odd_pair_count(cycle))
}

pub(crate) fn odd_pair_count(cycle: &[usize]) -> usize {
    let n = cycle.len();
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    for j in 0..n {
        let (a, b) = (cycle[j], cycle[(j + 1) % n]);
        *seen.entry((a.min(b), a.max(b))).or_default() += 1;
    }
    seen.values().filter(|&&m| m % 2 == 1).count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XMethod {
    /// Every contribution is exactly 1.
    ExactOne,
    MonteCarloVolume,
}

impl XMethod {
    pub fn name(self) -> &'static str {
        match self {
            XMethod::ExactOne => "exact-one",
            XMethod::MonteCarloVolume => "monte-carlo-volume",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum TermLabel {
    /// All pairings with `2m` crossing vertices.
    CrossingVertices(usize),
    /// One rotation class, identified by its canonical partner array.
    Configuration(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term<T> {
    pub label: TermLabel,
    /// Number of pairings in the term.
    pub count: BigUint,
    /// `e(c)`.
    pub crossing_vertices: usize,
    /// `x(c)`; exactly 1 for the palindromic ensemble.
    pub x: f64,
    pub x_ci: Option<f64>,
    /// `count · x · (2p-1)^e`.
    pub weight: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignedMomentPrediction<T> {
    /// The prediction is for the moment of order `2k`.
    pub k: usize,
    pub p: T,
    pub value: T,
    pub decomposition: Vec<Term<T>>,
    pub x_method: XMethod,
    /// 99% half-width, for Monte Carlo predictions.
    pub ci: Option<f64>,
}

impl<T: Scalar + std::fmt::Display> SignedMomentPrediction<T> {
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .decomposition
            .iter()
            .map(|t| {
                let mut o = json!({
                    "weight": t.weight.to_f64_lossy(),
                    "count": t.count.to_string(),
                    "crossing_vertices": t.crossing_vertices,
                    "x": t.x,
                    "x_ci": t.x_ci,
                });
                match &t.label {
                    TermLabel::CrossingVertices(m) => o["m"] = json!(m),
                    TermLabel::Configuration(c) => o["config_id"] = json!(c),
                }
                o
            })
            .collect();
        json!({
            "k": self.k,
            "moment_order": 2 * self.k,
            "p": self.p.to_string(),
            "value": self.value.to_f64_lossy(),
            "value_exact": self.value.to_string(),
            "ci": self.ci,
            "method": self.x_method.name(),
            "decomposition": terms,
        })
    }
}

/// `Cr_{2k,2m}` for every `m`: closed forms when they cover all `m`,
/// otherwise the exhaustive census (subject to the cap).
pub fn crossing_counts(k: usize, cap: Cap) -> Result<BTreeMap<usize, BigUint>> {
    if k <= MAX_CLOSED_FORM_M {
        return (0..=k).map(|m| Ok((m, closed_form_cr(k, m)?))).collect();
    }
    Ok(crossing_census(k, cap)?.cr)
}

/// `M_{2k}(p) = Σ_m Cr_{2k,2m} (2p-1)^{2m}` for the palindromic Toeplitz ensemble.
pub fn signed_moment_palindromic<T: Scalar>(k: usize, p: &T, cap: Cap) -> Result<SignedMomentPrediction<T>> {
    if k == 0 {
        return Err(invalid("moment order 2k needs k >= 1"));
    }
    let w = T::sign_mean(p);
    let mut value = T::zero();
    let mut decomposition = Vec::new();
    for (m, count) in crossing_counts(k, cap)? {
        let weight = T::from_bigint(&BigInt::from(count.clone())) * powu(&w, 2 * m);
        value = value + weight.clone();
        decomposition.push(Term {
            label: TermLabel::CrossingVertices(m),
            count,
            crossing_vertices: 2 * m,
            x: 1.0,
            x_ci: None,
            weight,
        });
    }
    Ok(SignedMomentPrediction { k, p: p.clone(), value, decomposition, x_method: XMethod::ExactOne, ci: None })
}

/// `(2p-1)^{2k} (2k-1)!!`, the contribution of the all-crossing extreme
/// scaled from the Gaussian moment; a lower bound for the palindromic moment.
pub fn palindromic_lower_bound(k: usize, p: &Rational) -> Rational {
    let w = Rational::sign_mean(p);
    powu(&w, 2 * k) * Rational::from_integer(pairing_count(k).into())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryOptions {
    pub mc_samples: u64,
    pub seed: u64,
    pub cap: Cap,
}

impl Default for TheoryOptions {
    fn default() -> Self {
        TheoryOptions { mc_samples: 100_000, seed: 0, cap: Cap::from_env() }
    }
}

/// Limiting value of the rescaled moment of order `order` for ensemble `kind`
/// with sign parameter `p`.
pub fn predict_moment(kind: EnsembleKind, order: usize, p: &Rational, opts: &TheoryOptions) -> TheoryValue {
    let exact = |v: Rational, method: &str| TheoryValue::Value {
        value: v.to_f64_lossy(),
        ci: None,
        method: method.to_string(),
    };
    let half = Rational::new(1.into(), 2.into());
    if order == 0 {
        return exact(Rational::from_integer(1.into()), "normalization");
    }
    if order % 2 == 1 {
        return exact(Rational::from_integer(0.into()), "odd-vanishes");
    }
    let k = order / 2;
    if k == 1 {
        return exact(Rational::from_integer(1.into()), "variance-normalization");
    }
    let catalan_value = || exact(Rational::from_integer(catalan(k).into()), "catalan");
    let unsupported = |e: Error| TheoryValue::Unsupported { reason: e.to_string() };
    match kind {
        EnsembleKind::FullSymmetric => catalan_value(),
        EnsembleKind::PalindromicToeplitz | EnsembleKind::HighlyPalindromic(0) => {
            match signed_moment_palindromic(k, p, opts.cap) {
                Ok(pred) => exact(pred.value, "crossing-census"),
                Err(e) => unsupported(e),
            }
        }
        EnsembleKind::Toeplitz => {
            match signed_moment_toeplitz(k, p.to_f64_lossy(), opts.mc_samples, opts.seed, opts.cap) {
                Ok(pred) => TheoryValue::Value {
                    value: pred.value,
                    ci: pred.ci,
                    method: XMethod::MonteCarloVolume.name().to_string(),
                },
                Err(e) => unsupported(e),
            }
        }
        EnsembleKind::HighlyPalindromic(n) => {
            if *p == half {
                catalan_value()
            } else {
                TheoryValue::Unsupported {
                    reason: format!(
                        "highly palindromic (n = {n}) moments are not determined by crossing counts; \
                         only p = 1/2 and M_2 are predicted"
                    ),
                }
            }
        }
    }
}

/// Fill `report.theory` for every moment order in the report. `p` is the
/// exact sign parameter; it must agree with `report.spec.p`.
pub fn attach_theory(report: &mut MomentReport, p: &Rational, opts: &TheoryOptions) -> Result<()> {
    let pf = p.to_f64_lossy();
    if (pf - report.spec.p).abs() > 1e-12 {
        return Err(invalid(format!("exact p = {p} does not match spec p = {}", report.spec.p)));
    }
    for order in 0..=report.k_max {
        report.theory.insert(order, predict_moment(report.spec.kind, order, p, opts));
    }
    Ok(())
}
