//! Eigenvalues and rescaled empirical spectral moments.
//!
//! Eigenvalues are rescaled as `λ / (c N^r)`, by default with `(c, r) = (1, 1/2)`.

mod eigen;

use std::collections::BTreeMap;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::ensembles::{sample_signed, EnsembleSpec, SymmetricMatrix};
use crate::error::{invalid, Result};
use crate::scalar::Real;

pub const EIGENSOLVER: &str = "householder-ql";

pub type Spectrum64 = Spectrum<f64>;
pub type Spectrum32 = Spectrum<f32>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scale {
    pub c: f64,
    pub r: f64,
}

impl Default for Scale {
    fn default() -> Self {
        Scale { c: 1.0, r: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    eigenvalues: Vec<T>,
    pub scale: Scale,
}

impl<T: Real> Spectrum<T> {
    /// Wrap eigenvalues that were computed elsewhere; they are sorted here.
    pub fn from_eigenvalues(mut eigenvalues: Vec<T>) -> Self {
        eigenvalues.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        Spectrum { eigenvalues, scale: Scale::default() }
    }

    pub fn with_scale(mut self, scale: Scale) -> Self {
        self.scale = scale;
        self
    }

    pub fn size(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Ascending.
    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    /// `c N^r`.
    fn divisor(&self) -> T {
        T::lit(self.scale.c * (self.size() as f64).powf(self.scale.r))
    }

    pub fn rescaled(&self) -> impl Iterator<Item = T> + '_ {
        let div = self.divisor();
        self.eigenvalues.iter().map(move |&x| x / div)
    }

    /// `(1/N) Σ (λ / (c N^r))^k`.
    pub fn rescaled_moment(&self, k: usize) -> T {
        let n = T::from_usize(self.size()).expect("size fits");
        let k = i32::try_from(k).expect("moment order fits i32");
        self.rescaled().map(|x| x.powi(k)).sum::<T>() / n
    }

    pub fn power_sum(&self, k: usize) -> T {
        let k = i32::try_from(k).expect("moment order fits i32");
        self.eigenvalues.iter().map(|x| x.powi(k)).sum()
    }
}

/// All eigenvalues of `a`, ascending.
pub fn eigenvalues<T: Real>(a: &SymmetricMatrix<T>) -> Result<Spectrum<T>> {
    Ok(Spectrum { eigenvalues: eigen::symmetric_eigenvalues(a)?, scale: Scale::default() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub k: usize,
    pub mean: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum TheoryValue {
    Value {
        value: f64,
        /// Half-width of a confidence interval when the prediction is itself estimated.
        ci: Option<f64>,
        method: String,
    },
    Unsupported { reason: String },
}

impl TheoryValue {
    pub fn value(&self) -> Option<f64> {
        match self {
            TheoryValue::Value { value, .. } => Some(*value),
            TheoryValue::Unsupported { .. } => None,
        }
    }

    pub fn ci(&self) -> Option<f64> {
        match self {
            TheoryValue::Value { ci, .. } => *ci,
            TheoryValue::Unsupported { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub spec: EnsembleSpec,
    pub samples: usize,
    pub k_max: usize,
    pub precision: String,
    pub eigensolver: String,
    pub scale: Scale,
    /// Indexed by `k = 0..=k_max`.
    pub moments: Vec<MomentEstimate>,
    pub theory: BTreeMap<usize, TheoryValue>,
}

impl MomentReport {
    pub fn moment(&self, k: usize) -> &MomentEstimate {
        &self.moments[k]
    }

    /// `(empirical - theory) / combined error`, when a prediction exists.
    pub fn z_score(&self, k: usize) -> Option<f64> {
        let t = self.theory.get(&k)?;
        let m = self.moments.get(k)?;
        let err = (m.stderr.powi(2) + t.ci().map_or(0.0, |c| (c / 2.576).powi(2))).sqrt();
        let diff = m.mean - t.value()?;
        Some(if err > 0.0 { diff / err } else if diff == 0.0 { 0.0 } else { f64::INFINITY })
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .moments
            .iter()
            .map(|m| {
                json!({
                    "k": m.k,
                    "mean": m.mean,
                    "stderr": m.stderr,
                    "theory": self.theory.get(&m.k),
                    "z": self.z_score(m.k),
                })
            })
            .collect();
        json!({
            "spec": self.spec,
            "samples": self.samples,
            "k_max": self.k_max,
            "precision": self.precision,
            "eigensolver": self.eigensolver,
            "scale": self.scale,
            "moments": rows,
        })
    }

    pub const CSV_HEADER: &'static str = "k,mean,stderr,theory,theory_ci,z,theory_status";

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        let opt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
        for m in &self.moments {
            let t = self.theory.get(&m.k);
            let status = match t {
                None => "none",
                Some(TheoryValue::Value { .. }) => "value",
                Some(TheoryValue::Unsupported { .. }) => "unsupported",
            };
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                m.k,
                m.mean,
                m.stderr,
                opt(t.and_then(|t| t.value())),
                opt(t.and_then(|t| t.ci())),
                opt(self.z_score(m.k)),
                status
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramSpec {
    pub bins: usize,
    pub lo: f64,
    pub hi: f64,
}

impl HistogramSpec {
    pub fn validate(&self) -> Result<()> {
        if self.bins == 0 {
            return Err(invalid("histogram needs at least one bin"));
        }
        if self.lo >= self.hi || !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(invalid(format!("empty histogram range [{}, {}]", self.lo, self.hi)));
        }
        Ok(())
    }
}

/// Pooled histogram of rescaled eigenvalues. Densities are normalized over
/// the values that fall inside the range; the rest are reported separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub density: Vec<f64>,
    pub below: u64,
    pub above: u64,
}

impl Histogram {
    pub fn from_values(spec: HistogramSpec, values: impl IntoIterator<Item = f64>) -> Result<Self> {
        spec.validate()?;
        let width = (spec.hi - spec.lo) / spec.bins as f64;
        let edges: Vec<f64> = (0..=spec.bins).map(|i| spec.lo + width * i as f64).collect();
        let mut counts = vec![0u64; spec.bins];
        let (mut below, mut above) = (0, 0);
        for x in values {
            if x < spec.lo {
                below += 1;
            } else if x > spec.hi {
                above += 1;
            } else {
                let b = (((x - spec.lo) / width) as usize).min(spec.bins - 1);
                counts[b] += 1;
            }
        }
        let inside: u64 = counts.iter().sum();
        let density = counts
            .iter()
            .map(|&c| if inside == 0 { 0.0 } else { c as f64 / (inside as f64 * width) })
            .collect();
        Ok(Histogram { edges, counts, density, below, above })
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.below + self.above
    }

    /// Fraction of all values with `|x| > t`, counting out-of-range values.
    pub fn tail_fraction(&self, t: f64) -> f64 {
        let mut outside = self.below + self.above;
        for (b, &c) in self.counts.iter().enumerate() {
            let mid = 0.5 * (self.edges[b] + self.edges[b + 1]);
            if mid.abs() > t {
                outside += c;
            }
        }
        outside as f64 / self.total().max(1) as f64
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("histogram serializes")
    }

    pub const CSV_HEADER: &'static str = "bin_lo,bin_hi,count,density";

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        for (b, (&c, &d)) in self.counts.iter().zip(&self.density).enumerate() {
            writeln!(out, "{},{},{},{}", self.edges[b], self.edges[b + 1], c, d)?;
        }
        Ok(())
    }
}

fn precision_name<T: Real>() -> &'static str {
    if std::mem::size_of::<T>() == 4 {
        "f32"
    } else {
        "f64"
    }
}

/// Draw `samples` matrices from `spec` (matrix `s` uses stream `s` of
/// `spec.seed`), compute their spectra, and average the rescaled moments
/// `0..=k_max`. When `hist` is given, rescaled eigenvalues are pooled too.
pub fn simulate<T: Real>(
    spec: &EnsembleSpec,
    samples: usize,
    k_max: usize,
    hist: Option<HistogramSpec>,
) -> Result<(MomentReport, Option<Histogram>)> {
    spec.validate()?;
    if samples == 0 {
        return Err(invalid("need at least one sample"));
    }
    if let Some(h) = &hist {
        h.validate()?;
    }
    let per_sample: Vec<(Vec<f64>, Vec<f64>)> = (0..samples as u64)
        .into_par_iter()
        .map(|s| -> Result<_> {
            let a = sample_signed::<T>(spec, s)?;
            let spectrum = eigenvalues(&a)?;
            let moments = (0..=k_max).map(|k| spectrum.rescaled_moment(k).to_f64().unwrap_or(f64::NAN)).collect();
            let pooled = if hist.is_some() {
                spectrum.rescaled().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
            } else {
                Vec::new()
            };
            Ok((moments, pooled))
        })
        .collect::<Result<_>>()?;

    let n = samples as f64;
    let moments = (0..=k_max)
        .map(|k| {
            let mean = per_sample.iter().map(|(m, _)| m[k]).sum::<f64>() / n;
            // NaN for a single sample
            let var = per_sample.iter().map(|(m, _)| (m[k] - mean).powi(2)).sum::<f64>() / (n - 1.0);
            MomentEstimate { k, mean, stderr: (var / n).sqrt() }
        })
        .collect();
    let report = MomentReport {
        spec: spec.clone(),
        samples,
        k_max,
        precision: precision_name::<T>().to_string(),
        eigensolver: EIGENSOLVER.to_string(),
        scale: Scale::default(),
        moments,
        theory: BTreeMap::new(),
    };
    let histogram = match hist {
        Some(h) => Some(Histogram::from_values(h, per_sample.into_iter().flat_map(|(_, e)| e))?),
        None => None,
    };
    Ok((report, histogram))
}

pub fn ensemble_moments<T: Real>(spec: &EnsembleSpec, samples: usize, k_max: usize) -> Result<MomentReport> {
    if samples < 2 {
        return Err(invalid("need at least two samples for standard errors"));
    }
    simulate::<T>(spec, samples, k_max, None).map(|(r, _)| r)
}

pub fn spectral_histogram<T: Real>(spec: &EnsembleSpec, samples: usize, hist: HistogramSpec) -> Result<Histogram> {
    hist.validate()?;
    let (_, h) = simulate::<T>(spec, samples, 0, Some(hist))?;
    Ok(h.expect("histogram requested"))
}

#[cfg(test)]
mod tests;
