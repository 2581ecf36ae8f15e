use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{base_report, require_k, CrossingStatsReport, Method, Variance};
use crate::error::{invalid, Result};
use crate::pairings::{Analyzer, Pairing};
use crate::rng::{batches, stream};

/// Trials per random stream.
pub const MC_BATCH: u64 = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleMoments {
    pub trials: u64,
    pub seed: u64,
    /// `histogram[y]` = number of sampled pairings with `Y = y`.
    pub histogram: Vec<u64>,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    pub mean_stderr: f64,
    /// Delta-method standard error of the sample variance.
    pub variance_stderr: f64,
}

impl SampleMoments {
    fn from_histogram(trials: u64, seed: u64, histogram: Vec<u64>) -> Self {
        let n = trials as f64;
        let mean = histogram
            .iter()
            .enumerate()
            .map(|(y, &c)| y as f64 * c as f64)
            .sum::<f64>()
            / n;
        let central = |p: i32| -> f64 {
            histogram
                .iter()
                .enumerate()
                .map(|(y, &c)| (y as f64 - mean).powi(p) * c as f64)
                .sum::<f64>()
                / n
        };
        let m2 = central(2);
        let m4 = central(4);
        let variance = if trials > 1 { m2 * n / (n - 1.0) } else { 0.0 };
        SampleMoments {
            trials,
            seed,
            histogram,
            mean,
            variance,
            mean_stderr: (variance / n).sqrt(),
            variance_stderr: ((m4 - m2 * m2).max(0.0) / n).sqrt(),
        }
    }
}

/// Sample `trials` uniform pairings of `2k` points and summarize `Y_{2k}`.
///
/// Trials are split into batches of [`MC_BATCH`], each drawn from its own
/// stream of `seed`, so the result does not depend on the thread count.
pub fn monte_carlo_crossing(k: usize, trials: u64, seed: u64) -> Result<CrossingStatsReport> {
    require_k(k)?;
    if trials == 0 {
        return Err(invalid("monte carlo needs at least one trial"));
    }
    let parts: Vec<Vec<u64>> = batches(trials, MC_BATCH)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(index, size)| {
            let mut rng = stream(seed, index);
            let mut analyzer = Analyzer::new();
            let mut hist = vec![0u64; 2 * k + 1];
            for _ in 0..size {
                let pairing = Pairing::random(k, &mut rng).expect("k >= 2");
                hist[analyzer.crossing_vertices(pairing.partners())] += 1;
            }
            hist
        })
        .collect();
    let mut histogram = vec![0u64; 2 * k + 1];
    for part in parts {
        for (acc, c) in histogram.iter_mut().zip(part) {
            *acc += c;
        }
    }
    let sample = SampleMoments::from_histogram(trials, seed, histogram);
    let mut report = base_report(k, Method::MonteCarlo, Variance::Estimate(sample.variance))?;
    report.sample = Some(sample);
    Ok(report)
}
