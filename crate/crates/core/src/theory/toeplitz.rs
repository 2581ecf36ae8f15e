//! Monte Carlo volumes `x(c)` for the Toeplitz ensemble.
//!
//! A pairing `c` of the cyclic index walk `i_1, ..., i_{2k}` forces the steps
//! at the two ends of each chord to be opposite: `i_a - i_{a+1} = -(i_b - i_{b+1})`.
//! With normalized indices, `x(c)` is the volume of starting points
//! `i_1 ∈ [0, 1]` and chord steps `s_e ∈ [-1, 1]` keeping the whole walk in
//! `[0, 1]`. For fixed steps the admissible `i_1` form an interval of length
//! `max(0, 1 - range(walk))`, which is integrated exactly; only the `k` steps
//! are sampled.

use rand::Rng;
use rayon::prelude::*;

use super::{SignedMomentPrediction, Term, TermLabel, XMethod};
use crate::error::{invalid, Result};
use crate::pairings::{configuration_classes, crossing_vertex_count, Cap, Pairing};
use crate::rng::{batches, derive_seed, stream};
use crate::scalar::{powu, Scalar};

pub const MIN_X_SAMPLES: u64 = 10_000;
/// Two-sided 99% normal quantile.
pub const Z99: f64 = 2.576;
const BATCH: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XEstimate {
    /// Clamped to `[0, 1]`.
    pub estimate: f64,
    /// 99% confidence half-width.
    pub ci: f64,
    pub samples: u64,
}

/// `max(0, 1 - range)` of the walk whose steps are `+s_e` at the smaller end
/// of chord `e` and `-s_e` at the larger end.
fn slack(pairing: &Pairing, steps: &[f64], edge_of: &[usize]) -> f64 {
    let (mut pos, mut lo, mut hi) = (0.0f64, 0.0f64, 0.0f64);
    for v in 0..pairing.vertex_count() {
        let s = steps[edge_of[v]];
        pos += if v < pairing.partner(v) { s } else { -s };
        lo = lo.min(pos);
        hi = hi.max(pos);
    }
    (1.0 - (hi - lo)).max(0.0)
}

pub fn toeplitz_x(c: &Pairing, mc_samples: u64, seed: u64) -> Result<XEstimate> {
    if mc_samples < MIN_X_SAMPLES {
        return Err(invalid(format!("need at least {MIN_X_SAMPLES} samples, got {mc_samples}")));
    }
    let k = c.k();
    let mut edge_of = vec![0; c.vertex_count()];
    for (e, (a, b)) in c.edges().enumerate() {
        edge_of[a] = e;
        edge_of[b] = e;
    }
    let volume = 2f64.powi(k as i32);
    let parts: Vec<(f64, f64)> = batches(mc_samples, BATCH)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(index, size)| {
            let mut rng = stream(seed, index);
            let mut steps = vec![0.0; k];
            let (mut sum, mut sq) = (0.0, 0.0);
            for _ in 0..size {
                steps.iter_mut().for_each(|s| *s = rng.random_range(-1.0..=1.0));
                let y = volume * slack(c, &steps, &edge_of);
                sum += y;
                sq += y * y;
            }
            (sum, sq)
        })
        .collect();
    let n = mc_samples as f64;
    let (sum, sq) = parts.iter().fold((0.0, 0.0), |(a, b), &(s, q)| (a + s, b + q));
    let mean = sum / n;
    let var = ((sq - n * mean * mean) / (n - 1.0)).max(0.0);
    Ok(XEstimate { estimate: mean.clamp(0.0, 1.0), ci: Z99 * (var / n).sqrt(), samples: mc_samples })
}

/// `Σ_classes multiplicity · x(c) · (2p-1)^{e(c)}` with Monte Carlo `x(c)`
/// for crossing classes; non-crossing classes have `x = 1`. The half-width
/// combines the per-class intervals in quadrature.
pub fn signed_moment_toeplitz(
    k: usize,
    p: f64,
    mc_samples: u64,
    seed: u64,
    cap: Cap,
) -> Result<SignedMomentPrediction<f64>> {
    if !(0.5..=1.0).contains(&p) {
        return Err(invalid(format!("sign parameter p = {p} outside [1/2, 1]")));
    }
    let w = f64::sign_mean(&p);
    let mut value = 0.0;
    let mut var = 0.0;
    let mut decomposition = Vec::new();
    for (index, class) in configuration_classes(k, cap)?.into_iter().enumerate() {
        let e = crossing_vertex_count(&class.canonical);
        let x = if e == 0 {
            // non-crossing pairings contribute exactly 1
            XEstimate { estimate: 1.0, ci: 0.0, samples: 0 }
        } else {
            toeplitz_x(&class.canonical, mc_samples, derive_seed(seed, index as u64))?
        };
        let scale = class.multiplicity as f64 * powu(&w, e);
        value += scale * x.estimate;
        var += (scale * x.ci).powi(2);
        decomposition.push(Term {
            label: TermLabel::Configuration(class.canonical.partners().to_vec()),
            count: class.multiplicity.into(),
            crossing_vertices: e,
            x: x.estimate,
            x_ci: (e > 0).then_some(x.ci),
            weight: scale * x.estimate,
        });
    }
    Ok(SignedMomentPrediction {
        k,
        p,
        value,
        decomposition,
        x_method: XMethod::MonteCarloVolume,
        ci: Some(var.sqrt()),
    })
}
