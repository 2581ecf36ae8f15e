//! Self-check suites run by `chordmoments verify`.
//!
//! Each suite is a list of named checks with a pass flag and a short detail
//! string. A check that errors counts as a failure.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigUint;
use serde::Serialize;
use serde_json::Value;

use crate::crossing_stats::{
    crossing_moments_enumerated, mean_asymptotic, mean_crossing_exact, mean_crossing_hypergeometric,
    monte_carlo_crossing, p_a, variance_exact, Variance,
};
use crate::ensembles::{sample_signed, BaseDistribution, EnsembleKind, EnsembleSpec, Matrix64};
use crate::error::{invalid, Error, Result};
use crate::numbers::pairing_count;
use crate::pairings::{
    catalan_convolution, classify, closed_form_cr, configuration_classes, crossing_census, nc_nd_placement_count,
    verify_nc_nd_placement, Cap, EdgeClass, Pairing, MAX_CLOSED_FORM_M,
};
use crate::scalar::Scalar;
use crate::spectra::{eigenvalues, ensemble_moments};
use crate::theory::{
    brute_force_finite_moment, palindromic_lower_bound, signed_moment_palindromic, toeplitz_x,
};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Combinatorics,
    CrossingStats,
    Spectra,
    Theory,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Combinatorics, Suite::CrossingStats, Suite::Spectra, Suite::Theory];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Combinatorics => "combinatorics",
            Suite::CrossingStats => "crossing-stats",
            Suite::Spectra => "spectra",
            Suite::Theory => "theory",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| invalid(format!("unknown suite '{s}' (expected one of combinatorics, crossing-stats, spectra, theory)")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    /// Wall time; left out of the JSON so reruns compare equal.
    #[serde(skip)]
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub quick: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["passed"] = Value::Bool(self.passed());
        v
    }
}

/// Outcome of one check: pass flag and detail, or an error (a failure).
type Outcome = Result<(bool, String)>;

fn run_check(name: &str, f: impl FnOnce() -> Outcome) -> Check {
    let start = Instant::now();
    let (passed, detail) = match f() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    Check { name: name.to_string(), passed, detail, seconds: start.elapsed().as_secs_f64() }
}

pub fn run(suite: Suite, quick: bool) -> SuiteReport {
    let checks = match suite {
        Suite::Combinatorics => combinatorics(quick),
        Suite::CrossingStats => crossing_stats(quick),
        Suite::Spectra => spectra(quick),
        Suite::Theory => theory(quick),
    };
    SuiteReport { suite, quick, checks }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn combinatorics(quick: bool) -> Vec<Check> {
    let k_max = if quick { 6 } else { 7 };
    let mut checks = Vec::new();
    let censuses: Vec<_> = (1..=k_max).map(|k| crossing_census(k, Cap(k_max))).collect();

    checks.push(run_check("census-totals", || {
        for (k, c) in (1..).zip(&censuses) {
            let c = c.as_ref().map_err(Clone::clone)?;
            if c.total() != pairing_count(k) {
                return Ok((false, format!("k={k}: total {} != (2k-1)!!", c.total())));
            }
        }
        Ok((true, format!("sum over m equals (2k-1)!! for k=1..{k_max}")))
    }));

    checks.push(run_check("census-closed-forms", || {
        for (k, c) in (1..).zip(&censuses) {
            let c = c.as_ref().map_err(Clone::clone)?;
            for m in 0..=k.min(MAX_CLOSED_FORM_M) {
                let want = closed_form_cr(k, m)?;
                if c.cr(m) != want {
                    return Ok((false, format!("k={k} m={m}: census {} vs closed form {want}", c.cr(m))));
                }
            }
        }
        Ok((true, format!("m <= {MAX_CLOSED_FORM_M} agree for k=1..{k_max}")))
    }));

    checks.push(run_check("fully-crossing-counts", || {
        let want = [(2usize, 1u32), (3, 4), (4, 31), (5, 288)];
        for (k, v) in want {
            let got = censuses[k - 1].as_ref().map_err(Clone::clone)?.cr(k);
            if got != BigUint::from(v) {
                return Ok((false, format!("Cr_{{{0},{0}}} = {got}, expected {v}", 2 * k)));
            }
        }
        Ok((true, "Cr_{4,4}=1, Cr_{6,6}=4, Cr_{8,8}=31, Cr_{10,10}=288".into()))
    }));

    let placement_k = if quick { 5 } else { 6 };
    checks.push(run_check("nc-nd-placement", || {
        let mut cases = 0;
        for v in 1..=placement_k {
            // two vertices admit no crossing partial; use the single edge
            let partials: Vec<Pairing> = if v == 1 {
                vec![Pairing::from_edges(&[(0, 1)])?]
            } else {
                configuration_classes(v, Cap(placement_k))?
                    .into_iter()
                    .map(|c| c.canonical)
                    .filter(|c| classify(c).edge_class.iter().all(|&e| e == EdgeClass::Crossing))
                    .collect()
            };
            for k in v..=placement_k {
                let want = nc_nd_placement_count(k, v)?;
                for partial in &partials {
                    let got = verify_nc_nd_placement(k, partial, Cap(placement_k))?;
                    if got.count != want || (v > 1 && !got.is_consistent(v)) {
                        return Ok((false, format!("k={k} v={v} partial {partial}: {} vs {want}", got.count)));
                    }
                    cases += 1;
                }
            }
        }
        Ok((true, format!("{cases} (k, partial) cases match binom(2k, k-v) for k <= {placement_k}")))
    }));

    let conv_n = if quick { 10 } else { 12 };
    checks.push(run_check("catalan-convolution", || {
        for n in 1..=conv_n {
            for r in 1..=n {
                let s = catalan_convolution(n, r)?;
                if !s.holds() {
                    return Ok((false, format!("n={n} r={r}: {} vs {}", s.lhs, s.rhs)));
                }
            }
        }
        Ok((true, format!("holds for all r <= n <= {conv_n}")))
    }));
    checks
}

fn crossing_stats(quick: bool) -> Vec<Check> {
    let k_max = if quick { 6 } else { 7 };
    let mut checks = Vec::new();

    checks.push(run_check("mean-variance-vs-enumeration", || {
        for k in 2..=k_max {
            let e = crossing_moments_enumerated(k, Cap(k_max))?;
            let (mean, var) = (mean_crossing_exact(k)?, variance_exact(k)?);
            if e.mean != mean || e.variance != var {
                return Ok((false, format!("k={k}: enumerated ({}, {}) vs exact ({mean}, {var})", e.mean, e.variance)));
            }
        }
        Ok((true, format!("exact for k=2..{k_max}; mean(2)=4/3, mean(3)=16/5")))
    }));

    checks.push(run_check("hypergeometric-mean", || {
        let mut worst = 0.0f64;
        for k in 2..=50 {
            let exact = mean_crossing_exact(k)?.to_f64_lossy();
            let h: f64 = mean_crossing_hypergeometric(k)?;
            worst = worst.max((h - exact).abs() / exact);
        }
        Ok((worst <= 1e-9, format!("max relative error {worst:.2e} over k=2..50")))
    }));

    checks.push(run_check("asymptotic-residual", || {
        let mut worst = 0.0f64;
        for k in 10..=60 {
            let r = (mean_crossing_exact(k)?.to_f64_lossy() - mean_asymptotic(k)).abs() * (k * k) as f64;
            worst = worst.max(r);
        }
        Ok((worst < 7.0, format!("max k^2 |mean - (2k-2-2/k)| = {worst:.4} over k=10..60")))
    }));

    checks.push(run_check("p_a-one-third", || {
        let top = if quick { 30 } else { 80 };
        for k in 2..=top {
            if p_a(k)? != q(1, 3) {
                return Ok((false, format!("p_a({k}) != 1/3")));
            }
        }
        Ok((true, format!("p_a = 1/3 exactly for k=2..{top}")))
    }));

    let (ks, trials): (&[usize], u64) = if quick { (&[50], 20_000) } else { (&[50, 100, 200], 100_000) };
    checks.push(run_check("variance-near-four", || {
        let mut parts = Vec::new();
        let mut ok = true;
        for &k in ks {
            let r = monte_carlo_crossing(k, trials, 2024)?;
            let v = match r.variance {
                Variance::Estimate(v) => v,
                Variance::Exact(ref v) => v.to_f64_lossy(),
            };
            ok &= (3.4..=4.6).contains(&v);
            parts.push(format!("k={k}: {v:.3}"));
        }
        Ok((ok, format!("{} ({trials} trials, band [3.4, 4.6])", parts.join(", "))))
    }));
    checks
}

fn spectra(quick: bool) -> Vec<Check> {
    let mut checks = Vec::new();
    let per_kind = if quick { 5 } else { 20 };
    checks.push(run_check("trace-identity", || {
        let kinds = [
            EnsembleKind::FullSymmetric,
            EnsembleKind::Toeplitz,
            EnsembleKind::PalindromicToeplitz,
            EnsembleKind::HighlyPalindromic(1),
            EnsembleKind::HighlyPalindromic(2),
        ];
        let mut worst = 0.0f64;
        for (t, kind) in kinds.into_iter().enumerate() {
            let spec = EnsembleSpec::new(kind, 64, 0.75).with_seed(7 + t as u64);
            for s in 0..per_kind {
                let a: Matrix64 = sample_signed(&spec, s)?;
                let spectrum = eigenvalues(&a)?;
                for (k, tr) in trace_powers(&a, 8).into_iter().enumerate().skip(2).step_by(2) {
                    worst = worst.max((spectrum.power_sum(k) - tr).abs() / tr.abs());
                }
            }
        }
        Ok((worst <= 1e-8, format!("max relative gap {worst:.2e} over {per_kind} matrices x 5 kinds, k=2,4,6,8")))
    }));

    if !quick {
        checks.push(run_check("palindromic-endpoints", || {
            let mut parts = Vec::new();
            let mut ok = true;
            for (p, m4, m6) in [(0.5, 2.0, 5.0), (1.0, 3.0, 15.0)] {
                let spec = EnsembleSpec::new(EnsembleKind::PalindromicToeplitz, 512, p).with_seed(99);
                let r = ensemble_moments::<f64>(&spec, 40, 6)?;
                for (k, want) in [(4, m4), (6, m6)] {
                    let z = (r.moment(k).mean - want) / r.moment(k).stderr;
                    ok &= z.abs() <= 5.0;
                    parts.push(format!("p={p} M{k}={:.3} (z={z:.2})", r.moment(k).mean));
                }
            }
            Ok((ok, parts.join(", ")))
        }));
    }
    checks
}

/// `Trace(A^j)` for `j = 0..=k_max` by repeated dense products.
fn trace_powers(a: &Matrix64, k_max: usize) -> Vec<f64> {
    let n = a.size();
    let base = a.as_slice();
    let mut power = base.to_vec();
    let mut out = vec![n as f64, (0..n).map(|i| base[i * n + i]).sum()];
    let mut next = vec![0.0; n * n];
    for _ in 2..=k_max {
        next.iter_mut().for_each(|x| *x = 0.0);
        for i in 0..n {
            for l in 0..n {
                let x = power[i * n + l];
                for j in 0..n {
                    next[i * n + j] += x * base[l * n + j];
                }
            }
        }
        std::mem::swap(&mut power, &mut next);
        out.push((0..n).map(|i| power[i * n + i]).sum());
    }
    out
}

fn theory(quick: bool) -> Vec<Check> {
    let mut checks = Vec::new();
    checks.push(run_check("lower-bound", || {
        for k in 1..=7 {
            for p in [q(3, 5), q(3, 4), q(9, 10)] {
                let m = signed_moment_palindromic(k, &p, Cap(7))?.value;
                if m < palindromic_lower_bound(k, &p) {
                    return Ok((false, format!("k={k} p={p}: {m} below bound")));
                }
            }
        }
        Ok((true, "M_2k(p) >= (2p-1)^2k (2k-1)!! for k <= 7, p in {3/5, 3/4, 9/10}".into()))
    }));

    checks.push(run_check("interpolation-fourth-moment", || {
        let limit = signed_moment_palindromic(2, &q(3, 4), Cap(2))?.value;
        if limit != q(33, 16) {
            return Ok((false, format!("M_4(3/4) = {limit}, expected 33/16")));
        }
        let sizes: &[usize] = if quick { &[4, 8] } else { &[4, 8, 16] };
        let mut gaps = Vec::new();
        for &n in sizes {
            let m = brute_force_finite_moment(
                n,
                4,
                EnsembleKind::PalindromicToeplitz,
                &q(3, 4),
                BaseDistribution::StandardGaussian,
            )?;
            gaps.push((m - &limit).to_f64_lossy().abs());
        }
        let shrinking = gaps.windows(2).all(|w| w[1] < w[0]);
        Ok((shrinking, format!("M_4(3/4) = 33/16; finite-N gaps {gaps:.4?} for N = {sizes:?}")))
    }));

    checks.push(run_check("toeplitz-crossing-volume", || {
        let c = Pairing::from_edges(&[(0, 2), (1, 3)])?;
        let grid = grid_crossing_k2(if quick { 400 } else { 2000 });
        let x = toeplitz_x(&c, if quick { 50_000 } else { 200_000 }, 17)?;
        let ok = (x.estimate - grid).abs() <= x.ci;
        Ok((ok, format!("monte carlo {:.5} +- {:.5}, grid {grid:.5}", x.estimate, x.ci)))
    }));

    checks
}

/// Midpoint-rule volume of the crossing pairing on four vertices: steps
/// `a, b` give the walk `0, a, a+b, b`.
pub fn grid_crossing_k2(n: usize) -> f64 {
    let h = 2.0 / n as f64;
    let mut acc = 0.0;
    for i in 0..n {
        let a = -1.0 + (i as f64 + 0.5) * h;
        for j in 0..n {
            let b = -1.0 + (j as f64 + 0.5) * h;
            let lo = 0.0f64.min(a).min(a + b).min(b);
            let hi = 0.0f64.max(a).max(a + b).max(b);
            acc += (1.0 - (hi - lo)).max(0.0);
        }
    }
    acc * h * h
}
