use super::*;
use crate::ensembles::{sample_matrix, EnsembleKind, Matrix32, Matrix64};
use crate::error::Error;

fn matmul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for l in 0..n {
            let x = a[i * n + l];
            for j in 0..n {
                c[i * n + j] += x * b[l * n + j];
            }
        }
    }
    c
}

fn traces(a: &Matrix64, k_max: usize) -> Vec<f64> {
    let n = a.size();
    let mut power = a.as_slice().to_vec();
    let mut out = vec![n as f64, (0..n).map(|i| a.get(i, i)).sum()];
    for _ in 2..=k_max {
        power = matmul(&power, a.as_slice(), n);
        out.push((0..n).map(|i| power[i * n + i]).sum());
    }
    out
}

/// Solve `m x = b` by Gaussian elimination with partial pivoting.
fn solve(mut m: Vec<f64>, mut b: Vec<f64>, n: usize) -> Vec<f64> {
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| m[i * n + c].abs().total_cmp(&m[j * n + c].abs())).unwrap();
        for j in 0..n {
            m.swap(c * n + j, piv * n + j);
        }
        b.swap(c, piv);
        let d = if m[c * n + c] == 0.0 { 1e-300 } else { m[c * n + c] };
        for i in c + 1..n {
            let f = m[i * n + c] / d;
            for j in c..n {
                m[i * n + j] -= f * m[c * n + j];
            }
            b[i] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| m[i * n + j] * x[j]).sum();
        let d = if m[i * n + i] == 0.0 { 1e-300 } else { m[i * n + i] };
        x[i] = (b[i] - s) / d;
    }
    x
}

/// Relative residual `|A v - λ v| / |A|` of an eigenvector found by inverse iteration.
fn eigen_residual(a: &Matrix64, lambda: f64) -> f64 {
    let n = a.size();
    let shifted: Vec<f64> = (0..n * n)
        .map(|idx| a.as_slice()[idx] - if idx / n == idx % n { lambda } else { 0.0 })
        .collect();
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + (i as f64 * 0.37).sin()).collect();
    for _ in 0..3 {
        v = solve(shifted.clone(), v, n);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
    }
    let av = a.mul_vec(&v);
    let r: f64 = av.iter().zip(&v).map(|(x, y)| (x - lambda * y).powi(2)).sum::<f64>().sqrt();
    r / a.frobenius_norm()
}

const KINDS: [EnsembleKind; 5] = [
    EnsembleKind::FullSymmetric,
    EnsembleKind::Toeplitz,
    EnsembleKind::PalindromicToeplitz,
    EnsembleKind::HighlyPalindromic(1),
    EnsembleKind::HighlyPalindromic(2),
];

#[test]
fn diagonal_and_two_by_two() {
    let d = Matrix64::from_diagonal(&[3.0, -1.0, 2.0, 0.5]);
    assert_eq!(eigenvalues(&d).unwrap().eigenvalues(), &[-1.0, 0.5, 2.0, 3.0]);
    let swap = Matrix64::from_upper(2, |i, j| if i == j { 0.0 } else { 1.0 });
    let ev = eigenvalues(&swap).unwrap();
    assert!((ev.eigenvalues()[0] + 1.0).abs() < 1e-15 && (ev.eigenvalues()[1] - 1.0).abs() < 1e-15);
    let one = Matrix64::from_diagonal(&[4.0]);
    assert_eq!(eigenvalues(&one).unwrap().eigenvalues(), &[4.0]);
}

#[test]
fn known_tridiagonal_spectrum() {
    // path graph: eigenvalues 2 cos(pi j / (n + 1))
    let n = 40;
    let a = Matrix64::from_upper(n, |i, j| if j == i + 1 { 1.0 } else { 0.0 });
    let got = eigenvalues(&a).unwrap();
    let mut want: Vec<f64> = (1..=n).map(|j| 2.0 * (std::f64::consts::PI * j as f64 / (n + 1) as f64).cos()).collect();
    want.sort_by(f64::total_cmp);
    for (g, w) in got.eigenvalues().iter().zip(&want) {
        assert!((g - w).abs() < 1e-13);
    }
}

#[test]
fn degenerate_spectra() {
    let zero = Matrix64::zeros(5);
    assert!(eigenvalues(&zero).unwrap().eigenvalues().iter().all(|&x| x == 0.0));
    let ones = Matrix64::from_upper(6, |_, _| 1.0);
    let ev = eigenvalues(&ones).unwrap();
    assert!((ev.eigenvalues()[5] - 6.0).abs() < 1e-13);
    assert!(ev.eigenvalues()[..5].iter().all(|x| x.abs() < 1e-13));
}

#[test]
fn trace_identity_all_kinds() {
    for (t, kind) in KINDS.iter().enumerate() {
        for s in 0..4 {
            let spec = EnsembleSpec::new(*kind, 64, 0.75).with_seed(100 + t as u64);
            let a: Matrix64 = sample_signed(&spec, s).unwrap();
            let spectrum = eigenvalues(&a).unwrap();
            let tr = traces(&a, 8);
            for k in (2..=8).step_by(2) {
                let rel = (spectrum.power_sum(k) - tr[k]).abs() / tr[k].abs();
                assert!(rel <= 1e-8, "{kind} k={k} rel={rel}");
                let scaled = tr[k] / 64f64.powf(k as f64 / 2.0 + 1.0);
                assert!((spectrum.rescaled_moment(k) - scaled).abs() <= 1e-8 * scaled.abs());
            }
        }
    }
}

#[test]
fn eigenpair_residuals() {
    let spec = EnsembleSpec::new(EnsembleKind::FullSymmetric, 64, 1.0).with_seed(3);
    let a: Matrix64 = sample_matrix(&spec).unwrap();
    let spectrum = eigenvalues(&a).unwrap();
    for &i in &[0usize, 17, 40, 63] {
        let r = eigen_residual(&a, spectrum.eigenvalues()[i]);
        assert!(r <= 1e-8, "eigenvalue {i}: residual {r}");
    }
}

#[test]
fn single_precision_spectrum() {
    let spec = EnsembleSpec::new(EnsembleKind::Toeplitz, 48, 1.0).with_seed(8);
    let a64: Matrix64 = sample_matrix(&spec).unwrap();
    let a32: Matrix32 = sample_matrix(&spec).unwrap();
    let e64 = eigenvalues(&a64).unwrap();
    let e32 = eigenvalues(&a32).unwrap();
    let scale = e64.eigenvalues().iter().fold(0.0f64, |m, x| m.max(x.abs()));
    for (x, y) in e32.eigenvalues().iter().zip(e64.eigenvalues()) {
        assert!((*x as f64 - y).abs() < 1e-4 * scale);
    }
}

#[test]
fn non_finite_matrix_rejected() {
    let mut a = Matrix64::zeros(3);
    a.set(0, 2, f64::NAN);
    assert!(matches!(eigenvalues(&a), Err(Error::NonFinite)));
}

#[test]
fn rescaled_moment_basics() {
    let s = Spectrum64::from_eigenvalues(vec![2.0, -2.0, 0.0, 4.0]);
    assert_eq!(s.rescaled_moment(0), 1.0);
    // rescaled values: 1, -1, 0, 2
    assert_eq!(s.rescaled_moment(2), 1.5);
    assert_eq!(s.rescaled_moment(3), 2.0);
    let t = s.clone().with_scale(Scale { c: 2.0, r: 0.0 });
    assert_eq!(t.rescaled_moment(2), 1.5);
}

#[test]
fn moments_are_deterministic_and_normalized() {
    let spec = EnsembleSpec::new(EnsembleKind::PalindromicToeplitz, 32, 0.75).with_seed(21);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| ensemble_moments::<f64>(&spec, 12, 4).unwrap())
    };
    let a = run(1);
    assert_eq!(a, run(4));
    assert_eq!(a.moment(0).mean, 1.0);
    assert_eq!(a.moment(0).stderr, 0.0);
    assert!(a.moment(2).mean > 0.0 && a.moment(4).mean > 0.0);
    assert!(ensemble_moments::<f64>(&spec, 1, 4).is_err());
}

#[test]
fn second_moment_is_one_for_full_symmetric() {
    // each entry has variance one, so E Trace(A^2) = N^2 exactly
    let spec = EnsembleSpec::new(EnsembleKind::FullSymmetric, 64, 0.6).with_seed(4);
    let report = ensemble_moments::<f64>(&spec, 20, 2).unwrap();
    let m = report.moment(2);
    assert!((m.mean - 1.0).abs() < 5.0 * m.stderr, "{} +- {}", m.mean, m.stderr);
}

#[test]
fn histogram_normalization() {
    let spec = EnsembleSpec::new(EnsembleKind::FullSymmetric, 40, 1.0).with_seed(1);
    let h = spectral_histogram::<f64>(&spec, 3, HistogramSpec { bins: 25, lo: -2.5, hi: 2.5 }).unwrap();
    let width = 0.2;
    let integral: f64 = h.density.iter().map(|d| d * width).sum();
    assert!((integral - 1.0).abs() < 1e-12);
    assert_eq!(h.total(), 120);
    assert_eq!(h.edges.len(), 26);

    let h = Histogram::from_values(HistogramSpec { bins: 2, lo: 0.0, hi: 1.0 }, [-1.0, 0.0, 0.5, 1.0, 3.0]).unwrap();
    assert_eq!((h.below, h.counts.clone(), h.above), (1, vec![1, 2], 1));
    assert!((h.tail_fraction(0.8) - 0.4).abs() < 1e-15);

    assert!(HistogramSpec { bins: 4, lo: 1.0, hi: 1.0 }.validate().is_err());
    assert!(HistogramSpec { bins: 0, lo: 0.0, hi: 1.0 }.validate().is_err());
}

#[test]
fn report_serialization() {
    let spec = EnsembleSpec::new(EnsembleKind::Toeplitz, 16, 1.0).with_seed(2);
    let mut report = ensemble_moments::<f32>(&spec, 3, 2).unwrap();
    assert_eq!(report.precision, "f32");
    report.theory.insert(2, TheoryValue::Value { value: 1.0, ci: None, method: "exact".into() });
    report.theory.insert(1, TheoryValue::Unsupported { reason: "test".into() });
    let json = report.to_json();
    assert_eq!(json["moments"][2]["theory"]["status"], "value");
    assert_eq!(json["moments"][1]["theory"]["status"], "unsupported");
    assert!(json["moments"][0]["theory"].is_null());
    let mut buf = Vec::new();
    report.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with(MomentReport::CSV_HEADER));
    assert_eq!(text.lines().count(), 4);
}
