use num_bigint::BigUint;
use proptest::prelude::*;

use super::*;
use crate::numbers::binomial;
use crate::pairings::{classify, enumerate_pairings, EdgeClass, Pairing};

fn q(n: i64, d: i64) -> Rational {
    ratio(n, d)
}

#[test]
fn exact_mean_small_values() {
    let want = [(2, q(4, 3)), (3, q(16, 5)), (4, q(184, 35)), (5, q(464, 63)), (6, q(2188, 231))];
    for (k, v) in want {
        assert_eq!(mean_crossing_exact(k).unwrap(), v, "k={k}");
    }
}

#[test]
fn exact_mean_rejects_small_k() {
    assert!(mean_crossing_exact(1).is_err());
    assert!(mean_crossing_hypergeometric::<f64>(0).is_err());
}

#[test]
fn enumerated_moments_match_exact_sums() {
    for k in 2..=7 {
        let enumerated = crossing_moments_enumerated(k, Cap::DEFAULT).unwrap();
        assert_eq!(enumerated.mean, mean_crossing_exact(k).unwrap(), "mean k={k}");
        assert_eq!(enumerated.variance, variance_exact(k).unwrap(), "variance k={k}");
    }
}

#[test]
fn enumerated_variance_values() {
    let want = [
        (2, q(32, 9)),
        (3, q(144, 25)),
        (4, q(23872, 3675)),
        (5, q(25616, 3969)),
        (6, q(1635904, 266805)),
    ];
    for (k, v) in want {
        assert_eq!(crossing_moments_enumerated(k, Cap::DEFAULT).unwrap().variance, v, "k={k}");
    }
}

#[test]
fn variance_heads_towards_four() {
    let dist: Vec<f64> = (8..=60).map(|k| (rational_to_f64(&variance_exact(k).unwrap()) - 4.0).abs()).collect();
    assert!(dist.windows(2).all(|w| w[1] < w[0]));
    assert!(dist.last().unwrap() < &0.11);
}

#[test]
fn hypergeometric_mean_matches_exact() {
    for k in 2..=50 {
        let exact = rational_to_f64(&mean_crossing_exact(k).unwrap());
        let hyp: f64 = mean_crossing_hypergeometric(k).unwrap();
        assert!(((hyp - exact) / exact).abs() <= 1e-9, "k={k}: {hyp} vs {exact}");
    }
    let hyp: f64 = mean_crossing_hypergeometric(2).unwrap();
    assert!((hyp - 4.0 / 3.0).abs() < 1e-12);
}

#[test]
fn hypergeometric_values_back_substitute() {
    // Solve the mean expression for one hypergeometric value, given the other.
    for k in [3usize, 10] {
        let kf = k as f64;
        let n = 2.0 * kf;
        let exact = rational_to_f64(&mean_crossing_exact(k).unwrap());
        let f1: f64 = hyp2f1_at_minus_one(1.0, 1.5, 2.5 - kf).unwrap();
        let f2: f64 = hyp2f1_at_minus_one(1.0, 0.5 + kf, 1.5).unwrap();
        let f2_from_mean = (n - 2.0 - f1 / (n - 3.0) - exact * (n - 1.0) / n) / (n - 1.0);
        assert!(f2.is_finite());
        assert!((f2 - f2_from_mean).abs() < 1e-12 * f2.abs().max(1.0), "k={k}");
    }
}

#[test]
fn mean_residual_is_order_inverse_square() {
    let scaled: Vec<f64> = (10..=60)
        .map(|k| {
            let m = rational_to_f64(&mean_crossing_exact(k).unwrap());
            (k * k) as f64 * (m - mean_asymptotic(k)).abs()
        })
        .collect();
    assert!(scaled.windows(2).all(|w| w[1] <= w[0]));
    assert!(scaled.iter().all(|&s| s < 7.0));
}

#[test]
fn first_and_last_sum_terms() {
    for k in 3..=40 {
        let terms = mean_sum_terms(k).unwrap();
        let want = q(1, 2 * k as i64 - 3);
        assert_eq!(terms.first().unwrap(), &want);
        assert_eq!(terms.last().unwrap(), &want);
    }
    assert!(mean_sum_terms(2).unwrap().is_empty());
}

#[test]
fn p_a_is_one_third() {
    for k in 2..=80 {
        assert_eq!(p_a(k).unwrap(), q(1, 3), "k={k}");
    }
}

/// `P(both chords crossing | they do not cross each other)` over all pairings.
fn p_b_enumerated(k: usize) -> Rational {
    let (mut num, mut den) = (0i64, 0i64);
    for pairing in enumerate_pairings(k, Cap::DEFAULT).unwrap() {
        let edges: Vec<_> = pairing.edges().collect();
        let class = classify(&pairing).edge_class;
        for (i, &(a, b)) in edges.iter().enumerate() {
            for (j, &(x, y)) in edges.iter().enumerate() {
                let cross = (a < x && x < b && b < y) || (x < a && a < y && y < b);
                if i != j && !cross {
                    den += 1;
                    if class[i] == EdgeClass::Crossing && class[j] == EdgeClass::Crossing {
                        num += 1;
                    }
                }
            }
        }
    }
    q(num, den)
}

#[test]
fn p_b_matches_enumeration() {
    let want = [(2, q(0, 1)), (3, q(1, 10)), (4, q(5, 21)), (5, q(38, 105)), (6, q(888, 1925))];
    for (k, v) in want {
        assert_eq!(p_b(k).unwrap(), v, "k={k}");
        if k <= 5 {
            assert_eq!(p_b_enumerated(k), v, "enumerated k={k}");
        }
    }
}

#[test]
fn p_b_grouping_matches_triple_sum() {
    for k in 2..=9 {
        let mut sum = BigUint::zero();
        for m in 2..2 * k - 1 {
            for p in m + 1..2 * k {
                for qq in p + 1..=2 * k {
                    sum += n_kmpq(k, m, p, qq).unwrap();
                }
            }
        }
        let den = binomial(2 * k as i64 - 1, 3) * double_factorial(2 * k as i64 - 5);
        let direct = Rational::from_integer(1.into()) - ratio(sum, den);
        assert_eq!(direct, p_b(k).unwrap(), "k={k}");
    }
}

#[test]
fn p_b_large_k_expansion() {
    for k in [50usize, 100, 200] {
        let pb = rational_to_f64(&p_b(k).unwrap());
        let kf = k as f64;
        let approx = 1.0 - 3.0 / kf - 1.5 / (kf * kf);
        assert!((pb - approx).abs() * kf.powi(3) < 1.0, "k={k}");
    }
}

#[test]
fn n_kmpq_first_case_and_ordering() {
    for (p, qq) in [(3, 4), (3, 8), (5, 7), (6, 8)] {
        assert_eq!(n_kmpq(4, 2, p, qq).unwrap(), BigUint::from(3u32));
    }
    assert!(n_kmpq(4, 1, 3, 4).is_err());
    assert!(n_kmpq(4, 3, 3, 4).is_err());
    assert!(n_kmpq(4, 2, 5, 4).is_err());
    assert!(n_kmpq(4, 2, 5, 9).is_err());
}

#[test]
fn n_kmpq_odd_outer_gaps_force_both_crossed() {
    // L + M + R = 2k - 4, so L and R odd leaves M even; both odd gaps must
    // send a chord across the fixed edges.
    for (k, m, p, qq) in [(4, 3, 5, 7), (5, 3, 5, 9), (6, 5, 7, 9)] {
        let (l, r) = (m - 2, qq - p - 1);
        assert!(l % 2 == 1 && r % 2 == 1);
        assert!(n_kmpq(k, m, p, qq).unwrap().is_zero());
    }
}

#[test]
fn n_kmpq_counts_completions() {
    let k = 4;
    let n = 2 * k;
    for m in 2..n - 1 {
        for p in m + 1..n {
            for qq in p + 1..=n {
                let fixed = [0, m - 1, p - 1, qq - 1];
                let rest: Vec<usize> = (0..n).filter(|v| !fixed.contains(v)).collect();
                let mut count = 0u32;
                for inner in enumerate_pairings(k - 2, Cap::DEFAULT).unwrap() {
                    let mut partner = vec![0; n];
                    partner[0] = m - 1;
                    partner[m - 1] = 0;
                    partner[p - 1] = qq - 1;
                    partner[qq - 1] = p - 1;
                    for (a, b) in inner.edges() {
                        partner[rest[a]] = rest[b];
                        partner[rest[b]] = rest[a];
                    }
                    let pairing = Pairing::from_partners(partner).unwrap();
                    let edges: Vec<_> = pairing.edges().collect();
                    let class = classify(&pairing).edge_class;
                    let state = |e: (usize, usize)| class[edges.iter().position(|&x| x == e).unwrap()];
                    let both = state((0, m - 1)) == EdgeClass::Crossing
                        && state((p - 1, qq - 1)) == EdgeClass::Crossing;
                    if !both {
                        count += 1;
                    }
                }
                assert_eq!(n_kmpq(k, m, p, qq).unwrap(), BigUint::from(count), "m={m} p={p} q={qq}");
            }
        }
    }
}

#[test]
fn monte_carlo_small_k() {
    let report = monte_carlo_crossing(3, 100_000, 7).unwrap();
    let s = report.sample.as_ref().unwrap();
    assert_eq!(s.trials, 100_000);
    assert!((s.mean - 3.2).abs() < 5.0 * s.mean_stderr, "{} +- {}", s.mean, s.mean_stderr);
    assert!((s.variance - 5.76).abs() < 5.0 * s.variance_stderr);

    let report = monte_carlo_crossing(2, 10, 1).unwrap();
    let hist = &report.sample.as_ref().unwrap().histogram;
    assert_eq!(hist[0] + hist[4], 10);
    assert!(monte_carlo_crossing(3, 0, 1).is_err());
}

#[test]
fn monte_carlo_independent_of_thread_count() {
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| monte_carlo_crossing(20, 5_500, 99).unwrap())
    };
    assert_eq!(run(1), run(3));
    assert_ne!(run(1), monte_carlo_crossing(20, 5_500, 100).unwrap());
}

#[test]
fn report_json_shape() {
    let exact = exact_report(3).unwrap().to_json();
    assert_eq!(exact["mean_exact"], "16/5");
    assert_eq!(exact["method"], "exact-sum");
    assert_eq!(exact["variance_exact"], "144/25");
    assert!(exact["trials"].is_null());

    let mc = monte_carlo_crossing(4, 2000, 5).unwrap().to_json();
    assert_eq!(mc["trials"], 2000);
    assert_eq!(mc["seed"], 5);
    assert!(mc["stderr"].as_f64().unwrap() > 0.0);
    assert!(mc.get("variance_exact").is_none());

    let en = enumerated_report(4, Cap::DEFAULT).unwrap();
    assert_eq!(en.variance, Variance::Exact(q(23872, 3675)));
}

proptest! {
    #[test]
    fn exact_mean_within_bounds(k in 2usize..120) {
        let m = rational_to_f64(&mean_crossing_exact(k).unwrap());
        prop_assert!(m >= 0.0 && m <= 2.0 * k as f64);
        prop_assert!(rational_to_f64(&variance_exact(k).unwrap()) >= 0.0);
    }
}
