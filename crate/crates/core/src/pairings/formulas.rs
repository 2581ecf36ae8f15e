//! Closed forms for crossing counts.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{crossing_census, Cap};
use crate::error::{invalid, Error, Result};
use crate::numbers::{binomial, catalan, pairing_count};

/// Largest `m` with a closed form for `Cr_{2k,2m}`.
pub const MAX_CLOSED_FORM_M: usize = 5;

/// `sum_{d=1}^{k-m} binom(2k, k-m-d) (m+d)`; zero when `k <= m`.
fn dividing_sum(k: usize, m: usize) -> BigUint {
    let (k, m) = (k as i64, m as i64);
    (1..=k - m)
        .map(|d| binomial(2 * k, k - m - d) * BigUint::from((m + d) as u64))
        .sum()
}

/// `Cr_{2k,2m}` for `m <= 5`.
pub fn closed_form_cr(k: usize, m: usize) -> Result<BigUint> {
    if k == 0 {
        return Err(invalid("k must be positive"));
    }
    let b = |shift: i64| binomial(2 * k as i64, k as i64 - shift);
    Ok(match m {
        0 => catalan(k),
        1 => BigUint::zero(),
        2 => b(2),
        3 => BigUint::from(4u32) * b(3),
        4 => BigUint::from(31u32) * b(4) + dividing_sum(k, 4),
        5 => BigUint::from(288u32) * b(5) + BigUint::from(8u32) * dividing_sum(k, 5),
        _ => {
            return Err(Error::Unsupported(format!(
                "no closed form for Cr_{{2k,2m}} with m = {m} > {MAX_CLOSED_FORM_M}"
            )))
        }
    })
}

/// `Cr_{2m,2m}`, the number of pairings of `2m` vertices in which every
/// vertex is crossing.
///
/// For `m <= 6` this uses the recursion `Cr_{2m,2m} = (2m-1)!! - sum_{l<m}
/// Cr_{2m,2l}` over the closed forms; larger `m` falls back to a census.
pub fn full_crossing_count(m: usize, cap: Cap) -> Result<BigUint> {
    match m {
        0 => Ok(BigUint::one()),
        1 => Ok(BigUint::zero()),
        _ if m <= MAX_CLOSED_FORM_M + 1 => {
            let mut rest = BigUint::zero();
            for l in 0..m {
                rest += closed_form_cr(m, l)?;
            }
            Ok(pairing_count(m) - rest)
        }
        _ => Ok(crossing_census(m, cap)?.cr(m)),
    }
}

/// `P_{2k,2m,i}` for one or two partitions.
pub fn partition_formula(k: usize, m: usize, i: usize, cap: Cap) -> Result<BigUint> {
    if m < 2 || m > k {
        return Err(invalid(format!("need 2 <= m <= k, got m = {m}, k = {k}")));
    }
    match i {
        1 => Ok(full_crossing_count(m, cap)? * binomial(2 * k as i64, (k - m) as i64)),
        2 => {
            let mut pair_sum = BigUint::zero();
            for a in 1..m {
                pair_sum += full_crossing_count(a, cap)? * full_crossing_count(m - a, cap)?;
            }
            Ok(dividing_sum(k, m) * pair_sum)
        }
        _ => Err(Error::Unsupported(format!(
            "no formula for P_{{2k,2m,i}} with i = {i}; only one or two partitions are covered"
        ))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvolutionSides {
    /// Explicit sum of `C_{i_1 - 1} ... C_{i_r - 1}` over compositions of `n`
    /// into `r` positive parts.
    pub lhs: BigUint,
    /// `r / (2n - r) * binom(2n - r, n)`.
    pub rhs: BigRational,
}

impl ConvolutionSides {
    pub fn holds(&self) -> bool {
        self.rhs == BigRational::from_integer(BigInt::from(self.lhs.clone()))
    }
}

/// Both sides of the r-fold Catalan self-convolution identity.
pub fn catalan_convolution(n: usize, r: usize) -> Result<ConvolutionSides> {
    if r == 0 || r > n {
        return Err(invalid(format!("need 1 <= r <= n, got n = {n}, r = {r}")));
    }
    let cat: Vec<BigUint> = (0..n).map(catalan).collect();
    let mut lhs = BigUint::zero();
    let mut parts = vec![0usize; r];
    fn walk(
        slot: usize,
        remaining: usize,
        parts: &mut [usize],
        cat: &[BigUint],
        lhs: &mut BigUint,
    ) {
        let r = parts.len();
        if slot == r - 1 {
            parts[slot] = remaining;
            *lhs += parts.iter().map(|&i| &cat[i - 1]).product::<BigUint>();
            return;
        }
        // leave at least one for each later slot
        for i in 1..=remaining - (r - 1 - slot) {
            parts[slot] = i;
            walk(slot + 1, remaining - i, parts, cat, lhs);
        }
    }
    walk(0, n, &mut parts, &cat, &mut lhs);

    let (n, r) = (n as i64, r as i64);
    let rhs = BigRational::new(BigInt::from(r), BigInt::from(2 * n - r))
        * BigRational::from_integer(BigInt::from(binomial(2 * n - r, n)));
    Ok(ConvolutionSides { lhs, rhs })
}
