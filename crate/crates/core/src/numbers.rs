//! Exact integer sequences: binomials, double factorials, Catalan numbers.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

/// `binom(n, r)`, zero when `r < 0` or `r > n`.
pub fn binomial(n: i64, r: i64) -> BigUint {
    if n < 0 || r < 0 || r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn binomial_int(n: i64, r: i64) -> BigInt {
    BigInt::from(binomial(n, r))
}

/// `n!! = n (n-2) (n-4) ...`, with `0!! = (-1)!! = 1`.
pub fn double_factorial(n: i64) -> BigUint {
    let mut acc = BigUint::one();
    let mut i = n;
    while i > 1 {
        acc *= i as u64;
        i -= 2;
    }
    acc
}

/// Number of perfect matchings of `2k` points: `(2k-1)!!`.
pub fn pairing_count(k: usize) -> BigUint {
    double_factorial(2 * k as i64 - 1)
}

/// `C_k = binom(2k, k) / (k + 1)`.
pub fn catalan(k: usize) -> BigUint {
    binomial(2 * k as i64, k as i64) / BigUint::from(k + 1)
}

/// Number of ways to pair up `x` points: 0 for odd `x`, 1 for `x = 0`,
/// `(x-1)!!` otherwise.
pub fn matching_count(x: usize) -> BigUint {
    if x % 2 == 1 {
        BigUint::zero()
    } else {
        double_factorial(x as i64 - 1)
    }
}
