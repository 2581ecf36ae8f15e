//! Exact expected moment of a finite sign-weighted ensemble by expanding
//! `E Trace(A^k)` over all index tuples.
//!
//! A tuple `(i_1, ..., i_k)` contributes `E(∏ ε) · E(∏ b)`. Both factors
//! depend only on how often each sign and each random variable repeats, so
//! tuples are tallied by that pattern first and the moments applied once.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::ensembles::{BaseDistribution, EnsembleKind};
use crate::error::{invalid, Error, Result};
use crate::scalar::{powu, Scalar};
use crate::Rational;

/// Maximum number of index tuples `N^k`.
pub const BRUTE_FORCE_BUDGET: u128 = 10_000_000;
/// Multiplicities are packed four bits each into a `u64`.
const MAX_ORDER: usize = 15;

/// `(number of signs used an odd number of times, packed sorted multiplicities)`.
type Pattern = (u32, u64);

struct Walker {
    size: usize,
    k: usize,
    kind: EnsembleKind,
    idx: Vec<usize>,
    pairs: Vec<((usize, usize), u8)>,
    vars: Vec<(usize, u8)>,
    tally: HashMap<Pattern, u64>,
}

fn bump<K: PartialEq>(list: &mut Vec<(K, u8)>, key: K) {
    match list.iter_mut().find(|(x, _)| *x == key) {
        Some((_, c)) => *c += 1,
        None => list.push((key, 1)),
    }
}

impl Walker {
    fn descend(&mut self, depth: usize) {
        if depth == self.k {
            self.leaf();
            return;
        }
        for i in 0..self.size {
            self.idx[depth] = i;
            self.descend(depth + 1);
        }
    }

    fn leaf(&mut self) {
        self.pairs.clear();
        self.vars.clear();
        for j in 0..self.k {
            let (a, b) = (self.idx[j], self.idx[(j + 1) % self.k]);
            bump(&mut self.pairs, (a.min(b), a.max(b)));
            bump(&mut self.vars, self.kind.variable_index(self.size, a, b));
        }
        let odd = self.pairs.iter().filter(|(_, c)| c % 2 == 1).count() as u32;
        let mut mults: Vec<u8> = self.vars.iter().map(|&(_, c)| c).collect();
        mults.sort_unstable();
        let packed = mults.iter().fold(0u64, |acc, &m| (acc << 4) | m as u64);
        *self.tally.entry((odd, packed)).or_default() += 1;
    }
}

fn unpack(mut packed: u64) -> Vec<usize> {
    let mut out = Vec::new();
    while packed != 0 {
        out.push((packed & 0xF) as usize);
        packed >>= 4;
    }
    out
}

/// Exact `E(Trace(A^k)) / N^{k/2 + 1}` for the sign-masked ensemble.
pub fn brute_force_finite_moment(
    size: usize,
    k: usize,
    kind: EnsembleKind,
    p: &Rational,
    base: BaseDistribution,
) -> Result<Rational> {
    kind.validate_size(size)?;
    let half = Rational::new(1.into(), 2.into());
    let one = Rational::from_integer(1.into());
    if *p < half || *p > one {
        return Err(invalid(format!("sign parameter p = {p} outside [1/2, 1]")));
    }
    if k == 0 {
        return Ok(one);
    }
    if k > MAX_ORDER {
        return Err(invalid(format!("moment order {k} above {MAX_ORDER}")));
    }
    let required = (size as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if required > BRUTE_FORCE_BUDGET {
        return Err(Error::BudgetExceeded { required, budget: BRUTE_FORCE_BUDGET });
    }

    let shards: Vec<HashMap<Pattern, u64>> = (0..size)
        .into_par_iter()
        .map(|first| {
            let mut w = Walker {
                size,
                k,
                kind,
                idx: vec![0; k],
                pairs: Vec::with_capacity(k),
                vars: Vec::with_capacity(k),
                tally: HashMap::new(),
            };
            w.idx[0] = first;
            w.descend(1);
            w.tally
        })
        .collect();
    let mut tally: HashMap<Pattern, u64> = HashMap::new();
    for shard in shards {
        for (key, c) in shard {
            *tally.entry(key).or_default() += c;
        }
    }

    let sign = Rational::sign_mean(p);
    let mut total = Rational::zero();
    for ((odd, packed), count) in tally {
        let b: Rational = unpack(packed).into_iter().map(|m| base.moment(m)).product();
        if b.is_zero() {
            continue;
        }
        total += b * powu(&sign, odd as usize) * Rational::from_integer(count.into());
    }
    if k % 2 == 1 {
        return if total.is_zero() {
            Ok(total)
        } else {
            Err(Error::Unsupported("odd moment with non-vanishing expectation".into()))
        };
    }
    let norm = num_traits::pow(BigInt::from(size), k / 2 + 1);
    Ok(total / Rational::from_integer(norm))
}
