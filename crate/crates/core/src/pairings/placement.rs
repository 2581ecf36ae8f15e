//! Placing non-crossing, non-dividing edges around a fixed partial pairing.

use std::collections::HashSet;

use num_bigint::BigUint;

use super::{Cap, Pairing};
use crate::error::{invalid, Result};
use crate::numbers::binomial;

/// Number of ways to complete a partial pairing on `2v` vertices to `2k`
/// vertices using only non-crossing, non-dividing edges: `binom(2k, k - v)`.
pub fn nc_nd_placement_count(k: usize, v: usize) -> Result<BigUint> {
    if v == 0 {
        return Err(invalid("the partial pairing must have at least one edge"));
    }
    if v > k {
        return Err(invalid(format!("partial pairing has {v} edges but k = {k}")));
    }
    Ok(binomial(2 * k as i64, (k - v) as i64))
}

/// Result of the brute-force insertion count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlacementCheck {
    /// Number of (start position, gap sizes, gap matchings) triples.
    pub insertions: BigUint,
    /// Distinct labeled pairings of `2k` vertices produced.
    pub distinct: usize,
    /// Size of the rotation orbit of the partial pairing on its `2v` vertices.
    pub orbit: usize,
    /// `insertions / 2v`, the count the closed form predicts.
    pub count: BigUint,
}

impl PlacementCheck {
    /// Every labeled pairing is hit once per rotation stabilising the partial.
    pub fn is_consistent(&self, v: usize) -> bool {
        let stabilizer = 2 * v / self.orbit;
        self.insertions == BigUint::from(self.distinct * stabilizer)
            && self.count == BigUint::from(self.distinct) / BigUint::from(self.orbit)
    }
}

fn noncrossing_matchings(len: usize) -> Vec<Vec<(usize, usize)>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    // vertex 0 pairs with an odd offset j; inside and outside match separately
    for j in (1..len).step_by(2) {
        for inner in noncrossing_matchings(j - 1) {
            for outer in noncrossing_matchings(len - j - 1) {
                let mut m = vec![(0, j)];
                m.extend(inner.iter().map(|&(a, b)| (a + 1, b + 1)));
                m.extend(outer.iter().map(|&(a, b)| (a + j + 1, b + j + 1)));
                out.push(m);
            }
        }
    }
    out
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Enumerate every insertion of `2k - 2v` vertices into the `2v` gaps of
/// `partial`, each gap carrying its own non-crossing matching.
pub fn verify_nc_nd_placement(k: usize, partial: &Pairing, cap: Cap) -> Result<PlacementCheck> {
    cap.check(k)?;
    let v = partial.k();
    if v > k {
        return Err(invalid(format!("partial pairing has {v} edges but k = {k}")));
    }
    let n = 2 * k;
    let core = 2 * v;
    let orbit = {
        let mut rots: Vec<Pairing> = (0..core).map(|s| partial.rotated(s)).collect();
        rots.sort();
        rots.dedup();
        rots.len()
    };

    let gap_matchings: Vec<Vec<Vec<(usize, usize)>>> =
        (0..=k - v).map(|g| noncrossing_matchings(2 * g)).collect();

    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut insertions = 0u64;
    for gaps in compositions(k - v, core) {
        // positions relative to the start: core vertex j, then gap j
        let mut core_pos = Vec::with_capacity(core);
        let mut gap_start = Vec::with_capacity(core);
        let mut pos = 0;
        for &g in &gaps {
            core_pos.push(pos);
            gap_start.push(pos + 1);
            pos += 1 + 2 * g;
        }
        let mut choice = vec![0usize; core];
        loop {
            for start in 0..n {
                let mut partner = vec![0usize; n];
                for (a, b) in partial.edges() {
                    let (x, y) = ((core_pos[a] + start) % n, (core_pos[b] + start) % n);
                    partner[x] = y;
                    partner[y] = x;
                }
                for j in 0..core {
                    for &(a, b) in &gap_matchings[gaps[j]][choice[j]] {
                        let (x, y) = ((gap_start[j] + a + start) % n, (gap_start[j] + b + start) % n);
                        partner[x] = y;
                        partner[y] = x;
                    }
                }
                insertions += 1;
                seen.insert(partner);
            }
            // odometer over the per-gap matching choices
            let mut j = 0;
            while j < core {
                choice[j] += 1;
                if choice[j] < gap_matchings[gaps[j]].len() {
                    break;
                }
                choice[j] = 0;
                j += 1;
            }
            if j == core {
                break;
            }
        }
    }
    let insertions = BigUint::from(insertions);
    let count = &insertions / BigUint::from(core as u64);
    Ok(PlacementCheck { insertions, distinct: seen.len(), orbit, count })
}
