use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use super::classify::Analyzer;
use super::{for_each_with_first_edge, Cap};
use crate::error::Result;
use crate::numbers::pairing_count;

/// Exact crossing statistics over all pairings of `2k` vertices.
///
/// `cr[m]` is the number of pairings with exactly `2m` crossing vertices
/// (`Cr_{2k,2m}`); `partitions[m][i]` splits that count by the number `i`
/// of partitions of the crossing vertices. All `m` in `0..=k` are present in
/// `cr`, zero counts included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingCensus {
    pub k: usize,
    pub cr: BTreeMap<usize, BigUint>,
    pub partitions: BTreeMap<usize, BTreeMap<usize, BigUint>>,
}

impl CrossingCensus {
    pub fn total(&self) -> BigUint {
        self.cr.values().sum()
    }

    pub fn cr(&self, m: usize) -> BigUint {
        self.cr.get(&m).cloned().unwrap_or_default()
    }

    pub fn partition(&self, m: usize, i: usize) -> BigUint {
        self.partitions
            .get(&m)
            .and_then(|row| row.get(&i))
            .cloned()
            .unwrap_or_default()
    }

    /// `{k, totals: {m: count}, partitions: {m: {i: count}}, double_factorial}`
    /// with every count rendered as a decimal string.
    pub fn to_json(&self) -> Value {
        #[derive(Serialize)]
        struct Wire {
            k: usize,
            totals: BTreeMap<String, String>,
            partitions: BTreeMap<String, BTreeMap<String, String>>,
            double_factorial: String,
        }
        let wire = Wire {
            k: self.k,
            totals: self.cr.iter().map(|(m, c)| (m.to_string(), c.to_string())).collect(),
            partitions: self
                .partitions
                .iter()
                .map(|(m, row)| {
                    (m.to_string(), row.iter().map(|(i, c)| (i.to_string(), c.to_string())).collect())
                })
                .collect(),
            double_factorial: pairing_count(self.k).to_string(),
        };
        serde_json::to_value(wire).expect("census serializes")
    }
}

/// Enumerate and classify every pairing of `2k` vertices.
///
/// The work is sharded by the partner of vertex 0; shard results are summed,
/// so the census does not depend on the number of worker threads.
pub fn crossing_census(k: usize, cap: Cap) -> Result<CrossingCensus> {
    cap.check(k)?;
    let width = k + 1;
    let shard = |first: usize| {
        // counts[m * width + i]
        let mut counts = vec![0u64; width * width];
        let mut analyzer = Analyzer::new();
        for_each_with_first_edge(k, first, |partner| {
            let s = analyzer.summarize(partner);
            counts[(s.e / 2) * width + s.partition_count] += 1;
        });
        counts
    };
    let shards: Vec<Vec<u64>> = (1..2 * k).into_par_iter().map(shard).collect();

    let mut cr = BTreeMap::new();
    let mut partitions: BTreeMap<usize, BTreeMap<usize, BigUint>> = BTreeMap::new();
    for m in 0..=k {
        let mut row_total = BigUint::zero();
        for i in 0..width {
            let c: BigUint = shards.iter().map(|s| BigUint::from(s[m * width + i])).sum();
            if !c.is_zero() {
                row_total += &c;
                partitions.entry(m).or_default().insert(i, c);
            }
        }
        cr.insert(m, row_total);
    }
    Ok(CrossingCensus { k, cr, partitions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::catalan;

    fn cr_u64(c: &CrossingCensus) -> Vec<u64> {
        c.cr.values().map(|v| u64::try_from(v.clone()).unwrap()).collect()
    }

    #[test]
    fn small_censuses() {
        let d = Cap::default();
        assert_eq!(cr_u64(&crossing_census(1, d).unwrap()), vec![1, 0]);
        assert_eq!(cr_u64(&crossing_census(2, d).unwrap()), vec![2, 0, 1]);
        assert_eq!(cr_u64(&crossing_census(3, d).unwrap()), vec![5, 0, 6, 4]);
        assert_eq!(crossing_census(4, d).unwrap().cr(4), BigUint::from(31u32));
        assert_eq!(crossing_census(5, d).unwrap().cr(5), BigUint::from(288u32));
    }

    #[test]
    fn totals_partitions_and_catalan() {
        for k in 1..=7 {
            let c = crossing_census(k, Cap::default()).unwrap();
            assert_eq!(c.total(), pairing_count(k));
            assert!(c.cr(1).is_zero());
            assert_eq!(c.cr(0), catalan(k));
            for m in 2..=k {
                let sum: BigUint = c.partitions.get(&m).map(|r| r.values().sum()).unwrap_or_default();
                assert_eq!(sum, c.cr(m), "k={k} m={m}");
                for &i in c.partitions.get(&m).map(|r| r.keys().collect::<Vec<_>>()).unwrap_or_default() {
                    assert!(i >= 1 && i <= (2 * m) / 4);
                }
            }
        }
    }

    #[test]
    fn partition_split_at_k5() {
        let c = crossing_census(5, Cap::default()).unwrap();
        assert_eq!(c.partition(4, 1), BigUint::from(310u32));
        assert_eq!(c.partition(4, 2), BigUint::from(5u32));
    }

    #[test]
    fn json_shape() {
        let j = crossing_census(3, Cap::default()).unwrap().to_json();
        assert_eq!(j["k"], 3);
        assert_eq!(j["totals"]["2"], "6");
        assert_eq!(j["totals"]["3"], "4");
        assert_eq!(j["partitions"]["2"]["1"], "6");
        assert_eq!(j["double_factorial"], "15");
    }

    #[test]
    fn shard_count_does_not_change_result() {
        let a = crossing_census(6, Cap::default()).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let b = pool.install(|| crossing_census(6, Cap::default()).unwrap());
        assert_eq!(a, b);
    }
}
