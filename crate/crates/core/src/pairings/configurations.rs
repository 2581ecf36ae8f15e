use std::collections::BTreeMap;

use super::{enumerate_pairings, Cap, Pairing};
use crate::error::Result;

/// A rotation class of pairings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigurationClass {
    /// Lexicographically smallest partner array among the rotations.
    pub canonical: Pairing,
    /// Number of distinct pairings in the class.
    pub multiplicity: usize,
}

impl ConfigurationClass {
    /// Rotations that map the canonical pairing to itself.
    pub fn stabilizer_size(&self) -> usize {
        let n = self.canonical.vertex_count();
        (0..n).filter(|&s| self.canonical.rotated(s) == self.canonical).count()
    }
}

pub(crate) fn canonical_rotation(p: &Pairing) -> Pairing {
    (0..p.vertex_count())
        .map(|s| p.rotated(s))
        .min_by(|a, b| a.partners().cmp(b.partners()))
        .expect("non-empty pairing")
}

/// Partition all pairings of `2k` vertices into rotation orbits, ordered by
/// canonical representative.
pub fn configuration_classes(k: usize, cap: Cap) -> Result<Vec<ConfigurationClass>> {
    let mut counts: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for p in enumerate_pairings(k, cap)? {
        *counts.entry(canonical_rotation(&p).partners().to_vec()).or_default() += 1;
    }
    Ok(counts
        .into_iter()
        .map(|(partner, multiplicity)| ConfigurationClass {
            canonical: Pairing::from_partners_unchecked(partner),
            multiplicity,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::pairing_count;
    use crate::pairings::classify;

    #[test]
    fn k2_has_adjacent_and_crossing() {
        let classes = configuration_classes(2, Cap::default()).unwrap();
        assert_eq!(classes.len(), 2);
        let mut by_e: Vec<(usize, usize)> =
            classes.iter().map(|c| (classify(&c.canonical).e, c.multiplicity)).collect();
        by_e.sort();
        assert_eq!(by_e, vec![(0, 2), (4, 1)]);
    }

    #[test]
    fn k3_multiplicities() {
        let classes = configuration_classes(3, Cap::default()).unwrap();
        let mut mult: Vec<usize> = classes.iter().map(|c| c.multiplicity).collect();
        mult.sort();
        assert_eq!(mult, vec![1, 2, 3, 3, 6]);
    }

    #[test]
    fn orbits_partition_and_stabilizers_divide() {
        for k in 1..=6 {
            let classes = configuration_classes(k, Cap::default()).unwrap();
            let total: usize = classes.iter().map(|c| c.multiplicity).sum();
            assert_eq!(pairing_count(k), total.into());
            for c in &classes {
                assert_eq!(c.multiplicity * c.stabilizer_size(), 2 * k);
            }
        }
    }
}
