//! Crossing / dividing classification of the edges of a pairing.
//!
//! An edge `(a, b)` is *crossing* when some other edge has exactly one
//! endpoint strictly between `a` and `b`. A non-crossing edge is *dividing*
//! when both arcs it cuts off contain crossing edges. Crossing edges fall into
//! *partitions*: two crossing edges share a partition unless a dividing edge
//! has them on opposite sides.

use serde::{Deserialize, Serialize};

use super::Pairing;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeClass {
    Crossing,
    Dividing,
    NonCrossingNonDividing,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeClassification {
    /// One label per edge, in the order of [`Pairing::edges`].
    pub edge_class: Vec<EdgeClass>,
    /// Number of vertices lying on crossing edges, `e(c)`.
    pub e: usize,
    pub dividing_count: usize,
    pub partition_count: usize,
}

/// Summary counts without the per-edge labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Summary {
    pub e: usize,
    pub dividing_count: usize,
    pub partition_count: usize,
}

/// Reusable scratch space for classifying many pairings of the same size.
#[derive(Default)]
pub struct Analyzer {
    min_table: Vec<Vec<usize>>,
    max_table: Vec<Vec<usize>>,
    crossing: Vec<bool>,
    dividing: Vec<bool>,
    prefix: Vec<usize>,
    stack: Vec<usize>,
    region_seen: Vec<bool>,
}

impl Analyzer {
    pub fn new() -> Self {
        Self::default()
    }

    fn build_tables(&mut self, partner: &[usize]) {
        let n = partner.len();
        let levels = usize::BITS as usize - n.leading_zeros() as usize;
        self.min_table.resize_with(levels, Vec::new);
        self.max_table.resize_with(levels, Vec::new);
        self.min_table[0].clear();
        self.min_table[0].extend_from_slice(partner);
        self.max_table[0].clear();
        self.max_table[0].extend_from_slice(partner);
        for lvl in 1..levels {
            let half = 1 << (lvl - 1);
            let len = n + 1 - (1 << lvl);
            let (lo, hi) = self.min_table.split_at_mut(lvl);
            let prev = &lo[lvl - 1];
            hi[0].clear();
            hi[0].extend((0..len).map(|i| prev[i].min(prev[i + half])));
            let (lo, hi) = self.max_table.split_at_mut(lvl);
            let prev = &lo[lvl - 1];
            hi[0].clear();
            hi[0].extend((0..len).map(|i| prev[i].max(prev[i + half])));
        }
    }

    /// min and max partner over the non-empty vertex range `lo..hi`.
    fn range_min_max(&self, lo: usize, hi: usize) -> (usize, usize) {
        let len = hi - lo;
        let lvl = (usize::BITS - 1 - len.leading_zeros()) as usize;
        let span = 1 << lvl;
        let mn = self.min_table[lvl][lo].min(self.min_table[lvl][hi - span]);
        let mx = self.max_table[lvl][lo].max(self.max_table[lvl][hi - span]);
        (mn, mx)
    }

    /// Mark crossing vertices; returns the number of them.
    #[allow(clippy::needless_range_loop)]
    fn mark_crossing(&mut self, partner: &[usize]) -> usize {
        let n = partner.len();
        self.build_tables(partner);
        self.crossing.clear();
        self.crossing.resize(n, false);
        let mut e = 0;
        for a in 0..n {
            let b = partner[a];
            if b < a {
                continue;
            }
            // (a, b) is crossed iff some vertex strictly inside has its partner outside.
            let crossed = b > a + 1 && {
                let (mn, mx) = self.range_min_max(a + 1, b);
                mn < a || mx > b
            };
            if crossed {
                self.crossing[a] = true;
                self.crossing[b] = true;
                e += 2;
            }
        }
        e
    }

    pub(crate) fn crossing_vertices(&mut self, partner: &[usize]) -> usize {
        self.mark_crossing(partner)
    }

    #[allow(clippy::needless_range_loop)]
    pub(crate) fn summarize(&mut self, partner: &[usize]) -> Summary {
        let n = partner.len();
        let e = self.mark_crossing(partner);
        self.dividing.clear();
        self.dividing.resize(n, false);
        if e == 0 {
            return Summary { e, dividing_count: 0, partition_count: 0 };
        }

        self.prefix.clear();
        self.prefix.push(0);
        for v in 0..n {
            let last = *self.prefix.last().unwrap();
            self.prefix.push(last + usize::from(self.crossing[v]));
        }
        let mut dividing_count = 0;
        for a in 0..n {
            let b = partner[a];
            if b < a || self.crossing[a] {
                continue;
            }
            let inside = self.prefix[b] - self.prefix[a + 1];
            if inside > 0 && inside < e {
                self.dividing[a] = true;
                self.dividing[b] = true;
                dividing_count += 1;
            }
        }

        // Dividing chords are pairwise non-crossing, so they nest like
        // brackets. Each crossing vertex lives in the region bounded by its
        // innermost enclosing dividing chord (or the outer region).
        self.stack.clear();
        self.region_seen.clear();
        self.region_seen.resize(n + 1, false);
        let mut partition_count = 0;
        for v in 0..n {
            if self.dividing[v] {
                if partner[v] > v {
                    self.stack.push(v);
                } else {
                    self.stack.pop();
                }
            } else if self.crossing[v] {
                let region = self.stack.last().copied().unwrap_or(n);
                if !self.region_seen[region] {
                    self.region_seen[region] = true;
                    partition_count += 1;
                }
            }
        }
        Summary { e, dividing_count, partition_count }
    }

    pub fn classify(&mut self, pairing: &Pairing) -> EdgeClassification {
        let s = self.summarize(pairing.partners());
        let edge_class = pairing
            .edges()
            .map(|(a, _)| {
                if self.crossing[a] {
                    EdgeClass::Crossing
                } else if self.dividing[a] {
                    EdgeClass::Dividing
                } else {
                    EdgeClass::NonCrossingNonDividing
                }
            })
            .collect();
        EdgeClassification {
            edge_class,
            e: s.e,
            dividing_count: s.dividing_count,
            partition_count: s.partition_count,
        }
    }
}

pub fn classify(pairing: &Pairing) -> EdgeClassification {
    Analyzer::new().classify(pairing)
}

/// `e(c)`: the number of vertices on crossing edges.
pub fn crossing_vertex_count(pairing: &Pairing) -> usize {
    Analyzer::new().crossing_vertices(pairing.partners())
}
