//! Perfect matchings of `2k` points on a circle ("pairings"), their
//! crossing/dividing structure, and the exact counting machinery built on it.

mod census;
mod classify;
mod configurations;
mod formulas;
mod placement;

pub use census::{crossing_census, CrossingCensus};
pub use classify::{classify, crossing_vertex_count, Analyzer, EdgeClass, EdgeClassification};
pub use configurations::{configuration_classes, ConfigurationClass};
pub use formulas::{
    catalan_convolution, closed_form_cr, full_crossing_count, partition_formula,
    ConvolutionSides, MAX_CLOSED_FORM_M,
};
pub use placement::{nc_nd_placement_count, verify_nc_nd_placement, PlacementCheck};

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

const UNMATCHED: usize = usize::MAX;

/// Upper bound on `k` for anything that walks all `(2k-1)!!` pairings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cap(pub usize);

impl Cap {
    pub const DEFAULT: Cap = Cap(10);
    /// Environment variable overriding the default cap.
    pub const ENV: &'static str = "CHORDMOMENTS_MAX_K";

    pub fn from_env() -> Cap {
        std::env::var(Self::ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(Cap)
            .unwrap_or_default()
    }

    pub fn check(self, k: usize) -> Result<()> {
        if k == 0 {
            return Err(invalid("k must be positive"));
        }
        if k > self.0 {
            return Err(Error::CapExceeded { k, cap: self.0 });
        }
        Ok(())
    }
}

impl Default for Cap {
    fn default() -> Self {
        Cap::DEFAULT
    }
}

/// A perfect matching of the vertices `0..2k`, stored as a fixed-point-free
/// involution: `partner[partner[i]] == i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pairing {
    partner: Vec<usize>,
}

impl Pairing {
    pub fn from_partners(partner: Vec<usize>) -> Result<Self> {
        let n = partner.len();
        if n == 0 || n % 2 == 1 {
            return Err(invalid(format!("a pairing needs a positive even vertex count, got {n}")));
        }
        for (i, &j) in partner.iter().enumerate() {
            if j >= n || j == i || partner[j] != i {
                return Err(invalid(format!("partner array is not a perfect matching at vertex {i}")));
            }
        }
        Ok(Pairing { partner })
    }

    /// Build from an edge list on `2 * edges.len()` vertices.
    pub fn from_edges(edges: &[(usize, usize)]) -> Result<Self> {
        let n = 2 * edges.len();
        let mut partner = vec![UNMATCHED; n];
        for &(a, b) in edges {
            if a >= n || b >= n || a == b || partner[a] != UNMATCHED || partner[b] != UNMATCHED {
                return Err(invalid(format!("edge ({a}, {b}) is invalid or reuses a vertex")));
            }
            partner[a] = b;
            partner[b] = a;
        }
        Pairing::from_partners(partner)
    }

    /// Uniform random pairing: shuffle the labels, then pair consecutive entries.
    pub fn random<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Result<Self> {
        if k == 0 {
            return Err(invalid("k must be positive"));
        }
        let mut labels: Vec<usize> = (0..2 * k).collect();
        labels.shuffle(rng);
        let mut partner = vec![0; 2 * k];
        for pair in labels.chunks_exact(2) {
            partner[pair[0]] = pair[1];
            partner[pair[1]] = pair[0];
        }
        Ok(Pairing { partner })
    }

    pub(crate) fn from_partners_unchecked(partner: Vec<usize>) -> Self {
        debug_assert!(Pairing::from_partners(partner.clone()).is_ok());
        Pairing { partner }
    }

    pub fn k(&self) -> usize {
        self.partner.len() / 2
    }

    pub fn vertex_count(&self) -> usize {
        self.partner.len()
    }

    pub fn partner(&self, v: usize) -> usize {
        self.partner[v]
    }

    pub fn partners(&self) -> &[usize] {
        &self.partner
    }

    /// Edges as `(min, max)`, ordered by their smaller endpoint.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.partner
            .iter()
            .enumerate()
            .filter(|&(i, &j)| i < j)
            .map(|(i, &j)| (i, j))
    }

    /// Relabel every vertex `v` as `v + shift (mod 2k)`.
    pub fn rotated(&self, shift: usize) -> Pairing {
        let n = self.partner.len();
        let mut partner = vec![0; n];
        for (i, &j) in self.partner.iter().enumerate() {
            partner[(i + shift) % n] = (j + shift) % n;
        }
        Pairing { partner }
    }
}

impl fmt::Debug for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.edges()).finish()
    }
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        write!(f, "{{")?;
        for (a, b) in self.edges() {
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "({a},{b})")?;
            first = false;
        }
        write!(f, "}}")
    }
}

/// All pairings of `0..2k`, in a fixed order: the smallest unmatched vertex is
/// matched to each larger free vertex in increasing order, recursively.
pub fn enumerate_pairings(k: usize, cap: Cap) -> Result<Pairings> {
    cap.check(k)?;
    Ok(Pairings::new(k))
}

pub struct Pairings {
    partner: Vec<usize>,
    stack: Vec<(usize, usize)>,
    started: bool,
    done: bool,
}

impl Pairings {
    fn new(k: usize) -> Self {
        let mut it = Pairings {
            partner: vec![UNMATCHED; 2 * k],
            stack: Vec::with_capacity(k),
            started: false,
            done: false,
        };
        it.fill_from(0);
        it
    }

    fn first_free(&self, from: usize) -> Option<usize> {
        (from..self.partner.len()).find(|&v| self.partner[v] == UNMATCHED)
    }

    /// Greedily complete the partial matching with the lowest choices.
    fn fill_from(&mut self, from: usize) {
        let mut from = from;
        while let Some(a) = self.first_free(from) {
            let b = self.first_free(a + 1).expect("even number of free vertices");
            self.partner[a] = b;
            self.partner[b] = a;
            self.stack.push((a, b));
            from = a + 1;
        }
    }

    fn advance(&mut self) -> bool {
        while let Some((a, b)) = self.stack.pop() {
            self.partner[a] = UNMATCHED;
            self.partner[b] = UNMATCHED;
            if let Some(next) = self.first_free(b + 1) {
                self.partner[a] = next;
                self.partner[next] = a;
                self.stack.push((a, next));
                self.fill_from(a + 1);
                return true;
            }
        }
        false
    }
}

impl Iterator for Pairings {
    type Item = Pairing;

    fn next(&mut self) -> Option<Pairing> {
        if self.done {
            return None;
        }
        if self.started && !self.advance() {
            self.done = true;
            return None;
        }
        self.started = true;
        Some(Pairing::from_partners_unchecked(self.partner.clone()))
    }
}

/// Visit every pairing of `0..2k` whose vertex 0 is matched to `first`, in
/// enumeration order, without allocating per pairing. Shards over `first`
/// partition the full enumeration.
pub(crate) fn for_each_with_first_edge(k: usize, first: usize, mut visit: impl FnMut(&[usize])) {
    let n = 2 * k;
    debug_assert!(first >= 1 && first < n);
    let mut partner = vec![UNMATCHED; n];
    partner[0] = first;
    partner[first] = 0;
    fn rec(partner: &mut [usize], from: usize, visit: &mut dyn FnMut(&[usize])) {
        let n = partner.len();
        let Some(a) = (from..n).find(|&v| partner[v] == UNMATCHED) else {
            visit(partner);
            return;
        };
        for b in a + 1..n {
            if partner[b] == UNMATCHED {
                partner[a] = b;
                partner[b] = a;
                rec(partner, a + 1, visit);
                partner[a] = UNMATCHED;
                partner[b] = UNMATCHED;
            }
        }
    }
    rec(&mut partner, 1, &mut visit);
}
