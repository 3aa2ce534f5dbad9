//! Pilot placement: patterns, their coherence, cyclic difference sets and
//! the random baselines.

mod cds;
mod coherence;
mod search;

use std::fmt;
use std::path::Path;

use rand::Rng;

use crate::{Error, Result};

pub use cds::{cds_family, difference_multiset, is_cds, CdsParams, DifferenceMultiset};
pub use coherence::{
    coherence, coherence_lower_bound, full_range_coherence, pattern_sum, recovery_guaranteed,
};
pub use search::{random_search, SearchOutcome};

/// (91, 10, 1) cyclic difference set used for the reference OFDM system.
pub const CDS_91_10_1: &str = include_str!("../../data/cds_91_10_1.txt");
/// (2257, 48, 1) Singer difference set used for the large system.
pub const CDS_2257_48_1: &str = include_str!("../../data/cds_2257_48_1.txt");

/// Distinct subcarrier indices in `[0, n_total)`, kept sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PilotPattern {
    n_total: usize,
    indices: Vec<usize>,
}

impl PilotPattern {
    pub fn new(n_total: usize, mut indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidPattern("no pilots".into()));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= n_total) {
            return Err(Error::InvalidPattern(format!("index {bad} outside [0, {n_total})")));
        }
        indices.sort_unstable();
        if let Some(w) = indices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidPattern(format!("index {} repeated", w[0])));
        }
        Ok(Self { n_total, indices })
    }

    /// Uniformly random pattern of `n_pilots` distinct subcarriers.
    pub fn random<R: Rng + ?Sized>(n_total: usize, n_pilots: usize, rng: &mut R) -> Result<Self> {
        if n_pilots == 0 || n_pilots > n_total {
            return Err(Error::InvalidPattern(format!(
                "cannot place {n_pilots} pilots on {n_total} subcarriers"
            )));
        }
        let indices = rand::seq::index::sample(rng, n_total, n_pilots).into_vec();
        Self::new(n_total, indices)
    }

    /// Parses whitespace- or comma-separated integers. `index_base` is
    /// subtracted from every value (1 for one-based lists).
    pub fn parse(n_total: usize, text: &str, index_base: usize) -> Result<Self> {
        let mut indices = Vec::new();
        for tok in text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
        {
            let v: usize = tok
                .parse()
                .map_err(|_| Error::Parse(format!("pilot index {tok:?}")))?;
            let v = v.checked_sub(index_base).ok_or_else(|| {
                Error::InvalidPattern(format!("index {v} below base {index_base}"))
            })?;
            indices.push(v);
        }
        Self::new(n_total, indices)
    }

    pub fn load(n_total: usize, path: &Path, index_base: usize) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(n_total, &text, index_base)
    }

    /// Shipped base CDS for a known subcarrier count.
    pub fn known_cds(n_total: usize) -> Option<Self> {
        let text = match n_total {
            91 => CDS_91_10_1,
            2257 => CDS_2257_48_1,
            _ => return None,
        };
        Some(Self::parse(n_total, text, 0).expect("shipped CDS data is valid"))
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn n_pilots(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, k: usize) -> bool {
        self.indices.binary_search(&k).is_ok()
    }

    /// Subcarriers not carrying pilots, ascending.
    pub fn data_indices(&self) -> Vec<usize> {
        (0..self.n_total).filter(|&k| !self.contains(k)).collect()
    }
}

impl fmt::Display for PilotPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn rejects_duplicates_and_out_of_range() {
        assert!(PilotPattern::new(8, vec![1, 1]).is_err());
        assert!(PilotPattern::new(8, vec![8]).is_err());
        assert!(PilotPattern::new(8, vec![]).is_err());
    }

    #[test]
    fn parse_handles_one_based_lists() {
        let p = PilotPattern::parse(10, "1\n2\n10\n", 1).unwrap();
        assert_eq!(p.indices(), &[0, 1, 9]);
        assert!(PilotPattern::parse(10, "0", 1).is_err());
    }

    #[test]
    fn known_sets_load() {
        let small = PilotPattern::known_cds(91).unwrap();
        assert_eq!(small.indices(), &[1, 3, 7, 8, 19, 22, 32, 55, 64, 72]);
        let large = PilotPattern::known_cds(2257).unwrap();
        assert_eq!(large.n_pilots(), 48);
        assert!(PilotPattern::known_cds(64).is_none());
    }

    #[test]
    fn random_patterns_are_valid() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let p = PilotPattern::random(91, 10, &mut rng).unwrap();
            assert_eq!(p.n_pilots(), 10);
            assert_eq!(p.data_indices().len(), 81);
        }
        assert!(PilotPattern::random(4, 5, &mut rng).is_err());
    }
}
