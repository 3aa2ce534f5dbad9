use super::PilotPattern;
use crate::{Error, Result};

/// Counts `alpha_d` of each cyclic difference `d = lambda_l - lambda_k mod N`
/// over all ordered pilot pairs, the `l = k` pairs included, so
/// `alpha_0 = Np` and the counts sum to `Np^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceMultiset {
    counts: Vec<usize>,
}

impl DifferenceMultiset {
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// Parameters `(lambda, v, k)` of a cyclic difference set: every nonzero
/// residue mod `v` occurs exactly `lambda` times as a difference of the `k`
/// elements, and `k^2 - k = (v - 1) lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CdsParams {
    pub lambda_repeats: usize,
    pub v: usize,
    pub k: usize,
}

impl CdsParams {
    pub fn is_consistent(&self) -> bool {
        self.k * self.k - self.k == (self.v - 1) * self.lambda_repeats
    }
}

pub fn difference_multiset(pattern: &PilotPattern) -> DifferenceMultiset {
    let n = pattern.n_total();
    let idx = pattern.indices();
    let mut counts = vec![0usize; n];
    for &a in idx {
        for &b in idx {
            counts[(a + n - b) % n] += 1;
        }
    }
    DifferenceMultiset { counts }
}

/// Returns the CDS parameters when every nonzero difference has the same
/// multiplicity `Np (Np - 1) / (N - 1)`.
pub fn is_cds(pattern: &PilotPattern) -> Option<CdsParams> {
    let n = pattern.n_total();
    let k = pattern.n_pilots();
    if n < 2 {
        return None;
    }
    let alpha = difference_multiset(pattern);
    let first = alpha.counts[1];
    if alpha.counts[1..].iter().any(|&c| c != first) {
        return None;
    }
    let params = CdsParams {
        lambda_repeats: first,
        v: n,
        k,
    };
    debug_assert!(params.is_consistent());
    Some(params)
}

/// Affine image `lambda -> (multiplier * lambda + shift) mod N`.
///
/// Translation and coprime multiplication both permute the nonzero
/// residues, so a CDS maps to a CDS with the same parameters.
pub fn cds_family(base: &PilotPattern, shift: i64, multiplier: i64) -> Result<PilotPattern> {
    let n = base.n_total() as i64;
    if gcd(multiplier.rem_euclid(n), n) != 1 {
        return Err(Error::InvalidTransform {
            multiplier,
            n_total: base.n_total(),
        });
    }
    let indices = base
        .indices()
        .iter()
        .map(|&lam| {
            let m = (multiplier as i128 * lam as i128 + shift as i128).rem_euclid(n as i128);
            m as usize
        })
        .collect();
    let out = PilotPattern::new(base.n_total(), indices)?;
    if let Some(params) = is_cds(base) {
        if is_cds(&out) != Some(params) {
            return Err(Error::InvalidPattern(
                "affine image of a difference set lost the CDS property".into(),
            ));
        }
    }
    Ok(out)
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}
