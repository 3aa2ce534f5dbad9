use num_complex::Complex64;

use super::PilotPattern;
use crate::linalg::twiddle;
use crate::{Error, Result};

/// `sum over pilots of exp(-j 2 pi lambda r / N)`.
pub fn pattern_sum(pattern: &PilotPattern, r: usize) -> Complex64 {
    let n = pattern.n_total();
    pattern.indices().iter().map(|&lam| twiddle(lam * r, n)).sum()
}

/// Coherence of the `Np x L` partial DFT selected by `pattern`.
///
/// Columns `i` and `j` of the partial DFT have inner product
/// `pattern_sum(j - i)`, so the pairwise maximum collapses to a single
/// maximum over the lag `r = 1..L-1`.
pub fn coherence(pattern: &PilotPattern, n_cols: usize) -> Result<f64> {
    if n_cols < 2 {
        return Err(Error::UndefinedCoherence { n_cols });
    }
    if n_cols > pattern.n_total() {
        return Err(Error::Dimension(format!(
            "{n_cols} columns exceed {} subcarriers",
            pattern.n_total()
        )));
    }
    Ok(max_lag_magnitude(pattern, 1..n_cols) / pattern.n_pilots() as f64)
}

/// Coherence with the lag ranging over every nonzero residue `1..N-1`.
/// Equal to [`coherence`] with `L = N`.
pub fn full_range_coherence(pattern: &PilotPattern) -> f64 {
    max_lag_magnitude(pattern, 1..pattern.n_total()) / pattern.n_pilots() as f64
}

fn max_lag_magnitude(pattern: &PilotPattern, lags: std::ops::Range<usize>) -> f64 {
    lags.map(|r| pattern_sum(pattern, r).norm()).fold(0.0, f64::max)
}

/// Smallest coherence any `Np`-pilot pattern can reach over the full lag
/// range: `sqrt(Np (N - Np) / (N - 1)) / Np`. Cyclic difference sets attain
/// it for every tap span.
pub fn coherence_lower_bound(n_total: usize, n_pilots: usize) -> f64 {
    assert!(n_pilots >= 1 && n_pilots <= n_total, "need 1 <= Np <= N");
    if n_total == 1 {
        return 0.0;
    }
    let (n, np) = (n_total as f64, n_pilots as f64);
    (np * (n - np) / (n - 1.0)).sqrt() / np
}

/// Coherence-based exact-recovery condition `mu < 1 / (2K)`.
pub fn recovery_guaranteed(mu: f64, sparsity: usize) -> bool {
    mu < 1.0 / (2.0 * sparsity as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::build_partial_dft;
    use crate::pilots::difference_multiset;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn cds91() -> PilotPattern {
        PilotPattern::known_cds(91).unwrap()
    }

    #[test]
    fn all_subcarriers_have_zero_coherence() {
        let p = PilotPattern::new(16, (0..16).collect()).unwrap();
        for l in 2..=16 {
            assert!(coherence(&p, l).unwrap() < 1e-12);
        }
    }

    #[test]
    fn single_pilot_has_unit_coherence() {
        let p = PilotPattern::new(16, vec![5]).unwrap();
        assert!((coherence(&p, 8).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reference_cds_coherence() {
        // every |S_r|^2 equals Np - lambda = 9 for a (91,10,1) set
        let mu = coherence(&cds91(), 32).unwrap();
        assert!((mu - 0.3).abs() < 1e-9);
        for r in 1..91 {
            assert!((pattern_sum(&cds91(), r).norm_sqr() - 9.0).abs() < 1e-9);
        }
    }

    #[test]
    fn undefined_for_single_column() {
        assert!(matches!(
            coherence(&cds91(), 1),
            Err(Error::UndefinedCoherence { n_cols: 1 })
        ));
    }

    #[test]
    fn lower_bound_values() {
        assert!((coherence_lower_bound(91, 10) - 0.3).abs() < 1e-12);
        assert_eq!(coherence_lower_bound(16, 16), 0.0);
        // 48 * 2209 / 2256 = 47 exactly, so the bound is sqrt(47)/48
        assert!((coherence_lower_bound(2257, 48) - 47f64.sqrt() / 48.0).abs() < 1e-12);
        assert!((coherence_lower_bound(2257, 48) - 0.142_826).abs() < 1e-6);
    }

    #[test]
    fn reference_configuration_misses_the_guarantee() {
        assert!(!recovery_guaranteed(0.3, 4));
        assert!(recovery_guaranteed(0.1, 4));
    }

    proptest! {
        #[test]
        fn single_sum_matches_pairwise_columns(n in 2usize..=32, seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let np = 1 + (seed as usize >> 8) % n;
            let l = 2 + (seed as usize >> 16) % (n - 1);
            let p = PilotPattern::random(n, np, &mut rng).unwrap();
            let direct = build_partial_dft(n, &p, l).unwrap().matrix().mutual_coherence();
            prop_assert!((direct - coherence(&p, l).unwrap()).abs() < 1e-9);
        }

        #[test]
        fn squared_sum_decomposes_over_differences(n in 2usize..120, seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let np = 1 + (seed as usize >> 8) % n;
            let r = (seed as usize >> 20) % n;
            let p = PilotPattern::random(n, np, &mut rng).unwrap();
            let alpha = difference_multiset(&p);
            let rhs: Complex64 = Complex64::new(np as f64, 0.0)
                + (1..n).map(|d| twiddle(r * d, n) * alpha.counts()[d] as f64).sum::<Complex64>();
            prop_assert!((pattern_sum(&p, r).norm_sqr() - rhs.re).abs() < 1e-9);
            prop_assert!(rhs.im.abs() < 1e-9);
        }

        #[test]
        fn full_range_coherence_never_beats_the_bound(n in 2usize..80, seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let np = 1 + (seed as usize >> 8) % n;
            let p = PilotPattern::random(n, np, &mut rng).unwrap();
            prop_assert!(full_range_coherence(&p) >= coherence_lower_bound(n, np) - 1e-9);
        }
    }
}
