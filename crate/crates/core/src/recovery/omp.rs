use num_complex::Complex64;

use super::lstsq::solve_least_squares;
use super::{MeasurementSystem, Method, RecoveryConfig, RecoveryResult};
use crate::channel::SparseChannel;
use crate::linalg::norm;
use crate::ofdm::PilotObservation;
use crate::{Error, Result};

/// Orthogonal matching pursuit with `cfg.sparsity_hint` selections, or
/// fewer when `cfg.omp_residual_tolerance` is reached first.
pub fn omp(obs: &PilotObservation, sys: &MeasurementSystem, cfg: &RecoveryConfig) -> Result<RecoveryResult> {
    sys.check(obs)?;
    let k_max = cfg.sparsity_hint;
    if k_max > sys.n_pilots() {
        return Err(Error::SupportTooLarge {
            support: k_max,
            n_pilots: sys.n_pilots(),
        });
    }
    if k_max > sys.n_cols() {
        return Err(Error::InvalidConfig(format!(
            "sparsity hint {k_max} exceeds {} taps",
            sys.n_cols()
        )));
    }
    let w = sys.matrix().matrix();
    let y = &obs.values;
    let col_norms: Vec<f64> = (0..w.cols()).map(|c| norm(&w.column(c))).collect();

    let mut support: Vec<usize> = Vec::with_capacity(k_max);
    let mut gains: Vec<Complex64> = Vec::new();
    let mut residual = y.clone();
    let mut iterations = 0;
    while support.len() < k_max {
        if let Some(tol) = cfg.omp_residual_tolerance {
            if norm(&residual) <= tol {
                break;
            }
        }
        let mut best = None;
        let mut best_corr = -1.0;
        for c in 0..w.cols() {
            if support.contains(&c) {
                continue;
            }
            let inner: Complex64 = (0..w.rows()).map(|r| w.get(r, c).conj() * residual[r]).sum();
            let corr = inner.norm() / col_norms[c];
            if corr > best_corr {
                best_corr = corr;
                best = Some(c);
            }
        }
        support.push(best.expect("fewer selections than columns"));
        gains = solve_least_squares(w, &support, y)?;
        residual = (0..w.rows())
            .map(|r| {
                let fit: Complex64 = support.iter().zip(&gains).map(|(&c, g)| w.get(r, c) * g).sum();
                y[r] - fit
            })
            .collect();
        iterations += 1;
    }

    let mut taps = vec![Complex64::new(0.0, 0.0); sys.n_cols()];
    for (&c, &g) in support.iter().zip(&gains) {
        taps[c] = g;
    }
    let residual_norm = sys.residual_norm(obs, &taps)?;
    Ok(RecoveryResult {
        estimate: SparseChannel::from_dense(taps),
        iterations_used: iterations,
        residual_norm,
        method: Method::Omp,
    })
}
