use num_complex::Complex64;

use super::lstsq::solve_least_squares;
use super::{MeasurementSystem, Method, RecoveryResult};
use crate::channel::SparseChannel;
use crate::ofdm::PilotObservation;
use crate::{Error, Result};

/// Least squares restricted to the true support.
pub fn oracle_estimate(obs: &PilotObservation, sys: &MeasurementSystem, true_support: &[usize]) -> Result<RecoveryResult> {
    sys.check(obs)?;
    if true_support.len() > sys.n_pilots() {
        return Err(Error::SupportTooLarge {
            support: true_support.len(),
            n_pilots: sys.n_pilots(),
        });
    }
    if let Some(&bad) = true_support.iter().find(|&&l| l >= sys.n_cols()) {
        return Err(Error::Dimension(format!("tap {bad} outside span {}", sys.n_cols())));
    }
    let gains = solve_least_squares(sys.matrix().matrix(), true_support, &obs.values)?;
    let mut taps = vec![Complex64::new(0.0, 0.0); sys.n_cols()];
    for (&l, &g) in true_support.iter().zip(&gains) {
        taps[l] = g;
    }
    let residual_norm = sys.residual_norm(obs, &taps)?;
    Ok(RecoveryResult {
        estimate: SparseChannel::from_dense(taps),
        iterations_used: 1,
        residual_norm,
        method: Method::Oracle,
    })
}
