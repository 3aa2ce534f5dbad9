use num_complex::Complex64;

use super::{MeasurementSystem, Method, RecoveryResult};
use crate::channel::SparseChannel;
use crate::linalg::twiddle;
use crate::ofdm::PilotObservation;
use crate::{Error, Result};

/// Linear interpolation of the pilot CFR samples over subcarrier index,
/// wrapping from the last pilot back to the first, followed by an inverse
/// DFT truncated to the tap span.
pub fn interpolate_estimate(obs: &PilotObservation, sys: &MeasurementSystem) -> Result<RecoveryResult> {
    sys.check(obs)?;
    let np = sys.n_pilots();
    if np < 2 {
        return Err(Error::InsufficientPilots { n_pilots: np });
    }
    let n = sys.n_total();
    let idx = sys.pattern().indices();
    let vals = &obs.values;

    let mut cfr = vec![Complex64::new(0.0, 0.0); n];
    for p in 0..np {
        let q = (p + 1) % np;
        let start = idx[p];
        let gap = (idx[q] + n - start) % n;
        let gap = if gap == 0 { n } else { gap };
        for step in 0..gap {
            let t = step as f64 / gap as f64;
            cfr[(start + step) % n] = vals[p] * (1.0 - t) + vals[q] * t;
        }
    }

    let inv_n = 1.0 / n as f64;
    let taps: Vec<Complex64> = (0..sys.n_cols())
        .map(|l| {
            cfr.iter()
                .enumerate()
                .map(|(k, &hk)| hk * twiddle(k * l, n).conj())
                .sum::<Complex64>()
                * inv_n
        })
        .collect();
    let residual_norm = sys.residual_norm(obs, &taps)?;
    Ok(RecoveryResult {
        estimate: SparseChannel::from_dense(taps),
        iterations_used: 1,
        residual_norm,
        method: Method::Interpolate,
    })
}
