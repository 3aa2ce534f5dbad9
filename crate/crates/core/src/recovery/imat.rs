//! Iterative adaptive thresholding with optional sparsity-domain smoothing.
//!
//! Starting from `h_0 = 0`, iteration `k` does
//!
//! 1. residue `r_k = (relaxation / N) W^H (y - W h_{k-1})`
//! 2. smoothing `h_hat_k = f(r_k) + h_{k-1}`, where `f` is a circular
//!    convolution over tap indices with a unit-sum window
//! 3. sparsification: keep entries of `h_hat_k` with magnitude above
//!    `beta exp(-alpha k)`.
//!
//! With the identity window this is plain IMAT.

use num_complex::Complex64;

use super::{MeasurementSystem, Method, RecoveryConfig, RecoveryResult, SmoothingConfig, SmoothingTarget, WindowKind};
use crate::channel::SparseChannel;
use crate::linalg::norm;
use crate::ofdm::PilotObservation;
use crate::{Error, Result};

/// Residual norm below which the iteration stops early.
const CONVERGED: f64 = 1e-12;
/// The iteration aborts once the residual grows past this multiple of the
/// observation norm.
const DIVERGENCE_FACTOR: f64 = 1e3;

/// Symmetric unit-sum window, centre tap at `weights[half_width]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothingWindow {
    weights: Vec<f64>,
}

impl SmoothingWindow {
    pub fn identity() -> Self {
        Self { weights: vec![1.0] }
    }

    pub fn from_config(cfg: &SmoothingConfig) -> Self {
        let hw = cfg.half_width as i64;
        if hw == 0 || cfg.window == WindowKind::Identity {
            return Self::identity();
        }
        let raw: Vec<f64> = (-hw..=hw)
            .map(|i| match cfg.window {
                WindowKind::Triangular => (hw + 1 - i.abs()) as f64,
                WindowKind::Gaussian => (-((i * i) as f64) / (2.0 * cfg.sigma * cfg.sigma)).exp(),
                WindowKind::Identity => unreachable!(),
            })
            .collect();
        let total: f64 = raw.iter().sum();
        Self {
            weights: raw.into_iter().map(|w| w / total).collect(),
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_identity(&self) -> bool {
        self.weights.len() == 1
    }

    /// Circular convolution over the vector's indices.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        if self.is_identity() {
            return v.to_vec();
        }
        let n = v.len() as i64;
        let hw = (self.weights.len() / 2) as i64;
        (0..n)
            .map(|l| {
                self.weights
                    .iter()
                    .enumerate()
                    .map(|(j, &w)| v[(l + j as i64 - hw).rem_euclid(n) as usize] * w)
                    .sum()
            })
            .collect()
    }
}

/// `beta exp(-alpha k)`.
pub fn threshold_at(beta: f64, alpha: f64, k: usize) -> f64 {
    beta * (-alpha * k as f64).exp()
}

/// Zeroes every entry with magnitude at or below `threshold`.
pub fn hard_threshold(v: &[Complex64], threshold: f64) -> Vec<Complex64> {
    v.iter()
        .map(|&z| if z.norm() > threshold { z } else { Complex64::new(0.0, 0.0) })
        .collect()
}

/// SDS-IMAT with the configured smoothing window.
pub fn sds_imat(obs: &PilotObservation, sys: &MeasurementSystem, cfg: &RecoveryConfig) -> Result<RecoveryResult> {
    let window = SmoothingWindow::from_config(&cfg.smoothing);
    iterate(obs, sys, cfg, &window, Method::SdsImat)
}

/// Plain IMAT: the same iteration with the identity window.
pub fn imat(obs: &PilotObservation, sys: &MeasurementSystem, cfg: &RecoveryConfig) -> Result<RecoveryResult> {
    iterate(obs, sys, cfg, &SmoothingWindow::identity(), Method::Imat)
}

fn iterate(
    obs: &PilotObservation,
    sys: &MeasurementSystem,
    cfg: &RecoveryConfig,
    window: &SmoothingWindow,
    method: Method,
) -> Result<RecoveryResult> {
    cfg.validate()?;
    sys.check(obs)?;
    let w = sys.matrix();
    let back = sys.back_projection();
    let relax = cfg.relaxation;
    let y = &obs.values;

    let back_project = |res: &[Complex64]| -> Result<Vec<Complex64>> {
        Ok(back.apply(res)?.into_iter().map(|z| z * relax).collect())
    };

    let beta = match cfg.threshold_scale {
        Some(b) => b,
        None => back_project(y)?.iter().map(|z| z.norm()).fold(0.0, f64::max),
    };
    let initial = norm(y);

    let mut h = vec![Complex64::new(0.0, 0.0); sys.n_cols()];
    let mut iterations_used = cfg.max_iterations;
    for k in 1..=cfg.max_iterations {
        let fit = w.apply(&h)?;
        let res: Vec<Complex64> = y.iter().zip(&fit).map(|(a, b)| a - b).collect();
        let res_norm = norm(&res);
        if res_norm < CONVERGED {
            iterations_used = k;
            break;
        }
        if !(res_norm <= DIVERGENCE_FACTOR * initial) {
            return Err(Error::Divergence {
                iteration: k,
                residual: res_norm,
                initial,
            });
        }
        let residue = back_project(&res)?;
        let h_hat: Vec<Complex64> = match cfg.smoothing_target {
            SmoothingTarget::Residue => window
                .apply(&residue)
                .iter()
                .zip(&h)
                .map(|(r, prev)| r + prev)
                .collect(),
            SmoothingTarget::Update => {
                let sum: Vec<Complex64> = residue.iter().zip(&h).map(|(r, prev)| r + prev).collect();
                window.apply(&sum)
            }
        };
        h = hard_threshold(&h_hat, threshold_at(beta, cfg.threshold_decay, k));
    }

    let residual_norm = sys.residual_norm(obs, &h)?;
    Ok(RecoveryResult {
        estimate: SparseChannel::from_dense(h),
        iterations_used,
        residual_norm,
        method,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{draw_channel, ChannelConfig};
    use crate::recovery::test_support::{noiseless, reference_system, zero_obs};
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_observation_is_a_fixed_point() {
        let sys = reference_system();
        let cfg = RecoveryConfig::default();
        for out in [
            sds_imat(&zero_obs(&sys), &sys, &cfg).unwrap(),
            imat(&zero_obs(&sys), &sys, &cfg).unwrap(),
        ] {
            assert_eq!(out.estimate.sparsity(), 0);
            assert_eq!(out.iterations_used, 1);
            assert_eq!(out.residual_norm, 0.0);
        }
    }

    #[test]
    fn zero_half_width_reduces_to_imat() {
        let sys = reference_system();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let cfg_ch = ChannelConfig {
            length: 32,
            sparsity: 4,
        };
        let mut cfg = RecoveryConfig::default();
        cfg.smoothing.half_width = 0;
        for _ in 0..20 {
            let h = draw_channel(&cfg_ch, &mut rng).unwrap();
            let mut obs = noiseless(&sys, &h);
            for v in obs.values.iter_mut() {
                *v += crate::channel::complex_gaussian(&mut rng) * 0.05;
            }
            let a = sds_imat(&obs, &sys, &cfg).unwrap();
            let b = imat(&obs, &sys, &cfg).unwrap();
            assert_eq!(a.estimate, b.estimate);
            assert_eq!(a.residual_norm.to_bits(), b.residual_norm.to_bits());
        }
    }

    #[test]
    fn single_tap_recovered_at_every_position() {
        let sys = reference_system();
        let cfg = RecoveryConfig::default();
        for tap in 0..32 {
            let h = SparseChannel::new(32, vec![tap], vec![c(1.0, 0.0)]).unwrap();
            let obs = noiseless(&sys, &h);
            for out in [sds_imat(&obs, &sys, &cfg).unwrap(), imat(&obs, &sys, &cfg).unwrap()] {
                let err = out.estimate.squared_error(&h).sqrt();
                assert!(err < 1e-6, "{} tap {tap}: error {err}", out.method);
            }
        }
    }

    #[test]
    fn triangular_window_weights() {
        let w = SmoothingWindow::from_config(&SmoothingConfig::default());
        assert_eq!(w.weights(), &[0.25, 0.5, 0.25]);
        let g = SmoothingWindow::from_config(&SmoothingConfig {
            window: WindowKind::Gaussian,
            half_width: 2,
            sigma: 1.0,
        });
        assert!((g.weights().iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(g.weights()[2] > g.weights()[1] && g.weights()[1] > g.weights()[0]);
    }

    #[test]
    fn convolution_wraps_around() {
        let w = SmoothingWindow::from_config(&SmoothingConfig::default());
        let mut v = vec![c(0.0, 0.0); 8];
        v[0] = c(4.0, 0.0);
        let out = w.apply(&v);
        assert_eq!(out[0], c(2.0, 0.0));
        assert_eq!(out[1], c(1.0, 0.0));
        assert_eq!(out[7], c(1.0, 0.0));
    }

    #[test]
    fn threshold_schedule_strictly_decreases() {
        let t: Vec<f64> = (1..50).map(|k| threshold_at(1.3, 0.1, k)).collect();
        assert!(t.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn divergence_is_reported() {
        let sys = reference_system();
        let h = SparseChannel::new(32, vec![3, 9, 17, 30], vec![c(1.0, 0.0); 4]).unwrap();
        let mut cfg = RecoveryConfig::default();
        cfg.relaxation = 40.0;
        cfg.smoothing.half_width = 0;
        cfg.threshold_scale = Some(0.0);
        assert!(matches!(
            imat(&noiseless(&sys, &h), &sys, &cfg),
            Err(Error::Divergence { .. })
        ));
    }

    fn cvec(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
        prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), len)
            .prop_map(|v| v.into_iter().map(|(a, b)| c(a, b)).collect())
    }

    proptest! {
        #[test]
        fn sparsifier_is_idempotent(v in cvec(32), t in 0.0..3.0f64) {
            let once = hard_threshold(&v, t);
            prop_assert_eq!(hard_threshold(&once, t), once);
        }

        #[test]
        fn support_grows_as_threshold_falls(v in cvec(32), beta in 0.1..5.0f64, alpha in 0.01..1.0f64) {
            let mut prev = 0;
            for k in 1..40 {
                let kept = hard_threshold(&v, threshold_at(beta, alpha, k))
                    .iter()
                    .filter(|z| z.norm() > 0.0)
                    .count();
                prop_assert!(kept >= prev);
                prev = kept;
            }
        }

        #[test]
        fn windows_preserve_constants(hw in 0usize..6, sigma in 0.2..4.0f64, z in (-5.0..5.0f64, -5.0..5.0f64)) {
            let z = c(z.0, z.1);
            for window in [WindowKind::Identity, WindowKind::Triangular, WindowKind::Gaussian] {
                let w = SmoothingWindow::from_config(&SmoothingConfig { window, half_width: hw, sigma });
                for out in w.apply(&vec![z; 32]) {
                    prop_assert!((out - z).norm() < 1e-12);
                }
            }
        }
    }
}
