//! Sparse channel estimators sharing one measurement model.
//!
//! All estimators see the same [`PilotObservation`] and
//! [`MeasurementSystem`] and return a [`RecoveryResult`]. They are pure
//! functions; no randomness is used here.

mod imat;
mod interpolate;
mod lstsq;
mod omp;
mod oracle;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::SparseChannel;
use crate::linalg::{build_partial_dft, ComplexMatrix, PartialDftMatrix};
use crate::ofdm::PilotObservation;
use crate::pilots::PilotPattern;
use crate::{Error, Result};

pub use imat::{hard_threshold, imat, sds_imat, threshold_at, SmoothingWindow};
pub use interpolate::interpolate_estimate;
pub use lstsq::solve_least_squares;
pub use omp::omp;
pub use oracle::oracle_estimate;

/// The pilot pattern, its `Np x L` partial DFT and the scaled adjoint
/// `(1/N) W^H` used for back-projection.
#[derive(Debug, Clone)]
pub struct MeasurementSystem {
    pattern: PilotPattern,
    matrix: PartialDftMatrix,
    back_projection: ComplexMatrix,
}

impl MeasurementSystem {
    pub fn new(pattern: &PilotPattern, n_cols: usize) -> Result<Self> {
        let matrix = build_partial_dft(pattern.n_total(), pattern, n_cols)?;
        let back_projection = matrix.scaled_adjoint();
        Ok(Self {
            pattern: pattern.clone(),
            matrix,
            back_projection,
        })
    }

    pub fn n_total(&self) -> usize {
        self.pattern.n_total()
    }

    pub fn n_pilots(&self) -> usize {
        self.pattern.n_pilots()
    }

    pub fn n_cols(&self) -> usize {
        self.matrix.n_cols()
    }

    pub fn pattern(&self) -> &PilotPattern {
        &self.pattern
    }

    pub fn matrix(&self) -> &PartialDftMatrix {
        &self.matrix
    }

    pub fn back_projection(&self) -> &ComplexMatrix {
        &self.back_projection
    }

    pub(crate) fn check(&self, obs: &PilotObservation) -> Result<()> {
        if obs.pattern != self.pattern || obs.values.len() != self.n_pilots() {
            return Err(Error::Dimension(format!(
                "observation over {} pilots does not match the measurement system ({} pilots)",
                obs.values.len(),
                self.n_pilots()
            )));
        }
        Ok(())
    }

    /// `||y - W h||`.
    pub fn residual_norm(&self, obs: &PilotObservation, h: &[num_complex::Complex64]) -> Result<f64> {
        let fit = self.matrix.apply(h)?;
        Ok(obs
            .values
            .iter()
            .zip(&fit)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    SdsImat,
    Imat,
    Omp,
    Interpolate,
    Oracle,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::SdsImat,
        Method::Imat,
        Method::Omp,
        Method::Interpolate,
        Method::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::SdsImat => "sds_imat",
            Method::Imat => "imat",
            Method::Omp => "omp",
            Method::Interpolate => "interpolate",
            Method::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown method {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowKind {
    Identity,
    Triangular,
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmoothingConfig {
    pub window: WindowKind,
    pub half_width: usize,
    /// Standard deviation in taps, used by the Gaussian window only.
    #[serde(default = "default_sigma")]
    pub sigma: f64,
}

fn default_sigma() -> f64 {
    1.0
}

impl Default for SmoothingConfig {
    fn default() -> Self {
        Self {
            window: WindowKind::Triangular,
            half_width: 1,
            sigma: default_sigma(),
        }
    }
}

/// What the smoothing window is applied to in the update step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SmoothingTarget {
    /// `h_hat = f(residue) + h_prev`.
    #[default]
    Residue,
    /// `h_hat = f(residue + h_prev)`.
    Update,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RecoveryConfig {
    /// Step size applied to the back-projected residual.
    pub relaxation: f64,
    /// Initial threshold. `None` uses the largest magnitude of the first
    /// back-projected residue.
    pub threshold_scale: Option<f64>,
    /// Exponential decay rate of the threshold per iteration.
    pub threshold_decay: f64,
    pub max_iterations: usize,
    pub smoothing: SmoothingConfig,
    pub smoothing_target: SmoothingTarget,
    /// Number of OMP selections.
    pub sparsity_hint: usize,
    /// Optional early stop for OMP once the residual norm drops to this.
    pub omp_residual_tolerance: Option<f64>,
}

impl Default for RecoveryConfig {
    /// Same values as `configs/recovery.toml`, picked by
    /// `examples/grid_search.rs` at 20 dB on the (91, 10) system.
    fn default() -> Self {
        Self {
            relaxation: 2.0,
            threshold_scale: None,
            threshold_decay: 0.1,
            max_iterations: 200,
            smoothing: SmoothingConfig::default(),
            smoothing_target: SmoothingTarget::Residue,
            sparsity_hint: 4,
            omp_residual_tolerance: None,
        }
    }
}

impl RecoveryConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.into()));
        if !(self.relaxation > 0.0) {
            return bad("relaxation must be positive");
        }
        if !(self.threshold_decay > 0.0) {
            return bad("threshold_decay must be positive");
        }
        if self.max_iterations == 0 {
            return bad("max_iterations must be at least 1");
        }
        if matches!(self.threshold_scale, Some(b) if !(b >= 0.0)) {
            return bad("threshold_scale must be nonnegative");
        }
        if self.smoothing.window == WindowKind::Gaussian && !(self.smoothing.sigma > 0.0) {
            return bad("gaussian window needs sigma > 0");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryResult {
    pub estimate: SparseChannel,
    pub iterations_used: usize,
    pub residual_norm: f64,
    pub method: Method,
}

/// Runs `method`. The oracle needs the true support in `truth`.
pub fn recover(
    method: Method,
    obs: &PilotObservation,
    sys: &MeasurementSystem,
    cfg: &RecoveryConfig,
    truth: Option<&[usize]>,
) -> Result<RecoveryResult> {
    match method {
        Method::SdsImat => sds_imat(obs, sys, cfg),
        Method::Imat => imat(obs, sys, cfg),
        Method::Omp => omp(obs, sys, cfg),
        Method::Interpolate => interpolate_estimate(obs, sys),
        Method::Oracle => {
            let support = truth.ok_or_else(|| {
                Error::InvalidConfig("oracle estimator needs the true support".into())
            })?;
            oracle_estimate(obs, sys, support)
        }
    }
}
