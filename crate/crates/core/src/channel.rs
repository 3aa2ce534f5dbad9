//! K-sparse Rayleigh multipath channels.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::linalg::{twiddle, ComplexVector};
use crate::{Error, Result};

/// Sparse channel impulse response of span `L`.
///
/// Estimates are stored in the same type, so an all-zero response (empty
/// support) is allowed here; drawn channels are never all zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseChannel {
    taps: ComplexVector,
    support: Vec<usize>,
}

impl SparseChannel {
    /// Builds a channel from explicit support and gains.
    pub fn new(length: usize, support: Vec<usize>, gains: Vec<Complex64>) -> Result<Self> {
        if support.len() != gains.len() {
            return Err(Error::Dimension(format!(
                "{} support indices for {} gains",
                support.len(),
                gains.len()
            )));
        }
        let mut taps = vec![Complex64::new(0.0, 0.0); length];
        for (&l, &g) in support.iter().zip(&gains) {
            if l >= length {
                return Err(Error::Dimension(format!("tap {l} outside span {length}")));
            }
            if taps[l] != Complex64::new(0.0, 0.0) {
                return Err(Error::InvalidConfig(format!("tap {l} repeated")));
            }
            taps[l] = g;
        }
        Ok(Self::from_dense(taps))
    }

    /// Support is every nonzero entry.
    pub fn from_dense(taps: ComplexVector) -> Self {
        let support = taps
            .iter()
            .enumerate()
            .filter(|(_, z)| **z != Complex64::new(0.0, 0.0))
            .map(|(i, _)| i)
            .collect();
        Self { taps, support }
    }

    pub fn zero(length: usize) -> Self {
        Self::from_dense(vec![Complex64::new(0.0, 0.0); length])
    }

    pub fn length(&self) -> usize {
        self.taps.len()
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn sparsity(&self) -> usize {
        self.support.len()
    }

    pub fn taps(&self) -> &[Complex64] {
        &self.taps
    }

    pub fn energy(&self) -> f64 {
        crate::linalg::norm_sqr(&self.taps)
    }

    /// `||self - other||^2`.
    pub fn squared_error(&self, other: &SparseChannel) -> f64 {
        assert_eq!(self.length(), other.length());
        self.taps
            .iter()
            .zip(&other.taps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    /// Tap span `L`.
    pub length: usize,
    /// Nonzero taps `K`.
    pub sparsity: usize,
}

impl ChannelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.length == 0 || self.sparsity == 0 || self.sparsity > self.length {
            return Err(Error::InvalidConfig(format!(
                "need 1 <= K <= L, got K={} L={}",
                self.sparsity, self.length
            )));
        }
        Ok(())
    }
}

/// Draws a K-sparse channel: support uniform without replacement, gains
/// i.i.d. circular complex Gaussian with variance `1/K` so `E||h||^2 = 1`.
pub fn draw_channel<R: Rng + ?Sized>(cfg: &ChannelConfig, rng: &mut R) -> Result<SparseChannel> {
    cfg.validate()?;
    let mut support = rand::seq::index::sample(rng, cfg.length, cfg.sparsity).into_vec();
    support.sort_unstable();
    let scale = (0.5 / cfg.sparsity as f64).sqrt();
    loop {
        let gains: Vec<Complex64> = (0..cfg.sparsity)
            .map(|_| complex_gaussian(rng) * scale)
            .collect();
        // all-zero draws have probability zero; redraw rather than emit one
        if gains.iter().any(|g| g.norm_sqr() > 0.0) {
            return SparseChannel::new(cfg.length, support, gains);
        }
    }
}

/// Unit-variance-per-component complex normal sample (`E|z|^2 = 2`).
pub(crate) fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// N-point DFT of the zero-padded impulse response.
pub fn frequency_response(h: &SparseChannel, n_total: usize) -> Result<ComplexVector> {
    if h.length() > n_total {
        return Err(Error::Dimension(format!(
            "channel span {} exceeds {n_total} subcarriers",
            h.length()
        )));
    }
    Ok((0..n_total)
        .map(|k| {
            h.support()
                .iter()
                .map(|&l| h.taps()[l] * twiddle(k * l, n_total))
                .sum()
        })
        .collect())
}
