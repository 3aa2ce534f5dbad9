//! Frequency-domain OFDM link: frame assembly, the diagonal channel with
//! AWGN, pilot observation and zero-forcing QPSK demodulation.
//!
//! The cyclic prefix is assumed long enough for the channel, so after the
//! receive FFT each subcarrier sees `r[k] = X[k] H[k] + V[k]`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;

use crate::channel::{complex_gaussian, frequency_response, SparseChannel};
use crate::linalg::ComplexVector;
use crate::pilots::PilotPattern;
use crate::{Error, Result};

/// Channel estimates with `|H| < SINGULAR_GAIN` on a data subcarrier are
/// not inverted.
pub const SINGULAR_GAIN: f64 = 1e-12;

pub const BITS_PER_SYMBOL: usize = 2;

/// Gray-mapped unit-power QPSK.
pub fn qpsk_map(b0: u8, b1: u8) -> Complex64 {
    let re = if b0 == 0 { 1.0 } else { -1.0 };
    let im = if b1 == 0 { 1.0 } else { -1.0 };
    Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

/// Nearest-point decision for [`qpsk_map`].
pub fn qpsk_decide(z: Complex64) -> [u8; 2] {
    [u8::from(z.re < 0.0), u8::from(z.im < 0.0)]
}

pub fn random_bits<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<u8> {
    (0..n).map(|_| u8::from(rng.random::<bool>())).collect()
}

#[derive(Debug, Clone)]
pub struct OfdmFrame {
    symbols: ComplexVector,
    pilot_pattern: PilotPattern,
    pilot_value: Complex64,
    data_indices: Vec<usize>,
}

impl OfdmFrame {
    /// Places pilots (value `1 + 0j`) on the pattern and QPSK symbols for
    /// `bits` on the remaining subcarriers in ascending order.
    pub fn new(pattern: &PilotPattern, bits: &[u8]) -> Result<Self> {
        Self::with_pilot_value(pattern, bits, Complex64::new(1.0, 0.0))
    }

    pub fn with_pilot_value(pattern: &PilotPattern, bits: &[u8], pilot_value: Complex64) -> Result<Self> {
        let data_indices = pattern.data_indices();
        if bits.len() != BITS_PER_SYMBOL * data_indices.len() {
            return Err(Error::Dimension(format!(
                "{} bits for {} data subcarriers",
                bits.len(),
                data_indices.len()
            )));
        }
        let mut symbols = vec![pilot_value; pattern.n_total()];
        for (pair, &k) in bits.chunks_exact(2).zip(&data_indices) {
            symbols[k] = qpsk_map(pair[0], pair[1]);
        }
        Ok(Self {
            symbols,
            pilot_pattern: pattern.clone(),
            pilot_value,
            data_indices,
        })
    }

    pub fn n_total(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[Complex64] {
        &self.symbols
    }

    pub fn pilot_pattern(&self) -> &PilotPattern {
        &self.pilot_pattern
    }

    pub fn pilot_value(&self) -> Complex64 {
        self.pilot_value
    }

    pub fn data_indices(&self) -> &[usize] {
        &self.data_indices
    }

    pub fn n_data_bits(&self) -> usize {
        BITS_PER_SYMBOL * self.data_indices.len()
    }
}

/// Noisy channel samples at the pilot subcarriers, pilot symbol divided out.
#[derive(Debug, Clone, PartialEq)]
pub struct PilotObservation {
    pub values: ComplexVector,
    pub pattern: PilotPattern,
    /// Per-sample complex noise variance.
    pub noise_variance: f64,
}

/// Noise variance for a per-subcarrier SNR, given unit-power symbols and a
/// unit-power channel. Infinite SNR gives zero noise.
pub fn noise_variance_for_snr(snr_db: f64) -> f64 {
    10f64.powf(-snr_db / 10.0)
}

/// Passes `frame` through `h` and adds circular Gaussian noise of variance
/// `10^(-snr_db/10)` on every subcarrier. Returns `(received, sigma^2)`.
pub fn transmit_receive<R: Rng + ?Sized>(
    frame: &OfdmFrame,
    h: &SparseChannel,
    snr_db: f64,
    rng: &mut R,
) -> Result<(ComplexVector, f64)> {
    let hf = frequency_response(h, frame.n_total())?;
    let sigma2 = noise_variance_for_snr(snr_db);
    let scale = (sigma2 / 2.0).sqrt();
    let received = frame
        .symbols
        .iter()
        .zip(&hf)
        .map(|(x, hk)| x * hk + complex_gaussian(rng) * scale)
        .collect();
    Ok((received, sigma2))
}

pub fn extract_pilot_observation(
    received: &[Complex64],
    frame: &OfdmFrame,
    noise_variance: f64,
) -> Result<PilotObservation> {
    if received.len() != frame.n_total() {
        return Err(Error::Dimension(format!(
            "{} received samples for {} subcarriers",
            received.len(),
            frame.n_total()
        )));
    }
    let pilot = frame.pilot_value;
    if pilot.norm() == 0.0 {
        return Err(Error::InvalidConfig("pilot value is zero".into()));
    }
    let values = frame
        .pilot_pattern
        .indices()
        .iter()
        .map(|&k| received[k] / pilot)
        .collect();
    Ok(PilotObservation {
        values,
        pattern: frame.pilot_pattern.clone(),
        noise_variance: noise_variance / pilot.norm_sqr(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Demodulated {
    pub bits: Vec<u8>,
    /// Data subcarriers whose estimated gain was too small to invert.
    pub singular_events: usize,
}

/// Zero-forcing equalization with the estimated channel followed by hard
/// QPSK decisions on the data subcarriers.
pub fn equalize_and_demodulate(
    received: &[Complex64],
    h_est: &SparseChannel,
    frame: &OfdmFrame,
) -> Result<Demodulated> {
    if received.len() != frame.n_total() {
        return Err(Error::Dimension(format!(
            "{} received samples for {} subcarriers",
            received.len(),
            frame.n_total()
        )));
    }
    let h_hat = frequency_response(h_est, frame.n_total())?;
    let mut bits = Vec::with_capacity(frame.n_data_bits());
    let mut singular_events = 0;
    for &k in &frame.data_indices {
        if h_hat[k].norm() < SINGULAR_GAIN {
            singular_events += 1;
            bits.extend_from_slice(&[0, 0]);
        } else {
            bits.extend_from_slice(&qpsk_decide(received[k] / h_hat[k]));
        }
    }
    Ok(Demodulated {
        bits,
        singular_events,
    })
}

pub fn count_bit_errors(a: &[u8], b: &[u8]) -> usize {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}
