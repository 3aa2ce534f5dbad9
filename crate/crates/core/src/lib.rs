//! Sparse OFDM channel estimation.
//!
//! The crate estimates K-sparse multipath channel impulse responses from a
//! handful of OFDM pilot subcarriers. It contains:
//!
//! - [`linalg`]: partial DFT measurement matrices and the dense complex
//!   primitives the estimators need.
//! - [`channel`]: sparse Rayleigh channel draws and frequency responses.
//! - [`ofdm`]: frame assembly, the frequency-domain AWGN link, pilot
//!   observation extraction and zero-forcing QPSK demodulation.
//! - [`pilots`]: coherence of pilot patterns, cyclic difference sets and
//!   the random-search baseline.
//! - [`recovery`]: smoothed iterative adaptive thresholding (SDS-IMAT),
//!   plain IMAT, OMP, interpolation and the oracle estimator.
//! - [`harness`]: configuration, the seeded Monte Carlo runner and CSV
//!   output.

pub mod channel;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod ofdm;
pub mod pilots;
pub mod recovery;

pub use error::{Error, Result};
pub use num_complex::Complex64;
