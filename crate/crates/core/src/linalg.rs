//! Dense complex linear algebra for the measurement model.
//!
//! Everything here is small (tens of rows and columns), so matrices are
//! plain row-major `Vec<Complex64>` and products are explicit loops.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::pilots::PilotPattern;
use crate::{Error, Result};

pub type ComplexVector = Vec<Complex64>;

/// Absolute tolerance for the Gram identity check.
pub const GRAM_TOLERANCE: f64 = 1e-9;

/// `exp(-j 2 pi m / n)` with `m` reduced modulo `n` first, so large
/// products of indices do not lose phase accuracy.
#[inline]
pub fn twiddle(m: usize, n: usize) -> Complex64 {
    let phase = -2.0 * PI * ((m % n) as f64) / n as f64;
    Complex64::from_polar(1.0, phase)
}

pub fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

pub fn norm(v: &[Complex64]) -> f64 {
    norm_sqr(v).sqrt()
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> ComplexVector {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Result<ComplexVector> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "{}x{} matrix applied to a length-{} vector",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                for c in 0..other.cols {
                    out.data[r * other.cols + c] += a * other.get(k, c);
                }
            }
        }
        Ok(out)
    }

    /// Largest elementwise distance to `other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Mutual coherence: largest normalized inner product between two
    /// distinct columns. Zero columns are skipped.
    pub fn mutual_coherence(&self) -> f64 {
        let cols: Vec<ComplexVector> = (0..self.cols).map(|c| self.column(c)).collect();
        let norms: Vec<f64> = cols.iter().map(|c| norm(c)).collect();
        let mut best = 0.0f64;
        for i in 0..self.cols {
            for j in 0..self.cols {
                if i == j || norms[i] == 0.0 || norms[j] == 0.0 {
                    continue;
                }
                let inner: Complex64 = cols[i].iter().zip(&cols[j]).map(|(a, b)| a.conj() * b).sum();
                best = best.max(inner.norm() / (norms[i] * norms[j]));
            }
        }
        best
    }
}

/// The `Np x L` block of the N-point DFT matrix selected by a pilot pattern:
/// entry `(p, l) = exp(-j 2 pi lambda_p l / N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialDftMatrix {
    n_total: usize,
    matrix: ComplexMatrix,
}

impl PartialDftMatrix {
    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn n_rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn n_cols(&self) -> usize {
        self.matrix.cols()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<ComplexVector> {
        self.matrix.apply(v)
    }

    /// `W W^H`, an `Np x Np` matrix.
    pub fn gram(&self) -> ComplexMatrix {
        self.matrix
            .matmul(&self.matrix.conj_transpose())
            .expect("conforming by construction")
    }

    /// Largest elementwise deviation of `W W^H` from `N I`.
    pub fn gram_deviation(&self) -> f64 {
        let target = ComplexMatrix::identity(self.n_rows()).scale(self.n_total as f64);
        self.gram().max_abs_diff(&target)
    }

    /// `(1/N) W^H`: the back-projection used by the thresholding iterations.
    /// It is the Moore-Penrose pseudo-inverse exactly when `W W^H = N I`.
    pub fn scaled_adjoint(&self) -> ComplexMatrix {
        self.matrix.conj_transpose().scale(1.0 / self.n_total as f64)
    }
}

pub fn build_partial_dft(n_total: usize, pattern: &PilotPattern, n_cols: usize) -> Result<PartialDftMatrix> {
    if n_cols == 0 {
        return Err(Error::Dimension("partial DFT needs at least one column".into()));
    }
    if n_cols > n_total {
        return Err(Error::Dimension(format!(
            "{n_cols} columns exceed the {n_total}-point DFT"
        )));
    }
    if pattern.n_total() != n_total {
        return Err(Error::InvalidPattern(format!(
            "pattern defined on {} subcarriers, system has {n_total}",
            pattern.n_total()
        )));
    }
    if let Some(&bad) = pattern.indices().iter().find(|&&i| i >= n_total) {
        return Err(Error::InvalidPattern(format!("index {bad} outside [0, {n_total})")));
    }
    let idx = pattern.indices();
    let matrix = ComplexMatrix::from_fn(idx.len(), n_cols, |p, l| twiddle(idx[p] * l, n_total));
    Ok(PartialDftMatrix { n_total, matrix })
}

/// Closed-form pseudo-inverse `(1/N) W^H`.
///
/// Only valid when the rows of `W` are orthogonal with squared norm `N`,
/// which for distinct pilots happens when the tap span covers the whole
/// DFT (`L = N`). Otherwise a [`Error::GramIdentity`] is returned and
/// callers that only need the back-projection should use
/// [`PartialDftMatrix::scaled_adjoint`].
pub fn pseudo_inverse(m: &PartialDftMatrix) -> Result<ComplexMatrix> {
    let deviation = m.gram_deviation();
    if deviation > GRAM_TOLERANCE {
        return Err(Error::GramIdentity { deviation });
    }
    Ok(m.scaled_adjoint())
}
