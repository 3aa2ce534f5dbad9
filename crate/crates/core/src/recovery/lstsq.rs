use num_complex::Complex64;

use crate::linalg::ComplexMatrix;
use crate::{Error, Result};

/// Condition estimates above this make a support singular.
pub const MAX_CONDITION: f64 = 1e12;

/// Least-squares gains for `y ~ W[:, columns] g` via the normal equations
/// `(W_S^H W_S) g = W_S^H y`, solved by Cholesky.
///
/// The condition number is estimated from the Cholesky pivots as
/// `(max d_i / min d_i)^2`.
pub fn solve_least_squares(w: &ComplexMatrix, columns: &[usize], y: &[Complex64]) -> Result<Vec<Complex64>> {
    let k = columns.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    if y.len() != w.rows() {
        return Err(Error::Dimension(format!(
            "{} observations for {} rows",
            y.len(),
            w.rows()
        )));
    }
    let cols: Vec<Vec<Complex64>> = columns.iter().map(|&c| w.column(c)).collect();
    let dot = |a: &[Complex64], b: &[Complex64]| -> Complex64 { a.iter().zip(b).map(|(x, z)| x.conj() * z).sum() };

    let mut gram = vec![vec![Complex64::new(0.0, 0.0); k]; k];
    for i in 0..k {
        for j in 0..=i {
            gram[i][j] = dot(&cols[i], &cols[j]);
        }
    }
    let rhs: Vec<Complex64> = cols.iter().map(|c| dot(c, y)).collect();

    // lower-triangular factor, gram = L L^H
    let mut l = vec![vec![Complex64::new(0.0, 0.0); k]; k];
    for i in 0..k {
        for j in 0..=i {
            let mut s = gram[i][j];
            for p in 0..j {
                s -= l[i][p] * l[j][p].conj();
            }
            if i == j {
                if !(s.re > 0.0) {
                    return Err(Error::SingularSupport {
                        condition: f64::INFINITY,
                    });
                }
                l[i][i] = Complex64::new(s.re.sqrt(), 0.0);
            } else {
                l[i][j] = s / l[j][j].re;
            }
        }
    }
    let diag: Vec<f64> = (0..k).map(|i| l[i][i].re).collect();
    let hi = diag.iter().cloned().fold(0.0, f64::max);
    let lo = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    let condition = (hi / lo).powi(2);
    if condition > MAX_CONDITION {
        return Err(Error::SingularSupport { condition });
    }

    let mut z = vec![Complex64::new(0.0, 0.0); k];
    for i in 0..k {
        let mut s = rhs[i];
        for p in 0..i {
            s -= l[i][p] * z[p];
        }
        z[i] = s / l[i][i].re;
    }
    let mut g = vec![Complex64::new(0.0, 0.0); k];
    for i in (0..k).rev() {
        let mut s = z[i];
        for p in i + 1..k {
            s -= l[p][i].conj() * g[p];
        }
        g[i] = s / l[i][i].re;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_consistent_system() {
        let w = ComplexMatrix::from_fn(6, 4, |r, c| Complex64::new((r * c) as f64 + 1.0, (r + 2 * c) as f64 * 0.3));
        let g_true = vec![Complex64::new(1.0, -2.0), Complex64::new(0.5, 0.25)];
        let y: Vec<Complex64> = (0..6).map(|r| w.get(r, 1) * g_true[0] + w.get(r, 3) * g_true[1]).collect();
        let g = solve_least_squares(&w, &[1, 3], &y).unwrap();
        for (a, b) in g.iter().zip(&g_true) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn duplicate_columns_are_singular() {
        let w = ComplexMatrix::from_fn(4, 2, |r, _| Complex64::new(r as f64 + 1.0, 0.0));
        let y = vec![Complex64::new(1.0, 0.0); 4];
        assert!(matches!(
            solve_least_squares(&w, &[0, 1], &y),
            Err(Error::SingularSupport { .. })
        ));
    }
}
