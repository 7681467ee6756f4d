//! Hermitian positive-definite linear solves via Cholesky factorization.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numerics::matrix::ComplexMatrix;
use crate::scalar::Real;

/// Lower-triangular `L` with `B = L L^H`.
#[derive(Debug, Clone)]
pub struct Cholesky<T> {
    l: ComplexMatrix<T>,
}

impl<T: Real> Cholesky<T> {
    /// Factors `b`. Fails with [`Error::NotPositiveDefinite`] when a pivot is
    /// not safely positive relative to the largest diagonal entry.
    pub fn factor(b: &ComplexMatrix<T>) -> Result<Self> {
        if !b.is_square() {
            return Err(Error::NotSquare {
                rows: b.rows(),
                cols: b.cols(),
            });
        }
        let n = b.rows();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        let scale = b.max_abs();
        let defect = b.hermitian_defect();
        if defect > T::lit(1e-10) * T::one().max(scale) {
            return Err(Error::NotHermitian {
                asymmetry: defect.to_f64_lossy(),
            });
        }
        let max_diag = (0..n).map(|i| b[(i, i)].re).fold(T::zero(), T::max);
        let floor = T::epsilon() * T::from_usize(n).unwrap() * max_diag;

        let mut l = ComplexMatrix::zeros(n, n);
        for j in 0..n {
            let mut diag = b[(j, j)].re;
            for k in 0..j {
                diag = diag - l[(j, k)].norm_sqr();
            }
            if !(diag > floor) || !diag.is_finite() {
                return Err(Error::NotPositiveDefinite {
                    pivot: j,
                    value: diag.to_f64_lossy(),
                });
            }
            let ljj = diag.sqrt();
            l[(j, j)] = Complex::new(ljj, T::zero());
            for i in j + 1..n {
                let mut acc = b[(i, j)];
                for k in 0..j {
                    acc = acc - l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = acc / ljj;
            }
        }
        Ok(Self { l })
    }

    pub fn solve(&self, rhs: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        let n = self.l.rows();
        if rhs.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: rhs.len(),
            });
        }
        // L z = b
        let mut z = rhs.to_vec();
        for i in 0..n {
            let row = self.l.row(i);
            let acc = (0..i).fold(z[i], |acc, k| acc - row[k] * z[k]);
            z[i] = acc / row[i].re;
        }
        // L^H x = z
        for i in (0..n).rev() {
            let acc = (i + 1..n).fold(z[i], |acc, k| acc - self.l[(k, i)].conj() * z[k]);
            z[i] = acc / self.l[(i, i)].re;
        }
        Ok(z)
    }
}

/// Solves `B z = b` for Hermitian positive-definite `B`.
pub fn hpd_solve<T: Real>(b: &ComplexMatrix<T>, rhs: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    Cholesky::factor(b)?.solve(rhs)
}
