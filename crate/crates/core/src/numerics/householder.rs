//! Unitary completion of a unit vector.
//!
//! For unit `v` with `v_1 = |v_1| e^{j phi}`, the reflector
//! `H = I - 2 w w^H / (w^H w)`, `w = -e^{j phi} e_1 - v`, sends
//! `-e^{j phi} e_1` to `v`. `U = H diag(-e^{j phi}, 1, .., 1)` is unitary with
//! `U e_1 = v`. Choosing the minus sign keeps `|w_1| = 1 + |v_1|`, so `w`
//! never suffers cancellation.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numerics::matrix::ComplexMatrix;
use crate::numerics::vector::{dot, norm_sqr};
use crate::scalar::Real;

/// Implicit `U` with `U e_1 = v`; applies `U` and `U^H` in O(N).
#[derive(Debug, Clone)]
pub struct UnitaryCompletion<T> {
    w: Vec<Complex<T>>,
    w_norm_sqr: T,
    /// `-e^{j phi}`, the first diagonal entry of the phase correction.
    lead: Complex<T>,
}

impl<T: Real> UnitaryCompletion<T> {
    pub fn new(v: &[Complex<T>]) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::EmptyInput);
        }
        let norm = norm_sqr(v).sqrt();
        if (norm - T::one()).abs() > T::lit(1e-12).max(T::epsilon() * T::lit(16.0)) {
            return Err(Error::NotUnitNorm {
                norm: norm.to_f64_lossy(),
            });
        }
        let phase = if v[0].norm() > T::zero() {
            v[0] / v[0].norm()
        } else {
            Complex::new(T::one(), T::zero())
        };
        let lead = -phase;
        let mut w: Vec<Complex<T>> = v.iter().map(|z| -z).collect();
        w[0] = w[0] + lead;
        let w_norm_sqr = norm_sqr(&w);
        Ok(Self {
            w,
            w_norm_sqr,
            lead,
        })
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    fn reflect(&self, z: &mut [Complex<T>]) {
        let coef = dot(&self.w, z) * (T::lit(2.0) / self.w_norm_sqr);
        for (zi, wi) in z.iter_mut().zip(&self.w) {
            *zi = *zi - wi * coef;
        }
    }

    /// `U z`.
    pub fn apply(&self, z: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut out = z.to_vec();
        out[0] = out[0] * self.lead;
        self.reflect(&mut out);
        out
    }

    /// `U^H z`.
    pub fn apply_adjoint(&self, z: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut out = z.to_vec();
        self.reflect(&mut out);
        out[0] = out[0] * self.lead.conj();
        out
    }

    pub fn to_matrix(&self) -> ComplexMatrix<T> {
        let n = self.len();
        let mut u = ComplexMatrix::zeros(n, n);
        let mut e = vec![Complex::new(T::zero(), T::zero()); n];
        for c in 0..n {
            e[c] = Complex::new(T::one(), T::zero());
            let col = self.apply(&e);
            e[c] = Complex::new(T::zero(), T::zero());
            for (r, val) in col.into_iter().enumerate() {
                u[(r, c)] = val;
            }
        }
        u
    }
}

/// Unitary `N x N` matrix whose first column is the unit vector `v`.
pub fn unitary_completion<T: Real>(v: &[Complex<T>]) -> Result<ComplexMatrix<T>> {
    Ok(UnitaryCompletion::new(v)?.to_matrix())
}
