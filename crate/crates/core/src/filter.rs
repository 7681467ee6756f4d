//! Mismatch filter update: maximize `|x^H h|^2 / (h^H B h)` over `h`.
//!
//! The numerator `x x^H` has rank one, so the generalized Rayleigh quotient
//! is maximized by `h ∝ B^{-1} x` and the maximum is `x^H B^{-1} x`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numerics::hpd::Cholesky;
use crate::numerics::vector::dot;
use crate::numerics::{ComplexMatrix, ComplexVector};
use crate::scalar::Real;
use crate::waveform::{filter_gram, MismatchFilter, TimeSequence};

/// Relative diagonal loading applied when `B` cannot be factored.
pub const FALLBACK_LOADING: f64 = 1e-12;

/// Unit-norm filter maximizing the PSLR against `x`, phased so that
/// `x^H h >= 0`.
///
/// `loading` is added to the diagonal of `B` up front. If the factorization
/// still fails, a retry adds `FALLBACK_LOADING * trace(B) / N`.
pub fn update_filter<T: Real>(x: &TimeSequence<T>, loading: T) -> Result<MismatchFilter<T>> {
    let n = x.len();
    if n < 2 {
        return Err(Error::InvalidConfig("filter update needs N >= 2".into()));
    }
    if !(x.samples().norm_sqr() > T::zero()) {
        return Err(Error::ZeroSequence);
    }
    let gram = filter_gram(x);
    let direction = match solve_loaded(&gram, x.as_slice(), loading) {
        Ok(z) => z,
        Err(first) => {
            let extra = T::lit(FALLBACK_LOADING) * gram.trace().re / T::from_usize(n).unwrap();
            if !(extra > T::zero()) {
                return Err(Error::FilterUpdate(Box::new(first)));
            }
            solve_loaded(&gram, x.as_slice(), loading + extra)
                .map_err(|e| Error::FilterUpdate(Box::new(e)))?
        }
    };
    normalize_filter(x.as_slice(), direction)
}

fn solve_loaded<T: Real>(
    gram: &ComplexMatrix<T>,
    x: &[Complex<T>],
    loading: T,
) -> Result<Vec<Complex<T>>> {
    let mut b = gram.clone();
    if loading != T::zero() {
        for i in 0..b.rows() {
            b[(i, i)] = b[(i, i)] + Complex::new(loading, T::zero());
        }
    }
    Cholesky::factor(&b)?.solve(x)
}

fn normalize_filter<T: Real>(
    x: &[Complex<T>],
    mut h: Vec<Complex<T>>,
) -> Result<MismatchFilter<T>> {
    let norm = h.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    if !(norm > T::zero()) || !norm.is_finite() {
        return Err(Error::FilterUpdate(Box::new(Error::ZeroFilter)));
    }
    let gain = dot(x, &h);
    let phase = if gain.norm() > T::zero() {
        gain.conj() / gain.norm()
    } else {
        Complex::new(T::one(), T::zero())
    };
    let factor = phase / norm;
    h.iter_mut().for_each(|z| *z = *z * factor);
    MismatchFilter::new(ComplexVector::new(h)?)
}
