use std::ops::{Deref, DerefMut};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{is_finite_complex, Real};

/// Fixed-length vector of complex amplitudes with finite entries.
///
/// Dereferences to a slice, so entries can be read and overwritten in place
/// but the length never changes after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector<T> {
    entries: Vec<Complex<T>>,
}

impl<T: Real> ComplexVector<T> {
    /// Validates that every entry is finite.
    pub fn new(entries: Vec<Complex<T>>) -> Result<Self> {
        if let Some(index) = entries.iter().position(|z| !is_finite_complex(z)) {
            return Err(Error::NonFiniteEntry { index });
        }
        Ok(Self { entries })
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            entries: vec![Complex::new(T::zero(), T::zero()); len],
        }
    }

    /// Standard basis vector `e_index` (0-based).
    pub fn basis(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.entries[index] = Complex::new(T::one(), T::zero());
        v
    }

    pub fn from_real(values: &[T]) -> Self {
        Self {
            entries: values.iter().map(|&r| Complex::new(r, T::zero())).collect(),
        }
    }

    /// Skips the finiteness check; for values produced by this crate's own arithmetic.
    pub(crate) fn from_vec_unchecked(entries: Vec<Complex<T>>) -> Self {
        Self { entries }
    }

    pub fn into_vec(self) -> Vec<Complex<T>> {
        self.entries
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn norm_sqr(&self) -> T {
        norm_sqr(&self.entries)
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    /// Largest entry magnitude.
    pub fn norm_inf(&self) -> T {
        self.entries
            .iter()
            .map(|z| z.norm())
            .fold(T::zero(), T::max)
    }

    /// `self^H other`.
    pub fn dot(&self, other: &[Complex<T>]) -> Complex<T> {
        dot(&self.entries, other)
    }

    pub fn scaled(&self, factor: Complex<T>) -> Self {
        Self {
            entries: self.entries.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(is_finite_complex)
    }
}

impl<T> Deref for ComplexVector<T> {
    type Target = [Complex<T>];

    fn deref(&self) -> &Self::Target {
        &self.entries
    }
}

impl<T> DerefMut for ComplexVector<T> {
    fn deref_mut(&mut self) -> &mut Self::Target {
        &mut self.entries
    }
}

/// `a^H b` over slices of equal length.
pub fn dot<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| {
            acc + x.conj() * y
        })
}

pub fn norm_sqr<T: Real>(a: &[Complex<T>]) -> T {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// Largest `|a_i - b_i|`.
pub fn max_abs_diff<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(T::zero(), T::max)
}
