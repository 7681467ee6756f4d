use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::numerics::{dft::idft, ComplexVector};
use crate::scalar::Real;
use crate::waveform::mask::SpectralMask;

fn modulus_tol<T: Real>() -> T {
    T::lit(1e-12).max(T::epsilon() * T::lit(64.0))
}

/// Subcarrier symbols: unit modulus on available subcarriers, zero on nulled ones.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencySymbols<T> {
    mask: SpectralMask,
    s: ComplexVector<T>,
}

impl<T: Real> FrequencySymbols<T> {
    pub fn new(mask: SpectralMask, s: ComplexVector<T>) -> Result<Self> {
        if s.len() != mask.n_subcarriers() {
            return Err(Error::LengthMismatch {
                expected: mask.n_subcarriers(),
                found: s.len(),
            });
        }
        let tol = modulus_tol::<T>();
        for (n, z) in s.iter().enumerate() {
            let ok = if mask.is_available(n) {
                (z.norm() - T::one()).abs() <= tol
            } else {
                z.norm() <= tol
            };
            if !ok {
                return Err(Error::InvalidSymbols(format!(
                    "subcarrier {} has modulus {} (available: {})",
                    n + 1,
                    z.norm(),
                    mask.is_available(n)
                )));
            }
        }
        Ok(Self { mask, s })
    }

    /// One phase per subcarrier; phases at nulled positions are ignored.
    pub fn from_phases(mask: SpectralMask, phases: &[T]) -> Result<Self> {
        if phases.len() != mask.n_subcarriers() {
            return Err(Error::LengthMismatch {
                expected: mask.n_subcarriers(),
                found: phases.len(),
            });
        }
        let s = phases
            .iter()
            .enumerate()
            .map(|(n, &phi)| {
                if mask.is_available(n) {
                    Complex::from_polar(T::one(), phi)
                } else {
                    Complex::new(T::zero(), T::zero())
                }
            })
            .collect();
        Ok(Self {
            mask,
            s: ComplexVector::new(s)?,
        })
    }

    /// Phases drawn uniformly from `[0, 2*pi)` on every available subcarrier.
    pub fn random_phase<R: Rng + ?Sized>(mask: SpectralMask, rng: &mut R) -> Self {
        let phases: Vec<T> = (0..mask.n_subcarriers())
            .map(|n| {
                if mask.is_available(n) {
                    T::lit(rng.random_range(0.0..std::f64::consts::TAU))
                } else {
                    T::zero()
                }
            })
            .collect();
        Self::from_phases(mask, &phases).expect("finite phases")
    }

    pub fn mask(&self) -> &SpectralMask {
        &self.mask
    }

    pub fn symbols(&self) -> &ComplexVector<T> {
        &self.s
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    /// Overwrites the symbol on an available subcarrier, renormalizing to
    /// unit modulus.
    pub(crate) fn set_available(&mut self, n: usize, value: Complex<T>) {
        debug_assert!(self.mask.is_available(n));
        let norm = value.norm();
        self.s[n] = if norm > T::zero() {
            value / norm
        } else {
            Complex::new(-T::one(), T::zero())
        };
    }
}

/// Time-domain samples `x = F_I s`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSequence<T> {
    x: ComplexVector<T>,
}

impl<T: Real> TimeSequence<T> {
    pub fn new(x: ComplexVector<T>) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(Self { x })
    }

    pub fn samples(&self) -> &ComplexVector<T> {
        &self.x
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.x
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// `P = ||x||^2 / N`.
    pub fn avg_power(&self) -> T {
        self.x.norm_sqr() / T::from_usize(self.x.len()).unwrap()
    }

    pub fn into_inner(self) -> ComplexVector<T> {
        self.x
    }
}

pub fn synthesize<T: Real>(symbols: &FrequencySymbols<T>) -> TimeSequence<T> {
    let x = idft(symbols.symbols()).expect("mask guarantees N >= 1");
    TimeSequence {
        x: ComplexVector::from_vec_unchecked(x),
    }
}

/// Receive filter taps `h`, nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct MismatchFilter<T> {
    h: ComplexVector<T>,
}

impl<T: Real> MismatchFilter<T> {
    pub fn new(h: ComplexVector<T>) -> Result<Self> {
        if h.is_empty() {
            return Err(Error::EmptyInput);
        }
        if !(h.norm_sqr() > T::zero()) {
            return Err(Error::ZeroFilter);
        }
        Ok(Self { h })
    }

    /// The matched filter `x / ||x||`.
    pub fn matched(x: &TimeSequence<T>) -> Result<Self> {
        let norm = x.samples().norm();
        if !(norm > T::zero()) {
            return Err(Error::ZeroSequence);
        }
        Self::new(x.samples().scaled(Complex::new(T::one() / norm, T::zero())))
    }

    pub fn taps(&self) -> &ComplexVector<T> {
        &self.h
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.h
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    pub fn norm(&self) -> T {
        self.h.norm()
    }
}
