//! Aperiodic cross-correlation between a sequence and a filter, and the
//! sidelobe metrics built on it.
//!
//! `r_k = sum_n x_n conj(h_{n-k})` for `k = -(N-1) ..= N-1`, summing over the
//! indices where both samples exist. Lag 0 is the main lobe.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, ComplexVector};
use crate::scalar::Real;
use crate::waveform::sequence::{MismatchFilter, TimeSequence};

/// Above this length correlations are computed with FFTs.
pub const DIRECT_CORRELATION_MAX_LEN: usize = 64;

/// Cross-correlation values for every lag `-(N-1) ..= N-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationProfile<T> {
    values: Vec<Complex<T>>,
}

impl<T: Real> CorrelationProfile<T> {
    /// Sequence length `N`.
    pub fn n(&self) -> usize {
        self.values.len().div_ceil(2)
    }

    pub fn lag(&self, k: isize) -> Complex<T> {
        self.values[(k + self.n() as isize - 1) as usize]
    }

    pub fn peak(&self) -> Complex<T> {
        self.lag(0)
    }

    /// `(lag, value)` pairs in ascending lag order.
    pub fn iter(&self) -> impl Iterator<Item = (isize, Complex<T>)> + '_ {
        let offset = self.n() as isize - 1;
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (i as isize - offset, v))
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    /// The sidelobe vector: the profile with lag 0 set to zero.
    pub fn sidelobes(&self) -> ComplexVector<T> {
        let mut v = self.values.clone();
        let center = self.n() - 1;
        v[center] = Complex::new(T::zero(), T::zero());
        ComplexVector::from_vec_unchecked(v)
    }

    /// Largest sidelobe magnitude.
    pub fn peak_sidelobe(&self) -> T {
        self.iter()
            .filter(|&(k, _)| k != 0)
            .map(|(_, v)| v.norm())
            .fold(T::zero(), T::max)
    }

    /// Sum of squared sidelobe magnitudes.
    pub fn isl(&self) -> T {
        self.iter()
            .filter(|&(k, _)| k != 0)
            .map(|(_, v)| v.norm_sqr())
            .sum()
    }
}

fn check_lengths(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::LengthMismatch {
            expected: a,
            found: b,
        });
    }
    if a == 0 {
        return Err(Error::EmptyInput);
    }
    Ok(())
}

/// Raw correlation of two equal-length slices, index `k + N - 1` holding lag `k`.
pub fn correlate<T: Real>(x: &[Complex<T>], h: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    check_lengths(x.len(), h.len())?;
    if x.len() <= DIRECT_CORRELATION_MAX_LEN {
        Ok(correlate_direct(x, h))
    } else {
        Ok(correlate_fft(x, h))
    }
}

pub fn correlate_direct<T: Real>(x: &[Complex<T>], h: &[Complex<T>]) -> Vec<Complex<T>> {
    let n = x.len() as isize;
    (-(n - 1)..n)
        .map(|k| {
            let lo = 0.max(k);
            let hi = n.min(n + k);
            (lo..hi).fold(Complex::new(T::zero(), T::zero()), |acc, i| {
                acc + x[i as usize] * h[(i - k) as usize].conj()
            })
        })
        .collect()
}

pub fn correlate_fft<T: Real>(x: &[Complex<T>], h: &[Complex<T>]) -> Vec<Complex<T>> {
    let n = x.len();
    let len = 2 * n;
    let zero = Complex::new(T::zero(), T::zero());
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(len);
    let inv = planner.plan_fft_inverse(len);

    let mut xf = vec![zero; len];
    xf[..n].copy_from_slice(x);
    let mut hf = vec![zero; len];
    hf[..n].copy_from_slice(h);
    fwd.process(&mut xf);
    fwd.process(&mut hf);
    for (a, b) in xf.iter_mut().zip(&hf) {
        *a = *a * b.conj();
    }
    inv.process(&mut xf);
    let scale = T::one() / T::from_usize(len).unwrap();
    // circular lag k lives at k for k >= 0 and at len + k for k < 0
    (0..2 * n - 1)
        .map(|i| {
            let k = i as isize - (n as isize - 1);
            let idx = if k >= 0 {
                k as usize
            } else {
                (len as isize + k) as usize
            };
            xf[idx] * scale
        })
        .collect()
}

pub fn cross_correlation<T: Real>(
    x: &TimeSequence<T>,
    h: &MismatchFilter<T>,
) -> Result<CorrelationProfile<T>> {
    Ok(CorrelationProfile {
        values: correlate(x.as_slice(), h.as_slice())?,
    })
}

/// `H_SL x`: the correlation with the lag-0 entry forced to zero.
pub fn sidelobe_apply<T: Real>(
    h: &MismatchFilter<T>,
    x: &TimeSequence<T>,
) -> Result<ComplexVector<T>> {
    Ok(cross_correlation(x, h)?.sidelobes())
}

/// Sidelobe Gram matrix of `v`: the Hermitian `B` with `w^H B w` equal to the
/// ISL between `v` and any `w` (in either role).
///
/// `B_ab = c_(b-a) - v_a conj(v_b)` with `c_l = sum_j v_j conj(v_(j+l))`.
pub fn sidelobe_gram<T: Real>(v: &[Complex<T>]) -> ComplexMatrix<T> {
    let n = v.len();
    if n == 0 {
        return ComplexMatrix::zeros(0, 0);
    }
    // auto[l + n - 1] = sum_j v_(j+l) conj(v_j) = conj(c_l)
    let auto = correlate(v, v).expect("equal lengths");
    ComplexMatrix::from_fn(n, n, |a, b| {
        let l = b as isize - a as isize;
        auto[(l + n as isize - 1) as usize].conj() - v[a] * v[b].conj()
    })
}

/// `B = X_SL^H X_SL`, so that `isl(x, h) = h^H B h`.
pub fn filter_gram<T: Real>(x: &TimeSequence<T>) -> ComplexMatrix<T> {
    sidelobe_gram(x.as_slice())
}

pub fn isl<T: Real>(x: &TimeSequence<T>, h: &MismatchFilter<T>) -> Result<T> {
    Ok(cross_correlation(x, h)?.isl())
}

/// Peak-to-sidelobe ratio `|x^H h|^2 / ISL` (linear).
pub fn pslr<T: Real>(x: &TimeSequence<T>, h: &MismatchFilter<T>) -> Result<T> {
    let profile = cross_correlation(x, h)?;
    pslr_from_profile(&profile)
}

pub fn pslr_from_profile<T: Real>(profile: &CorrelationProfile<T>) -> Result<T> {
    let isl = profile.isl();
    if !(isl > T::min_positive_value()) {
        return Err(Error::ZeroIsl);
    }
    Ok(profile.peak().norm_sqr() / isl)
}

/// Peak-to-average power ratio `max |x_n|^2 / (||x||^2 / N)` (linear).
pub fn papr<T: Real>(x: &TimeSequence<T>) -> Result<T> {
    papr_of(x.as_slice())
}

pub fn papr_of<T: Real>(x: &[Complex<T>]) -> Result<T> {
    let total: T = x.iter().map(|z| z.norm_sqr()).sum();
    if !(total > T::zero()) {
        return Err(Error::ZeroSequence);
    }
    let peak = x.iter().map(|z| z.norm_sqr()).fold(T::zero(), T::max);
    Ok(peak * T::from_usize(x.len()).unwrap() / total)
}

pub fn to_db<T: Real>(ratio: T) -> T {
    T::lit(10.0) * ratio.log10()
}
