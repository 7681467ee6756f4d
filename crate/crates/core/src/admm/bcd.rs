//! Cyclic coordinate descent over the subcarrier phases for the x-update.
//!
//! With every other symbol fixed, the x-update objective restricted to
//! subcarrier `n` equals `const + Re{s_n d}` on the unit circle, so the
//! minimizer is `s_n = -exp(-j arg d)`.

use num_complex::Complex;

use crate::admm::AdmmState;
use crate::error::{Error, Result};
use crate::numerics::dft::{idft, idft_column, right_mul_idft, twiddles};
use crate::numerics::vector::dot;
use crate::numerics::ComplexVector;
use crate::scalar::Real;
use crate::waveform::metrics::{correlate, sidelobe_gram};
use crate::waveform::MismatchFilter;

/// Per-filter precomputation: column `n` of `G F_I`, where `G = H_SL^H H_SL`,
/// and `f_n^H G f_n`.
#[derive(Debug, Clone)]
pub struct SidelobeCache<T> {
    columns: Vec<Vec<Complex<T>>>,
    kappa: Vec<T>,
    twiddles: Vec<Complex<T>>,
}

impl<T: Real> SidelobeCache<T> {
    pub fn new(h: &MismatchFilter<T>) -> Result<Self> {
        let n = h.len();
        let gram = sidelobe_gram(h.as_slice());
        let gf = right_mul_idft(&gram)?;
        let twiddles = twiddles::<T>(n);
        let columns: Vec<Vec<Complex<T>>> = (0..n).map(|c| gf.column(c)).collect();
        let kappa = columns
            .iter()
            .enumerate()
            .map(|(c, col)| dot(&idft_column(&twiddles, c), col).re)
            .collect();
        Ok(Self {
            columns,
            kappa,
            twiddles,
        })
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }
}

/// `|h^H y|^2`, the denominator of the ratio term.
pub(crate) fn filter_gain<T: Real>(h: &MismatchFilter<T>, y: &[Complex<T>]) -> Result<T> {
    let g = dot(h.as_slice(), y).norm_sqr();
    if !(g > T::min_positive_value()) || !g.is_finite() {
        return Err(Error::ZeroDenominator);
    }
    Ok(g)
}

/// Coefficient `d` for subcarrier `n` (0-based), computed from scratch
/// through explicit sidelobe vectors.
pub fn bcd_coefficient<T: Real>(
    n: usize,
    state: &AdmmState<T>,
    h: &MismatchFilter<T>,
) -> Result<Complex<T>> {
    let len = state.x.len();
    if h.len() != len {
        return Err(Error::LengthMismatch {
            expected: len,
            found: h.len(),
        });
    }
    if n >= len || !state.symbols.mask().is_available(n) {
        return Err(Error::InvalidSymbols(format!(
            "subcarrier {} is not free",
            n + 1
        )));
    }
    let denom = filter_gain(h, &state.y)?;
    let f_n = idft_column(&twiddles::<T>(len), n);
    let s_n = state.symbols.symbols()[n];
    let x_bar: Vec<Complex<T>> = state
        .x
        .as_slice()
        .iter()
        .zip(&f_n)
        .map(|(x, f)| x - s_n * f)
        .collect();

    let sidelobes = |v: &[Complex<T>]| -> Result<Vec<Complex<T>>> {
        let mut r = correlate(v, h.as_slice())?;
        r[len - 1] = Complex::new(T::zero(), T::zero());
        Ok(r)
    };
    let ratio_term = dot(&sidelobes(&x_bar)?, &sidelobes(&f_n)?) * (T::lit(2.0) / denom);

    let resid: Vec<Complex<T>> = x_bar
        .iter()
        .zip(state.y.iter().zip(state.u.iter()))
        .map(|(xb, (y, u))| xb - y + u)
        .collect();
    let penalty_term = dot(&resid, &f_n) * state.rho0;
    Ok(ratio_term + penalty_term)
}

/// Unit-modulus minimizer of `Re{s d}`; `d = 0` yields `-1`.
pub fn bcd_update_symbol<T: Real>(d: Complex<T>) -> Complex<T> {
    let mag = d.norm();
    if mag > T::zero() && mag.is_finite() {
        -(d.conj() / mag)
    } else {
        Complex::new(-T::one(), T::zero())
    }
}

/// Runs `sweeps` cyclic passes over the available subcarriers, with `y` and
/// `u` held fixed.
pub fn x_update<T: Real>(
    state: &mut AdmmState<T>,
    h: &MismatchFilter<T>,
    sweeps: usize,
) -> Result<()> {
    if sweeps == 0 {
        return Ok(());
    }
    let cache = SidelobeCache::new(h)?;
    x_update_cached(state, h, &cache, sweeps)
}

pub(crate) fn x_update_cached<T: Real>(
    state: &mut AdmmState<T>,
    h: &MismatchFilter<T>,
    cache: &SidelobeCache<T>,
    sweeps: usize,
) -> Result<()> {
    let len = state.x.len();
    if cache.len() != len || h.len() != len {
        return Err(Error::LengthMismatch {
            expected: len,
            found: cache.len().min(h.len()),
        });
    }
    let denom = filter_gain(h, &state.y)?;
    let ratio_scale = T::lit(2.0) / denom;
    let inv_len = T::one() / T::from_usize(len).unwrap();
    let free = state.symbols.mask().available_indices();
    let mut f_n = vec![Complex::new(T::zero(), T::zero()); len];

    for _ in 0..sweeps {
        let mut x: Vec<Complex<T>> = state.x.as_slice().to_vec();
        let mut resid: Vec<Complex<T>> = x
            .iter()
            .zip(state.y.iter().zip(state.u.iter()))
            .map(|(x, (y, u))| x - y + u)
            .collect();

        for &n in &free {
            for (m, f) in f_n.iter_mut().enumerate() {
                *f = cache.twiddles[(m * n) % len] * inv_len;
            }
            let s_n = state.symbols.symbols()[n];
            let ratio = (dot(&x, &cache.columns[n]) - s_n.conj() * cache.kappa[n]) * ratio_scale;
            let penalty = (dot(&resid, &f_n) - s_n.conj() * inv_len) * state.rho0;
            let s_new = bcd_update_symbol(ratio + penalty);
            let delta = s_new - s_n;
            if delta.norm_sqr() == T::zero() {
                continue;
            }
            state.symbols.set_available(n, s_new);
            let delta = state.symbols.symbols()[n] - s_n;
            for ((xi, ri), f) in x.iter_mut().zip(resid.iter_mut()).zip(&f_n) {
                let step = delta * f;
                *xi = *xi + step;
                *ri = *ri + step;
            }
        }
        state.x = crate::waveform::TimeSequence::new(ComplexVector::from_vec_unchecked(idft(
            state.symbols.symbols(),
        )?))?;
    }
    Ok(())
}
