//! Inverse DFT with the `1/N` scaling used for OFDM synthesis, and its exact
//! inverse.
//!
//! `idft(s)_m = (1/N) * sum_n s_n * exp(j*2*pi*m*n/N)` (0-based indices).

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::numerics::matrix::ComplexMatrix;
use crate::scalar::Real;

/// Lengths up to this use direct summation; longer inputs go through rustfft.
pub const DIRECT_DFT_MAX_LEN: usize = 64;

/// `exp(j*2*pi*k/N)` for `k = 0..N`.
pub fn twiddles<T: Real>(n: usize) -> Vec<Complex<T>> {
    let step = T::TAU() / T::from_usize(n).unwrap();
    (0..n)
        .map(|k| Complex::from_polar(T::one(), step * T::from_usize(k).unwrap()))
        .collect()
}

/// Column `n` (0-based) of the scaled IDFT matrix: `(1/N) exp(j*2*pi*m*n/N)`.
pub fn idft_column<T: Real>(twiddles: &[Complex<T>], n: usize) -> Vec<Complex<T>> {
    let len = twiddles.len();
    let scale = T::one() / T::from_usize(len).unwrap();
    (0..len).map(|m| twiddles[(m * n) % len] * scale).collect()
}

pub fn idft<T: Real>(freq: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    if freq.is_empty() {
        return Err(Error::EmptyInput);
    }
    if freq.len() <= DIRECT_DFT_MAX_LEN {
        Ok(idft_direct(freq))
    } else {
        Ok(idft_fast(freq))
    }
}

pub fn idft_direct<T: Real>(freq: &[Complex<T>]) -> Vec<Complex<T>> {
    transform_direct(freq, false)
}

pub fn idft_fast<T: Real>(freq: &[Complex<T>]) -> Vec<Complex<T>> {
    let n = freq.len();
    let mut buf = freq.to_vec();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    let scale = T::one() / T::from_usize(n).unwrap();
    buf.iter_mut().for_each(|z| *z = *z * scale);
    buf
}

/// Forward transform without scaling; `dft(idft(s)) == s`.
pub fn dft<T: Real>(time: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    if time.is_empty() {
        return Err(Error::EmptyInput);
    }
    if time.len() <= DIRECT_DFT_MAX_LEN {
        Ok(transform_direct(time, true))
    } else {
        let mut buf = time.to_vec();
        FftPlanner::new()
            .plan_fft_forward(buf.len())
            .process(&mut buf);
        Ok(buf)
    }
}

fn transform_direct<T: Real>(input: &[Complex<T>], forward: bool) -> Vec<Complex<T>> {
    let n = input.len();
    let tw = twiddles::<T>(n);
    let scale = if forward {
        T::one()
    } else {
        T::one() / T::from_usize(n).unwrap()
    };
    (0..n)
        .map(|m| {
            let acc = input.iter().enumerate().fold(
                Complex::new(T::zero(), T::zero()),
                |acc, (k, &v)| {
                    let w = tw[(m * k) % n];
                    acc + v * if forward { w.conj() } else { w }
                },
            );
            acc * scale
        })
        .collect()
}

/// Right-multiplies a square matrix by the scaled IDFT matrix: `A * F_I`.
///
/// Row `r` of the product is `idft(row r of A)`.
pub fn right_mul_idft<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let n = a.cols();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let mut out = a.clone();
    if n <= DIRECT_DFT_MAX_LEN {
        for r in 0..a.rows() {
            let row = idft_direct(a.row(r));
            out.row_mut(r).copy_from_slice(&row);
        }
    } else {
        let plan = FftPlanner::new().plan_fft_inverse(n);
        let scale = T::one() / T::from_usize(n).unwrap();
        for r in 0..a.rows() {
            let row = out.row_mut(r);
            plan.process(row);
            row.iter_mut().for_each(|z| *z = *z * scale);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn close(a: &[Complex<f64>], b: &[Complex<f64>], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    #[test]
    fn single_point_is_identity() {
        assert_eq!(idft(&[c(1.0, 0.0)]).unwrap(), vec![c(1.0, 0.0)]);
    }

    #[test]
    fn two_point_all_ones() {
        let x = idft(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(close(&x, &[c(1.0, 0.0), c(0.0, 0.0)], 1e-15));
    }

    #[test]
    fn four_point_second_bin() {
        let s = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let x = idft(&s).unwrap();
        let expected = [c(0.25, 0.0), c(0.0, 0.25), c(-0.25, 0.0), c(0.0, -0.25)];
        assert!(close(&x, &expected, 1e-15));
    }

    #[test]
    fn empty_input_rejected() {
        assert_eq!(idft::<f64>(&[]), Err(Error::EmptyInput));
        assert_eq!(dft::<f64>(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn matrix_product_matches_per_row_transform() {
        let n = 5;
        let a = ComplexMatrix::from_fn(3, n, |r, k| c(r as f64 - k as f64, (r * k) as f64 * 0.3));
        let p = right_mul_idft(&a).unwrap();
        let tw = twiddles::<f64>(n);
        let f = ComplexMatrix::from_fn(n, n, |m, k| tw[(m * k) % n] / n as f64);
        let direct = a.matmul(&f).unwrap();
        assert!(p.max_abs_diff(&direct) < 1e-13);
    }

    #[test]
    fn f32_transform_round_trips() {
        let s: Vec<Complex<f32>> = (0..16)
            .map(|k| Complex::new(k as f32, -(k as f32)))
            .collect();
        let back = dft(&idft(&s).unwrap()).unwrap();
        for (a, b) in s.iter().zip(&back) {
            assert!((a - b).norm() < 1e-4);
        }
    }
}
