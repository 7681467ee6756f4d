#![allow(dead_code)]

use ofdm_mismatch::{
    Complex, ComplexVector, FrequencySymbols, MismatchFilter, SpectralMask, TimeSequence,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type C64 = Complex<f64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut impl Rng) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_vec(rng: &mut impl Rng, n: usize) -> Vec<C64> {
    (0..n).map(|_| random_complex(rng)).collect()
}

pub fn random_sequence(rng: &mut impl Rng, n: usize) -> TimeSequence<f64> {
    TimeSequence::new(ComplexVector::new(random_vec(rng, n)).unwrap()).unwrap()
}

pub fn random_filter(rng: &mut impl Rng, n: usize) -> MismatchFilter<f64> {
    MismatchFilter::new(ComplexVector::new(random_vec(rng, n)).unwrap()).unwrap()
}

pub fn random_unit_filter(rng: &mut impl Rng, n: usize) -> MismatchFilter<f64> {
    let h = random_vec(rng, n);
    let norm = h.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    MismatchFilter::new(ComplexVector::new(h.iter().map(|z| z / norm).collect()).unwrap()).unwrap()
}

/// A mask with a random contiguous null band covering at most a quarter of the band.
pub fn random_mask(rng: &mut impl Rng, n: usize) -> SpectralMask {
    let width = rng.random_range(0..=n / 4);
    if width == 0 {
        return SpectralMask::all_available(n).unwrap();
    }
    let start = rng.random_range(1..=n - width + 1);
    SpectralMask::from_null_ranges(n, &[start..=start + width - 1]).unwrap()
}

pub fn random_symbols(rng: &mut impl Rng, mask: SpectralMask) -> FrequencySymbols<f64> {
    FrequencySymbols::random_phase(mask, rng)
}

/// Naive `r_k = sum_n x_n conj(h_(n-k))`, index `k + N - 1`.
pub fn correlation_oracle(x: &[C64], h: &[C64]) -> Vec<C64> {
    let n = x.len() as isize;
    (-(n - 1)..n)
        .map(|k| {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..n {
                let j = i - k;
                if (0..n).contains(&j) {
                    acc += x[i as usize] * h[j as usize].conj();
                }
            }
            acc
        })
        .collect()
}

pub fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(p, q)| (p - q).norm())
        .fold(0.0, f64::max)
}
