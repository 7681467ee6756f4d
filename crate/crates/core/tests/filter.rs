mod common;

use common::{random_sequence, random_unit_filter, rng, C64};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use ofdm_mismatch::waveform::{filter_gram, pslr};
use ofdm_mismatch::{update_filter, ComplexVector, MismatchFilter, TimeSequence};
use rand::Rng;

fn to_na(m: &ofdm_mismatch::ComplexMatrix<f64>) -> DMatrix<C64> {
    DMatrix::from_fn(m.rows(), m.cols(), |a, b| m[(a, b)])
}

/// Dominant generalized eigenvector of `(x x^H, B)` by whitening with a
/// Hermitian eigendecomposition of `B`.
fn generalized_eigen_oracle(x: &[C64], b: &DMatrix<C64>) -> (f64, DVector<C64>) {
    let eig = SymmetricEigen::new(b.clone());
    let inv_sqrt = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| C64::new(1.0 / l.sqrt(), 0.0)));
    let w = &eig.eigenvectors * inv_sqrt * eig.eigenvectors.adjoint();
    let xv = DVector::from_column_slice(x);
    let wx = &w * &xv;
    let a = &wx * wx.adjoint();
    let top = SymmetricEigen::new(a);
    let (idx, mu) =
        top.eigenvalues
            .iter()
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc },
            );
    let h = &w * top.eigenvectors.column(idx);
    (mu, h)
}

#[test]
fn matches_generalized_eigen_oracle() {
    let mut r = rng(40);
    for _ in 0..20 {
        let n = r.random_range(2..=32);
        let x = random_sequence(&mut r, n);
        let h = update_filter(&x, 0.0).unwrap();
        let b = filter_gram(&x);

        let (mu, oracle) = generalized_eigen_oracle(x.as_slice(), &to_na(&b));
        let attained = pslr(&x, &h).unwrap();
        assert!((attained - mu).abs() <= 1e-8 * mu, "{attained} vs {mu}");
        let oracle = &oracle / C64::new(oracle.norm(), 0.0);
        let overlap: C64 = oracle
            .iter()
            .zip(h.as_slice())
            .map(|(a, b)| a.conj() * b)
            .sum();
        assert!((overlap.norm() - 1.0).abs() < 1e-8);

        let peak: C64 = x
            .as_slice()
            .iter()
            .zip(h.as_slice())
            .map(|(a, b)| a.conj() * b)
            .sum();
        let lhs: Vec<C64> = x.as_slice().iter().map(|a| a * peak).collect();
        let bh = b.mul_vec(h.as_slice()).unwrap();
        let residual: f64 = lhs
            .iter()
            .zip(&bh)
            .map(|(a, b)| (a - b * attained).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let scale: f64 = lhs.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        assert!(residual <= 1e-6 * scale);
    }
}

#[test]
fn dominates_random_filters() {
    let mut r = rng(41);
    for _ in 0..5 {
        let n = r.random_range(2..=32);
        let x = random_sequence(&mut r, n);
        let best = pslr(&x, &update_filter(&x, 0.0).unwrap()).unwrap();
        for _ in 0..1000 {
            assert!(best >= pslr(&x, &random_unit_filter(&mut r, n)).unwrap());
        }
    }
}

#[test]
fn normalized_with_real_peak() {
    let mut r = rng(42);
    let x = random_sequence(&mut r, 12);
    let h = update_filter(&x, 0.0).unwrap();
    assert!((h.norm() - 1.0).abs() < 1e-14);
    let peak: C64 = x
        .as_slice()
        .iter()
        .zip(h.as_slice())
        .map(|(a, b)| a.conj() * b)
        .sum();
    assert!(peak.re > 0.0 && peak.im.abs() < 1e-14 * peak.re);
}

#[test]
fn isotropic_gram_gives_matched_filter() {
    let x = TimeSequence::new(ComplexVector::new(vec![C64::new(1.0, 0.0); 2]).unwrap()).unwrap();
    let h = update_filter(&x, 0.0).unwrap();
    let matched = MismatchFilter::matched(&x).unwrap();
    assert!(common::max_diff(h.as_slice(), matched.as_slice()) < 1e-15);
}

#[test]
fn argmax_is_scale_invariant() {
    let mut r = rng(43);
    let x = random_sequence(&mut r, 10);
    let alpha = C64::new(-3.0, 2.0);
    let scaled = TimeSequence::new(x.samples().scaled(alpha)).unwrap();
    let a = update_filter(&x, 0.0).unwrap();
    let b = update_filter(&scaled, 0.0).unwrap();
    let overlap: C64 = a
        .as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(p, q)| p.conj() * q)
        .sum();
    assert!((overlap.norm() - 1.0).abs() < 1e-10);
}

#[test]
fn degenerate_inputs() {
    let zero = TimeSequence::new(ComplexVector::<f64>::zeros(4)).unwrap();
    assert!(update_filter(&zero, 0.0).is_err());
    let short = TimeSequence::new(ComplexVector::<f64>::basis(1, 0)).unwrap();
    assert!(update_filter(&short, 0.0).is_err());
}
