//! The y-update: minimize the ratio-plus-penalty objective without the PAPR
//! constraint, then project each sample onto the disk `|y_n|^2 <= rho P`.
//!
//! `h h^H` is rank one, so in the basis `U` (unitary, first column `h/||h||`)
//! only the first coordinate of `U^H y` is coupled to the ratio term. The
//! other coordinates copy `q = U^H (x + u)` and the first solves the scalar
//! problem
//!
//! `min f(y1) = p / |y1|^2 + |y1 - q1|^2`, with `p = 2 ISL / (rho0 ||h||^2)`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numerics::householder::UnitaryCompletion;
use crate::numerics::quartic::real_quartic_roots;
use crate::numerics::ComplexVector;
use crate::scalar::Real;
use crate::waveform::{isl, MismatchFilter, TimeSequence};

/// Which branch of the stationarity analysis produced `y1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReducedCase {
    /// `q1 = 0`: any point on `|y1|^2 = sqrt(p)`; the positive real one is returned.
    ZeroProjection,
    /// `q1` real and nonzero: `y1` real, root of `t^4 - q1r t^3 - p`.
    RealAxis,
    /// `q1` imaginary and nonzero: `y1` imaginary, root of `t^4 - q1i t^3 - p`.
    ImaginaryAxis,
    /// Both parts nonzero: `y1r` root of `t^4 - q1r t^3 - p q1r^4 / |q1|^4`,
    /// `y1i = q1i y1r / q1r`.
    General,
    /// `p = 0`: the ratio term vanishes and `y1 = q1`.
    NoRatioTerm,
}

/// `p / |y1|^2 + |y1 - q1|^2`.
pub fn reduced_objective<T: Real>(p: T, q1: Complex<T>, y1: Complex<T>) -> T {
    p / y1.norm_sqr() + (y1 - q1).norm_sqr()
}

/// Partial derivatives of [`reduced_objective`] with respect to `(Re y1, Im y1)`,
/// each paired with the largest magnitude among its terms.
pub fn reduced_gradient<T: Real>(p: T, q1: Complex<T>, y1: Complex<T>) -> [(T, T); 2] {
    let two = T::lit(2.0);
    let r2 = y1.norm_sqr();
    let denom = r2 * r2;
    let part = |y: T, q: T| {
        let ratio = -two * p * y / denom;
        let lin = two * (y - q);
        let scale = ratio.abs().max((two * y).abs()).max((two * q).abs());
        (ratio + lin, scale)
    };
    [part(y1.re, q1.re), part(y1.im, q1.im)]
}

/// Global minimizer of [`reduced_objective`] via the stationarity quartics.
pub fn solve_reduced<T: Real>(p: T, q1: Complex<T>) -> (Complex<T>, ReducedCase) {
    let zero = T::zero();
    if p == zero {
        return (q1, ReducedCase::NoRatioTerm);
    }
    let (qr, qi) = (q1.re, q1.im);
    let (case, lead, constant) = if qr == zero && qi == zero {
        return (
            Complex::new(p.sqrt().sqrt(), zero),
            ReducedCase::ZeroProjection,
        );
    } else if qi == zero {
        (ReducedCase::RealAxis, qr, p)
    } else if qr == zero {
        (ReducedCase::ImaginaryAxis, qi, p)
    } else {
        let mag2 = q1.norm_sqr();
        let ratio = qr * qr / mag2;
        (ReducedCase::General, qr, p * ratio * ratio)
    };

    let candidate = |t: T| match case {
        ReducedCase::RealAxis => Complex::new(t, zero),
        ReducedCase::ImaginaryAxis => Complex::new(zero, t),
        _ => Complex::new(t, qi * t / qr),
    };

    let mut best: Option<(Complex<T>, T, T)> = None;
    for t in real_quartic_roots(-lead, zero, zero, -constant) {
        if t == zero {
            continue;
        }
        let y1 = candidate(t);
        let f = reduced_objective(p, q1, y1);
        if !f.is_finite() {
            continue;
        }
        let better = match best {
            None => true,
            Some((_, bf, bt)) => {
                let tie = (f - bf).abs() <= T::epsilon() * T::lit(4.0) * bf.abs();
                if tie {
                    t.abs() > bt.abs()
                } else {
                    f < bf
                }
            }
        };
        if better {
            best = Some((y1, f, t));
        }
    }
    match best {
        Some((y1, _, _)) => (y1, case),
        // the quartic has a negative constant term, so a positive root always
        // exists; this is only reachable through overflow
        None => {
            let dir = q1 / q1.norm();
            (dir * p.sqrt().sqrt().max(q1.norm()), case)
        }
    }
}

/// Unconstrained y-update with the reduced-problem internals exposed.
#[derive(Debug, Clone)]
pub struct UnconstrainedY<T> {
    pub y: ComplexVector<T>,
    pub p: T,
    pub q1: Complex<T>,
    pub y1: Complex<T>,
    pub case: ReducedCase,
}

pub fn y_unconstrained<T: Real>(
    x: &TimeSequence<T>,
    u: &[Complex<T>],
    h: &MismatchFilter<T>,
    rho0: T,
) -> Result<ComplexVector<T>> {
    let sidelobe_energy = isl(x, h)?;
    Ok(y_unconstrained_detailed(x.as_slice(), u, h, rho0, sidelobe_energy)?.y)
}

/// Same as [`y_unconstrained`] with the ISL of `(x, h)` supplied by the caller.
pub fn y_unconstrained_detailed<T: Real>(
    x: &[Complex<T>],
    u: &[Complex<T>],
    h: &MismatchFilter<T>,
    rho0: T,
    sidelobe_energy: T,
) -> Result<UnconstrainedY<T>> {
    let n = h.len();
    if x.len() != n || u.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: if x.len() != n { x.len() } else { u.len() },
        });
    }
    let lambda = h.taps().norm_sqr();
    if !(lambda > T::zero()) {
        return Err(Error::ZeroFilter);
    }
    let scale = T::one() / lambda.sqrt();
    let v: Vec<Complex<T>> = h.as_slice().iter().map(|z| z * scale).collect();
    let basis = UnitaryCompletion::new(&v)?;

    let target: Vec<Complex<T>> = x.iter().zip(u).map(|(a, b)| a + b).collect();
    let mut q = basis.apply_adjoint(&target);
    let p = T::lit(2.0) * sidelobe_energy / (rho0 * lambda);
    let (y1, case) = solve_reduced(p, q[0]);
    let q1 = q[0];
    q[0] = y1;
    let y = basis.apply(&q);
    Ok(UnconstrainedY {
        y: ComplexVector::from_vec_unchecked(y),
        p,
        q1,
        y1,
        case,
    })
}

/// Projects every sample onto `|y_n|^2 <= rho P`, preserving phase.
pub fn y_update<T: Real>(y_unc: &[Complex<T>], rho: T, avg_power: T) -> ComplexVector<T> {
    let bound = rho * avg_power;
    let radius = bound.sqrt();
    let shrink = T::one() - T::epsilon();
    let out = y_unc
        .iter()
        .map(|&z| {
            if z.norm_sqr() <= bound {
                return z;
            }
            let mut w = z * (radius / z.norm());
            while w.norm_sqr() > bound {
                w = w * shrink;
            }
            w
        })
        .collect();
    ComplexVector::from_vec_unchecked(out)
}
