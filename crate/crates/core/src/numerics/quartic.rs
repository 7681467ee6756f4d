//! Real roots of the monic quartic `t^4 + a3 t^3 + a2 t^2 + a1 t + a0`.
//!
//! Ferrari's method on the depressed quartic: a positive root `m` of the
//! resolvent cubic splits `z^4 + p z^2 + q z + r` into two real quadratics.
//! Every real candidate is polished with Newton steps on the original
//! polynomial and near-coincident roots are merged.

use crate::scalar::Real;

pub fn eval_quartic<T: Real>(coeffs: [T; 4], t: T) -> T {
    let [a3, a2, a1, a0] = coeffs;
    (((t + a3) * t + a2) * t + a1) * t + a0
}

fn eval_derivative<T: Real>(coeffs: [T; 4], t: T) -> T {
    let [a3, a2, a1, _] = coeffs;
    let four = T::lit(4.0);
    let three = T::lit(3.0);
    let two = T::lit(2.0);
    ((four * t + three * a3) * t + two * a2) * t + a1
}

/// Sum of term magnitudes at `t`; the natural scale of rounding error in `p(t)`.
fn eval_magnitude<T: Real>(coeffs: [T; 4], t: T) -> T {
    let [a3, a2, a1, a0] = coeffs;
    let at = t.abs();
    (((at + a3.abs()) * at + a2.abs()) * at + a1.abs()) * at + a0.abs()
}

/// Distinct real roots in ascending order. Roots whose imaginary part is
/// below [`Real::root_imag_tol`] (relative to `max(1, |re|)`) count as real.
pub fn real_quartic_roots<T: Real>(a3: T, a2: T, a1: T, a0: T) -> Vec<T> {
    let coeffs = [a3, a2, a1, a0];
    let shift = a3 / T::lit(4.0);
    let a3_2 = a3 * a3;
    let p = a2 - T::lit(3.0 / 8.0) * a3_2;
    let q = a1 - a2 * a3 / T::lit(2.0) + a3_2 * a3 / T::lit(8.0);
    let r =
        a0 - a1 * a3 / T::lit(4.0) + a2 * a3_2 / T::lit(16.0) - T::lit(3.0 / 256.0) * a3_2 * a3_2;

    let mut depressed = Vec::with_capacity(4);
    let scale = p.abs().max(r.abs().sqrt()).max(q.abs().cbrt().powi(2));
    if q.abs() <= T::epsilon() * scale.max(T::min_positive_value()).powf(T::lit(1.5)) * T::lit(8.0)
    {
        // Biquadratic: w = z^2 with w^2 + p w + r = 0.
        for w in real_quadratic_roots(p, r) {
            if w > T::zero() {
                let z = w.sqrt();
                depressed.push(z);
                depressed.push(-z);
            } else if (-w).sqrt() <= T::root_imag_tol() {
                depressed.push(T::zero());
            }
        }
    } else {
        let m = resolvent_root(p, q, r);
        let s = (T::lit(2.0) * m).sqrt();
        let half_p_m = p / T::lit(2.0) + m;
        let q_term = q / (T::lit(2.0) * s);
        depressed.extend(real_quadratic_roots(-s, half_p_m + q_term));
        depressed.extend(real_quadratic_roots(s, half_p_m - q_term));
    }

    let mut roots: Vec<T> = depressed
        .into_iter()
        .map(|z| polish(coeffs, z - shift))
        .filter(|t| t.is_finite())
        .collect();
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    dedup_roots(coeffs, roots)
}

/// Real roots of `z^2 + b z + c`, accepting near-real conjugate pairs as a
/// double root.
fn real_quadratic_roots<T: Real>(b: T, c: T) -> Vec<T> {
    let two = T::lit(2.0);
    let disc = b * b - T::lit(4.0) * c;
    if disc >= T::zero() {
        let sq = disc.sqrt();
        let big = -(b + b.signum() * sq) / two;
        if big == T::zero() {
            return vec![T::zero(), T::zero()];
        }
        return vec![big, c / big];
    }
    let re = -b / two;
    let im = (-disc).sqrt() / two;
    if im <= T::root_imag_tol() * T::one().max(re.abs()) {
        vec![re]
    } else {
        Vec::new()
    }
}

/// A positive root of `8m^3 + 8p m^2 + (2p^2 - 8r) m - q^2` for `q != 0`.
///
/// The cubic is `-q^2 < 0` at zero and positive beyond its Cauchy bound, so a
/// bracketed Newton iteration always converges.
fn resolvent_root<T: Real>(p: T, q: T, r: T) -> T {
    let c2 = p;
    let c1 = p * p / T::lit(4.0) - r;
    let c0 = -q * q / T::lit(8.0);
    let f = |m: T| ((m + c2) * m + c1) * m + c0;
    let df = |m: T| (T::lit(3.0) * m + T::lit(2.0) * c2) * m + c1;

    let mut lo = T::zero();
    let mut hi = T::one() + c2.abs().max(c1.abs()).max(c0.abs());
    let mut m = hi;
    for _ in 0..200 {
        let fm = f(m);
        if fm == T::zero() {
            return m;
        }
        if fm < T::zero() {
            lo = m;
        } else {
            hi = m;
        }
        let d = df(m);
        let newton = m - fm / d;
        m = if d != T::zero() && newton > lo && newton < hi {
            newton
        } else {
            (lo + hi) / T::lit(2.0)
        };
        if hi - lo <= T::epsilon() * hi {
            break;
        }
    }
    m.max(T::min_positive_value())
}

fn polish<T: Real>(coeffs: [T; 4], mut t: T) -> T {
    let mut val = eval_quartic(coeffs, t);
    for _ in 0..8 {
        if val == T::zero() {
            break;
        }
        let d = eval_derivative(coeffs, t);
        if d == T::zero() {
            break;
        }
        let cand = t - val / d;
        let cand_val = eval_quartic(coeffs, cand);
        if !(cand_val.abs() < val.abs()) {
            break;
        }
        t = cand;
        val = cand_val;
    }
    t
}

fn dedup_roots<T: Real>(coeffs: [T; 4], sorted: Vec<T>) -> Vec<T> {
    let mut out: Vec<T> = Vec::with_capacity(sorted.len());
    for t in sorted {
        if let Some(&last) = out.last() {
            let close = (t - last).abs() <= T::lit(1e-9) * T::one().max(t.abs());
            let mid = (t + last) / T::lit(2.0);
            let flat = eval_quartic(coeffs, mid).abs()
                <= T::lit(64.0) * T::epsilon() * eval_magnitude(coeffs, mid);
            if close || flat {
                // keep whichever has the smaller residual
                if eval_quartic(coeffs, t).abs() < eval_quartic(coeffs, last).abs() {
                    *out.last_mut().unwrap() = t;
                }
                continue;
            }
        }
        out.push(t);
    }
    out
}
