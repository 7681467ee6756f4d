//! Floating point scalar abstraction shared by every solver in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rustfft::FftNum;

/// Real scalar type the solvers are generic over: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + FftNum + Default + Sum + Display + Debug
{
    /// Imaginary-part magnitude below which a polynomial root is accepted as real.
    fn root_imag_tol() -> Self;

    /// Converts an `f64` literal. Every value used this way is representable.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn root_imag_tol() -> Self {
        1e-8
    }
}

impl Real for f32 {
    fn root_imag_tol() -> Self {
        1e-3
    }
}

/// Both parts finite.
#[inline]
pub fn is_finite_complex<T: Real>(z: &num_complex::Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
