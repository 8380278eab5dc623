//! Real scalar abstraction shared by every module.
//!
//! All numerics are written against [`Real`], implemented for `f32` and `f64`.
//! Thresholds are specified once as `f64` (see [`crate::Tolerances`]) and
//! converted with [`Real::lit`]; precision checks go through [`Real::tol`],
//! which never lets a threshold drop below a few ulps of the working type.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating point field used for amplitudes: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into the working type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in the working type")
    }

    /// Precision threshold: `x`, floored at 64 machine epsilons.
    #[inline]
    fn tol(x: f64) -> Self {
        Self::lit(x).max(Self::epsilon() * Self::lit(64.0))
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex amplitude over a [`Real`] field.
pub type C<T> = Complex<T>;

#[cfg(test)]
pub(crate) fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

/// `e^{i phi}`.
#[inline]
pub(crate) fn cis<T: Real>(phi: T) -> C<T> {
    Complex::new(phi.cos(), phi.sin())
}

/// Argument in `(-pi, pi]`. `atan2` returns `-pi` for `(-x, -0.0)`, which is
/// folded onto `+pi`.
#[inline]
pub fn principal_arg<T: Real>(z: C<T>) -> T {
    let a = z.im.atan2(z.re);
    if a <= -T::PI() {
        T::PI()
    } else {
        a
    }
}

pub(crate) fn is_finite_c<T: Real>(z: C<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn principal_arg_branch() {
        assert_eq!(principal_arg(c(-1.0_f64, -0.0)), std::f64::consts::PI);
        assert_eq!(principal_arg(c(-1.0_f64, 0.0)), std::f64::consts::PI);
        assert!((principal_arg(c(0.0_f64, -1.0)) + std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn tol_floor() {
        assert_eq!(f64::tol(1e-10), 1e-10);
        assert!(f32::tol(1e-10) > 1e-6);
    }
}
