//! Floating-point scalar abstraction so the whole engine can run in `f32`
//! or `f64`. All tolerances are per-type: the defaults quoted elsewhere in
//! the docs are the `f64` values.

use std::fmt::{Debug, Display};
use std::iter::{Product, Sum};

use num_complex::Complex;
use num_traits::{Float, FloatConst, NumAssign, NumCast};

/// Real scalar underlying all complex amplitudes and payoffs.
pub trait Scalar:
    Float
    + FloatConst
    + NumAssign
    + NumCast
    + Sum
    + Product
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Tolerance for normalization, trace, and probability-sum checks.
    fn norm_tol() -> Self;

    /// Tolerance for unitarity, channel-completeness, and PSD checks.
    fn op_tol() -> Self;

    fn from_f64(v: f64) -> Self;

    fn from_usize(v: usize) -> Self;
}

impl Scalar for f64 {
    #[inline]
    fn norm_tol() -> Self {
        1e-12
    }

    #[inline]
    fn op_tol() -> Self {
        1e-10
    }

    #[inline]
    fn from_f64(v: f64) -> Self {
        v
    }

    #[inline]
    fn from_usize(v: usize) -> Self {
        v as f64
    }
}

impl Scalar for f32 {
    #[inline]
    fn norm_tol() -> Self {
        1e-5
    }

    #[inline]
    fn op_tol() -> Self {
        1e-4
    }

    #[inline]
    fn from_f64(v: f64) -> Self {
        v as f32
    }

    #[inline]
    fn from_usize(v: usize) -> Self {
        v as f32
    }
}

/// Complex literal helper; the arguments are exact in both `f32` and `f64`
/// for the small integer/dyadic constants used in gate definitions.
#[inline]
pub fn cx<T: Scalar>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::from_f64(re), T::from_f64(im))
}

/// Lossy view of a scalar for diagnostics.
#[inline]
pub fn as_f64<T: Scalar>(v: T) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}
