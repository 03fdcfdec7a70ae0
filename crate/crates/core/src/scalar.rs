//! Generic floating-point scalar used throughout the crate.

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar the spectral machinery is generic over: f32 or f64.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + std::fmt::Debug
    + std::fmt::Display
    + std::fmt::LowerExp
    + Send
    + Sync
    + 'static
{
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Shorthand for pulling an f64 literal into the generic scalar type.
#[inline]
pub(crate) fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

/// Convert an integer wavenumber to the scalar type.
#[inline]
pub(crate) fn from_int<T: Scalar>(k: i64) -> T {
    T::from_i64(k).expect("wavenumber representable in scalar type")
}
