//! Floating-point scalar abstraction.
//!
//! All grid, scheme and quadrature code is generic over [`Real`] so the same
//! kernels run in `f32` or `f64`. The reference tables in the test suite are
//! only reachable in double precision; the `f64` aliases at the crate root
//! are the intended entry point.

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + std::fmt::Display + std::fmt::Debug + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Lift an `f64` constant into `T`.
#[inline]
pub(crate) fn from_f64<T: Real>(v: f64) -> T {
    T::from_f64(v).expect("constant representable in scalar type")
}

/// Lift a `usize` count into `T`.
#[inline]
pub(crate) fn from_usize<T: Real>(v: usize) -> T {
    T::from_usize(v).expect("count representable in scalar type")
}
