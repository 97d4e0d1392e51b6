//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::str::FromStr;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar: `f32` or `f64`.
///
/// All geometry, integration and quadrature code is written against this
/// trait. Tolerances quoted in the documentation assume `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + Debug
    + Display
    + LowerExp
    + FromStr
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Every `f64` is representable (possibly
    /// rounded) in the supported types, so this never fails.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Lossy conversion for diagnostics and error payloads.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `arsinh` via `log(x + sqrt(x^2 + 1))`, using odd symmetry for negative
/// arguments to avoid cancellation.
pub fn arsinh<T: Real>(x: T) -> T {
    let ax = x.abs();
    let v = (ax + (ax * ax + T::one()).sqrt()).ln();
    if x < T::zero() {
        -v
    } else {
        v
    }
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_angle<T: Real>(a: T) -> T {
    let two_pi = T::TAU();
    let mut w = a % two_pi;
    if w < T::zero() {
        w = w + two_pi;
    }
    if w >= two_pi {
        w = w - two_pi;
    }
    w
}
