//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point scalar the measures are computed in: `f32` or `f64`.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Absolute tolerance on `|Σ masses − 1|` accepted at construction.
    fn normalization_tolerance() -> Self;

    /// Converts an `f64` literal. Only used for constants that are exactly
    /// or nearly representable, so the conversion cannot fail.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    #[inline]
    fn ln_2() -> Self {
        Self::lit(std::f64::consts::LN_2)
    }

    #[inline]
    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("count representable in scalar type")
    }

    /// Lossy widening used for error payloads and reports.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    #[inline]
    fn normalization_tolerance() -> Self {
        1e-9
    }

    #[inline]
    fn ln_2() -> Self {
        std::f64::consts::LN_2
    }
}

impl Real for f32 {
    #[inline]
    fn normalization_tolerance() -> Self {
        1e-5
    }

    #[inline]
    fn ln_2() -> Self {
        std::f32::consts::LN_2
    }
}

/// `x · log₂ x` with the convention `0 · log₂ 0 = 0`.
#[inline]
pub fn xlog2x<T: Real>(x: T) -> T {
    if x == T::zero() {
        T::zero()
    } else {
        x * x.log2()
    }
}
