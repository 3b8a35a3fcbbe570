//! Scalar type bounds for the core math.
//!
//! Everything in this crate that does floating-point work is generic over
//! [`Scalar`], so the same estimators run in `f32` or `f64`. Concrete
//! aliases live at the crate root.

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Trait alias gathering the float capabilities the core math needs.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + std::iter::Sum
    + std::fmt::Debug
    + std::fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`; panics only for types that cannot
    /// represent ordinary finite doubles.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant not representable in scalar type")
    }
}

impl<T> Scalar for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + NumAssign
        + std::iter::Sum
        + std::fmt::Debug
        + std::fmt::Display
        + Send
        + Sync
        + 'static
{
}

/// Propagation speed used throughout (m/s). The round value keeps the
/// range-bin size at exactly 75 m for a 2 MHz offset increment.
pub fn speed_of_light<T: Scalar>() -> T {
    T::of(3.0e8)
}
