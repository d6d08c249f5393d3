//! Scalar abstraction for the numeric kernels.
//!
//! Everything that computes with probabilities, entropies, losses or masks is
//! generic over [`Real`]. `f64` is the default throughout the crate; `f32`
//! works wherever the stated tolerances permit.

use num_traits::{Float, FromPrimitive};

/// Floating scalar used by all numeric code in this crate.
pub trait Real:
    Float + FromPrimitive + Default + core::fmt::Debug + core::fmt::Display + Send + Sync + 'static
{
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 converts into any Real")
    }

    fn of_usize(v: usize) -> Self {
        Self::from_usize(v).expect("usize converts into any Real")
    }

    fn f64(self) -> f64 {
        self.to_f64().expect("Real converts to f64")
    }

    /// Validation slack: 1e-12, widened for low-precision floats.
    fn unit_tolerance() -> Self {
        let eps32 = Self::epsilon() * Self::of(32.0);
        Self::of(1e-12).max(eps32)
    }
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + Default
        + core::fmt::Debug
        + core::fmt::Display
        + Send
        + Sync
        + 'static
{
}

/// Kahan-free ordered sum; summation order is part of the determinism
/// contract, so everything sums left to right.
pub fn sum<F: Real>(values: impl IntoIterator<Item = F>) -> F {
    values.into_iter().fold(F::zero(), |acc, v| acc + v)
}
