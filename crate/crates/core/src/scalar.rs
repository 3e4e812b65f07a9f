//! Scalar abstraction for accuracies and continuous cost axes.
//!
//! Byte counts are always exact integers; everything that is a fraction
//! (accuracy, seconds, amortized cost in the frontier) is carried as a
//! generic [`Scalar`] so callers can pick `f32` or `f64`.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point type usable for accuracy and cost axes.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, used when ingesting measurement files.
    fn of(v: f64) -> Self {
        Self::from_f64(v).unwrap_or_else(Self::nan)
    }

    /// Lossy conversion of an exact byte count.
    fn of_bytes(bytes: u64) -> Self {
        Self::from_u64(bytes).unwrap_or_else(Self::infinity)
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions_round_trip_small_integers() {
        assert_eq!(<f64 as Scalar>::of_bytes(114_688), 114_688.0);
        assert_eq!(<f32 as Scalar>::of(0.375), 0.375f32);
        assert_eq!(Scalar::as_f64(0.5f32), 0.5);
    }
}
