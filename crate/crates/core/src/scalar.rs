use std::fmt::{Debug, Display};

use num_traits::{FromPrimitive, Num, ToPrimitive};

/// Numeric type used for impurities, thresholds, probabilities and metrics.
///
/// Implemented for every type with field arithmetic and lossless conversion
/// from counts, which includes `f32`, `f64` and `Ratio<i64>`.
pub trait Scalar:
    Num + FromPrimitive + ToPrimitive + PartialOrd + Copy + Debug + Display + Send + Sync + 'static
{
    fn from_count(n: usize) -> Self {
        Self::from_u64(n as u64).expect("count representable in scalar")
    }

    fn from_value(v: i64) -> Self {
        Self::from_i64(v).expect("feature value representable in scalar")
    }

    fn ratio(num: usize, den: usize) -> Self {
        Self::from_count(num) / Self::from_count(den)
    }

    fn half() -> Self {
        Self::one() / (Self::one() + Self::one())
    }

    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Num
        + FromPrimitive
        + ToPrimitive
        + PartialOrd
        + Copy
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}
