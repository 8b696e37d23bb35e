use std::fmt::{Debug, Display};

use num_traits::{FromPrimitive, Num, Signed};

/// Scalars the slope calculus can run over: exact rationals or floats.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + PartialOrd + Num + Signed + FromPrimitive + Send + Sync
{
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer fits the scalar type")
    }

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    fn powu(&self, e: u32) -> Self {
        num_traits::pow(self.clone(), e as usize)
    }
}

impl<T> Scalar for T where
    T: Clone + Debug + Display + PartialEq + PartialOrd + Num + Signed + FromPrimitive + Send + Sync
{
}
