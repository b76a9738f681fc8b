//! Floating-point scalar abstraction used throughout the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real scalar for tensor arithmetic.
///
/// Everything in this crate is generic over `Scalar`; `f32` and `f64` are the
/// two provided implementations. Concrete aliases live at the crate root.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + FromStr
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`, used for algorithm constants.
    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 constant")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
