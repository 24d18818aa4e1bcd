//! Scalar abstraction over the floating-point type used for instance data.
//!
//! All numeric kernels (row activities, simplex pivoting, branch-and-bound
//! bounds) are generic over [`Scalar`] so the same code runs in `f32` or
//! `f64`. The shipped tooling and the type aliases at the crate root use
//! `f64`; `f32` is available for experiments but its epsilon is close to the
//! default tolerances, so expect looser certificates there.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`, for tolerances and literals.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 literal")
    }

    /// Lossy conversion to `f64`, for reporting and metrics.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
