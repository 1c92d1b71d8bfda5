//! Real scalar abstraction underlying all complex matrix storage.
//!
//! Every numerical kernel in this crate is generic over the real field
//! `R`; matrices store `Complex<R>`. Concrete builds use `f32` or `f64`
//! through the aliases exported at the crate root.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Sum<Self> + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, used for tolerances and literals.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 literal")
    }

    /// Lossy conversion from `usize`, used for dimension factors.
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("dimension fits the scalar type")
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + NumAssign
        + Sum<T>
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}
