//! Scalar abstraction for the geometric core.
//!
//! All pure math in this crate (angles, vectors, poses, the eigen solver,
//! the planner arithmetic) is generic over [`Real`], so it runs unchanged
//! on `f32` and `f64`. The simulator pipeline itself instantiates
//! everything with `f64`, which is also the default type parameter of the
//! generic types at the crate root.

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + core::fmt::Debug
    + core::fmt::Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossless widening for diagnostics and serialization boundaries.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Shorthand for converting literal constants into the scalar type.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("finite literal")
    }
}

impl Real for f32 {}
impl Real for f64 {}
