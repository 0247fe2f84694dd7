//! Scalar abstraction shared by the linear-algebra core.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar usable by the generic matrix code.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Tolerance for structural checks: Hermiticity, unit trace and
    /// positivity of density matrices, normalization of state vectors.
    fn structural_tol() -> Self;

    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn structural_tol() -> f64 {
        1e-10
    }
}

impl Real for f32 {
    fn structural_tol() -> f32 {
        2e-5
    }
}
