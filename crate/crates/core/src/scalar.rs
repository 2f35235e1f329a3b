//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real floating-point type the library is generic over.
///
/// The associated constants carry the precision-dependent tolerances so
/// that `f32` runs do not chase `f64` accuracy.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Sum + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Hermiticity, trace and unit-norm checks.
    const CHECK_TOL: f64;
    /// Smallest eigenvalue still accepted as positive semidefinite.
    const PSD_TOL: f64;
    /// Interval width at which radius bisection stops.
    const BISECTION_WIDTH: f64;
    /// Barrier duality gap below which a feasibility question is settled.
    const GAP_TOL: f64;
    /// Residual accepted for an LHS certificate.
    const CERT_TOL: f64;
    /// Probability below which a conditional state is treated as absent.
    const DEGENERATE_PROB: f64;

    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }
}

impl Real for f64 {
    const CHECK_TOL: f64 = 1e-10;
    const PSD_TOL: f64 = 1e-9;
    const BISECTION_WIDTH: f64 = 1e-9;
    const GAP_TOL: f64 = 1e-13;
    const CERT_TOL: f64 = 1e-9;
    const DEGENERATE_PROB: f64 = 1e-12;
}

impl Real for f32 {
    const CHECK_TOL: f64 = 1e-5;
    const PSD_TOL: f64 = 1e-5;
    const BISECTION_WIDTH: f64 = 1e-5;
    const GAP_TOL: f64 = 1e-6;
    const CERT_TOL: f64 = 1e-4;
    const DEGENERATE_PROB: f64 = 1e-6;
}
