//! Scalar abstraction for the analytic layer.
//!
//! Everything that evaluates test functions, quadrature rules, Dirichlet
//! series or explicit-formula sums is generic over a floating scalar, so the
//! same code instantiates at `f32` or `f64`. The exact layer (quadratic
//! forms, class groups, norm-form checks) works in integers and rationals
//! and does not go through this trait.

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating scalar used by the analytic layer.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + std::fmt::Debug + std::fmt::Display + Send + Sync + 'static
{
    /// Lossy conversion from `f64`; the double-precision value is the
    /// reference, narrower types round.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 must convert into a Real scalar")
    }

    fn of_u64(n: u64) -> Self {
        Self::from_u64(n).expect("u64 must convert into a Real scalar")
    }

    fn of_i64(n: i64) -> Self {
        Self::from_i64(n).expect("i64 must convert into a Real scalar")
    }

    fn pi() -> Self {
        Self::of(std::f64::consts::PI)
    }

    /// Euler-Mascheroni constant.
    fn euler_gamma() -> Self {
        Self::of(crate::dirichlet::EULER_GAMMA)
    }

    /// log(8 pi), the archimedean constant of the explicit formula.
    fn log_8pi() -> Self {
        Self::of(8.0 * std::f64::consts::PI).ln()
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn half() -> Self {
        Self::one() / Self::two()
    }
}

impl Real for f64 {}
impl Real for f32 {}
