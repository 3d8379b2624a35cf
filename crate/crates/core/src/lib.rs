//! Numerical laboratory for the one-level density of low-lying zeros in
//! families of ideal-class-character L-functions.
//!
//! The concrete family is the imaginary quadratic fields K = Q(sqrt(-Delta))
//! with -Delta a fundamental discriminant, averaged over the characters of
//! the ideal class group. The crate provides:
//!
//! * [`testfn`]: even test functions with compactly supported transform and
//!   the archimedean integrals of the explicit formula;
//! * [`quadfield`]: exact class-group arithmetic via reduced binary
//!   quadratic forms and Gauss composition, plus prime-splitting data;
//! * [`explicit_formula`]: the averaged explicit-formula expansion of the
//!   one-level density, term by term, with exact support truncation;
//! * [`lower_order`]: Dedekind residues and Euler constants, the inert-prime
//!   sum, the arithmetic lower-order coefficient tau, and the dual-route
//!   beta_0 cross-check;
//! * [`cm_quartic`]: structural checks for quartic CM fields over real
//!   quadratic bases of narrow class number one (unit bookkeeping, embedding
//!   matrices and their closed-form inverse, the norm-form inequality).
//!
//! The analytic layer is generic over the scalar type through [`Real`];
//! concrete `f64` aliases are exported at the crate root.

pub mod arith;
pub mod cm_quartic;
pub mod dirichlet;
pub mod explicit_formula;
pub mod lower_order;
pub mod quad;
pub mod quadfield;
pub mod real;
pub mod sieve;
pub mod testfn;

pub use real::Real;

/// f64 instantiations, the defaults used by the CLI.
pub type TestFunction64 = testfn::TestFunction<f64>;
pub type DensityBreakdown64 = explicit_formula::DensityBreakdown<f64>;
pub type LowerOrderReport64 = lower_order::LowerOrderReport<f64>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("sigma must lie in (0, 1): got {0}")]
    SigmaOutOfRange(f64),
    #[error("quadrature did not converge: error estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    QuadratureNoConverge { estimate: f64, tolerance: f64 },
    #[error("{0} is not (the absolute value of) a fundamental discriminant")]
    NotFundamental(u64),
    #[error("forms have different discriminants: {0} vs {1}")]
    DiscriminantMismatch(i128, i128),
    #[error("the two L(1) routes disagree: series {series:e} vs class-number formula {formula:e} (delta = {delta})")]
    LSeriesMismatch {
        delta: u64,
        series: f64,
        formula: f64,
    },
    #[error("certified tail bound {bound:e} exceeds the requested precision {requested:e}")]
    TailTooLarge { bound: f64, requested: f64 },
    #[error("numerical differentiation unstable at step {step:e}: successive estimates differ by {spread:e}")]
    DifferentiationUnstable { step: f64, spread: f64 },
    #[error("invalid test-function knots: {0}")]
    InvalidKnots(String),
    #[error("unsupported real quadratic base m = {0} (shipped bases: 2, 5)")]
    UnsupportedBase(u64),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
