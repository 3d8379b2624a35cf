//! First lower-order data for the density expansion over K = Q(sqrt(-Delta)).
//!
//! For the base field Q the residue and Euler constant of the Dedekind zeta
//! of K come from the factorization zeta_K = zeta * L(s, chi):
//!
//!   rho_K   = L(1, chi) = 2 pi h / (w sqrt(Delta))
//!   gamma_K = d/ds[(s-1) zeta_K(s)] at 1 = gamma_EM * L(1, chi) + L'(1, chi)
//!
//! (expand (s-1) zeta(s) = 1 + gamma_EM (s-1) + ... against the Taylor
//! series of L at 1). The arithmetic lower-order coefficient is
//!
//!   tau = 4 gamma_EM - 2 gamma_K / rho_K - 4 sum_{q inert} log q / (q^2 - 1),
//!
//! and beta_0 is checked along two routes: the closed form
//! 2 gamma_EM - gamma_K/rho_K - [d/ds log zeta_ram]_1 (the ramified factor
//! kept explicit so the comparison is an identity, not an O(1/log Delta)
//! statement) against numerical differentiation of
//! log U(s) = log((s-1) zeta(s)) - log L(s, chi) - log zeta_ram(s) at s = 1.

use crate::dirichlet::{
    chi_table, l_chi, l_one_series, l_prime_one_series, zeta_times_s_minus_one, EULER_GAMMA,
};
use crate::quadfield::{ramified_primes, roots_of_unity, ClassGroup};
use crate::real::Real;
use crate::sieve::primes_up_to;
use crate::testfn::TestFunction;
use crate::{Error, Result};
use num_complex::Complex;

/// Agreement demanded between the character-series and class-number-formula
/// routes for L(1, chi); a violation signals a class-group or character bug.
pub const L_ROUTE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct LowerOrderReport<T> {
    pub delta: u64,
    pub h: u64,
    pub h_odd: bool,
    /// residue of zeta at 1 for the base field Q
    pub rho_k0: T,
    /// Euler constant of the base field Q
    pub gamma_k0: T,
    pub l1_chi: T,
    pub l1_chi_prime: T,
    /// certified evaluation error carried by l1_chi_prime
    pub l1_chi_prime_err: T,
    pub rho_k: T,
    pub gamma_k: T,
    pub inert_sum: T,
    pub inert_tail: T,
    pub tau: T,
    pub l1_term: T,
    pub beta0_formula: T,
    pub beta0_numeric: T,
    pub euler_bound_lhs: T,
    pub euler_bound_rhs: T,
    pub euler_bound_holds: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct EulerBoundCheck<T> {
    pub lhs: T,
    pub rhs: T,
    pub gamma_max: T,
    pub phi0: T,
    pub holds: bool,
}

/// Shared per-field data so sweep rows do not rebuild tables per operation.
pub struct FieldCtx {
    pub delta: u64,
    pub h: u64,
    pub w: u32,
    pub chi: Vec<i8>,
}

impl FieldCtx {
    pub fn build(delta: u64) -> Result<FieldCtx> {
        let cg = ClassGroup::build(delta)?;
        Ok(FieldCtx {
            delta,
            h: cg.h,
            w: roots_of_unity(delta),
            chi: chi_table(delta),
        })
    }

    pub fn h_odd(&self) -> bool {
        self.h % 2 == 1
    }
}

/// L(1, chi) by the character series, cross-checked against the class
/// number formula 2 pi h / (w sqrt(Delta)) to 1e-10.
pub fn l_one<T: Real>(delta: u64) -> Result<T> {
    let ctx = FieldCtx::build(delta)?;
    l_one_ctx(&ctx)
}

pub fn l_one_ctx<T: Real>(ctx: &FieldCtx) -> Result<T> {
    let series: T = l_one_series(ctx.delta, &ctx.chi);
    let formula = T::two() * T::pi() * T::of_u64(ctx.h)
        / (T::of_u64(ctx.w as u64) * T::of_u64(ctx.delta).sqrt());
    let spread = (series - formula).abs().to_f64().unwrap_or(f64::NAN);
    if !(spread <= L_ROUTE_TOLERANCE) {
        return Err(Error::LSeriesMismatch {
            delta: ctx.delta,
            series: series.to_f64().unwrap_or(f64::NAN),
            formula: formula.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(series)
}

/// L'(1, chi) with a certified evaluation error bound.
pub fn l_prime_one<T: Real>(delta: u64) -> Result<(T, T)> {
    let ctx = FieldCtx::build(delta)?;
    Ok(l_prime_one_ctx(&ctx))
}

pub fn l_prime_one_ctx<T: Real>(ctx: &FieldCtx) -> (T, T) {
    l_prime_one_series(ctx.delta, &ctx.chi)
}

/// gamma_K = gamma_EM * L(1, chi) + L'(1, chi).
pub fn gamma_k<T: Real>(delta: u64) -> Result<T> {
    let ctx = FieldCtx::build(delta)?;
    let l1 = l_one_ctx::<T>(&ctx)?;
    let (lp, _) = l_prime_one_ctx::<T>(&ctx);
    Ok(T::euler_gamma() * l1 + lp)
}

/// Inert-prime sum sum_{q <= cutoff, chi(q) = -1} log q / (q^2 - 1) and the
/// integral tail bound (log cutoff + 1) / cutoff. Cutoffs below ~100 leave
/// a tail bound too coarse for table use but are accepted.
pub fn inert_sum<T: Real>(delta: u64, cutoff: u64) -> (T, T) {
    assert!(cutoff >= 2);
    let mut total = T::zero();
    for &q in &primes_up_to(cutoff) {
        if crate::quadfield::kronecker_chi(delta, q) == -1 {
            let qt = T::of_u64(q);
            total = total + qt.ln() / (qt * qt - T::one());
        }
    }
    let c = T::of_u64(cutoff);
    (total, (c.ln() + T::one()) / c)
}

/// tau(Delta) = 4 gamma_EM - 2 gamma_K / rho_K - 4 * inert_sum, with the
/// oddness of h reported alongside (the lower-order expansion assumes it).
pub fn tau<T: Real>(delta: u64, cutoff: u64) -> Result<(T, bool)> {
    let ctx = FieldCtx::build(delta)?;
    let l1 = l_one_ctx::<T>(&ctx)?;
    let (lp, _) = l_prime_one_ctx::<T>(&ctx);
    Ok((tau_from_parts(delta, l1, lp, cutoff), ctx.h_odd()))
}

pub fn tau_from_parts<T: Real>(delta: u64, l1: T, lp: T, cutoff: u64) -> T {
    let gamma_over_rho = T::euler_gamma() + lp / l1;
    let (inert, _) = inert_sum::<T>(delta, cutoff);
    T::of(4.0) * T::euler_gamma() - T::two() * gamma_over_rho - T::of(4.0) * inert
}

/// The Delta-independent block of the lower-order term:
/// cosh_term + phihat(0) * (-2 gamma_EM - 2 log 8 pi) + 2 * sinh_integral.
pub fn l1_term<T: Real>(delta: u64, t: &TestFunction<T>, h: u64) -> Result<T> {
    let log_delta = T::of((delta as f64).ln());
    let cosh = t.cosh_term(h, log_delta)?;
    let constants = t.phihat0() * (-T::two() * T::euler_gamma() - T::two() * T::log_8pi());
    let sinh = T::two() * t.sinh_integral()?;
    Ok(cosh + constants + sinh)
}

/// [d/ds log zeta_ram]_{s=1} = -sum_{p | Delta} log p / (p - 1).
fn zeta_ram_log_derivative<T: Real>(delta: u64) -> T {
    let mut acc = T::zero();
    for p in ramified_primes(delta) {
        let pt = T::of_u64(p);
        acc = acc - pt.ln() / (pt - T::one());
    }
    acc
}

/// Closed-form route: beta_0 = 2 gamma_EM - gamma_K / rho_K - [log zeta_ram]'(1).
pub fn beta0_formula<T: Real>(delta: u64) -> Result<T> {
    let ctx = FieldCtx::build(delta)?;
    let l1 = l_one_ctx::<T>(&ctx)?;
    let (lp, _) = l_prime_one_ctx::<T>(&ctx);
    Ok(beta0_formula_from_parts(delta, l1, lp))
}

pub fn beta0_formula_from_parts<T: Real>(delta: u64, l1: T, lp: T) -> T {
    let gamma_over_rho = T::euler_gamma() + lp / l1;
    T::two() * T::euler_gamma() - gamma_over_rho - zeta_ram_log_derivative(delta)
}

/// log U(s) with U(s) = (s-1) zeta(s) / (L(s, chi) zeta_ram(s)).
fn log_u<T: Real>(s: T, delta: u64, chi: &[i8]) -> T {
    let zs = zeta_times_s_minus_one(s);
    let ls = l_chi(s, delta, chi);
    let mut log_ram = T::zero();
    for p in ramified_primes(delta) {
        // log of the local factor (1 - p^-s)^-1
        log_ram = log_ram - (T::one() - T::of_u64(p).powf(-s)).ln();
    }
    zs.ln() - ls.ln() - log_ram
}

/// Numerical route: Richardson-extrapolated central difference of log U at
/// s = 1. Errors out when step-halving moves the estimate by more than the
/// differentiation stability tolerance.
pub fn beta0_numeric<T: Real>(delta: u64, step: f64) -> Result<T> {
    let ctx = FieldCtx::build(delta)?;
    beta0_numeric_ctx(&ctx, step)
}

pub fn beta0_numeric_ctx<T: Real>(ctx: &FieldCtx, step: f64) -> Result<T> {
    assert!(
        (1e-6..=1e-2).contains(&step),
        "step must lie in [1e-6, 1e-2]"
    );
    let delta = ctx.delta;
    let central = |eps: T| -> T {
        let plus = log_u(T::one() + eps, delta, &ctx.chi);
        let minus = log_u(T::one() - eps, delta, &ctx.chi);
        (plus - minus) / (T::two() * eps)
    };
    let richardson = |eps: T| -> T {
        let d1 = central(eps);
        let d2 = central(eps * T::half());
        (T::of(4.0) * d2 - d1) / T::of(3.0)
    };
    let eps = T::of(step);
    let r1 = richardson(eps);
    let r2 = richardson(eps * T::half());
    let spread = (r1 - r2).abs().to_f64().unwrap_or(f64::NAN);
    if !(spread <= 1e-6) {
        return Err(Error::DifferentiationUnstable {
            step,
            spread,
        });
    }
    Ok(r2)
}

/// |gamma_K| against the bound rho_K (1 + n 2^n max(1, Phi_0^n)) with n = 2:
/// the embedding matrix of the integral basis {1, omega} is inverted and
/// gamma = max |entry| feeds Phi_0 = 32 gamma (unit rank 0 kills the
/// exponential factor).
pub fn euler_bound_check<T: Real>(delta: u64) -> Result<EulerBoundCheck<T>> {
    let ctx = FieldCtx::build(delta)?;
    let l1 = l_one_ctx::<T>(&ctx)?;
    let (lp, _) = l_prime_one_ctx::<T>(&ctx);
    Ok(euler_bound_from_parts(delta, l1, lp))
}

pub fn euler_bound_from_parts<T: Real>(delta: u64, l1: T, lp: T) -> EulerBoundCheck<T> {
    let gamma_k = T::euler_gamma() * l1 + lp;
    let sqrt_delta = T::of_u64(delta).sqrt();
    // omega = sqrt(-Delta)/2 for Delta = 0 mod 4, (1 + sqrt(-Delta))/2 else
    let omega = if delta % 4 == 0 {
        Complex::new(T::zero(), sqrt_delta * T::half())
    } else {
        Complex::new(T::half(), sqrt_delta * T::half())
    };
    let b = [[Complex::new(T::one(), T::zero()), omega], [
        Complex::new(T::one(), T::zero()),
        omega.conj(),
    ]];
    let det = b[0][0] * b[1][1] - b[0][1] * b[1][0];
    let inv = [
        [b[1][1] / det, -b[0][1] / det],
        [-b[1][0] / det, b[0][0] / det],
    ];
    // inverse sanity: B * B^-1 = I
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = Complex::new(T::zero(), T::zero());
            for k in 0..2 {
                acc = acc + b[i][k] * inv[k][j];
            }
            let expect = if i == j { T::one() } else { T::zero() };
            debug_assert!((acc - Complex::new(expect, T::zero())).norm() < T::of(1e-9));
        }
    }
    let mut gamma_max = T::zero();
    for row in &inv {
        for e in row {
            gamma_max = gamma_max.max(e.norm());
        }
    }
    // n = 2, unit rank r = 0: Phi_0 = 2^(n-1) n^(2n) gamma^(n-1) = 32 gamma
    let phi0 = T::of(32.0) * gamma_max;
    let rhs = l1 * (T::one() + T::of(8.0) * phi0.powi(2).max(T::one()));
    let lhs = gamma_k.abs();
    EulerBoundCheck {
        lhs,
        rhs,
        gamma_max,
        phi0,
        holds: lhs <= rhs,
    }
}

/// lhs = (total_D - (phihat(0) - phi(0)/2)) * logDelta against
/// rhs = phihat(0) tau + L1-block; their gap decays like 1/logDelta.
pub fn residual_decomposition<T: Real>(
    delta: u64,
    t: &TestFunction<T>,
    cutoff: u64,
) -> Result<(T, T)> {
    let bd = crate::explicit_formula::density(delta, t)?;
    let ctx = FieldCtx::build(delta)?;
    let l1 = l_one_ctx::<T>(&ctx)?;
    let (lp, _) = l_prime_one_ctx::<T>(&ctx);
    let tau = tau_from_parts(delta, l1, lp, cutoff);
    let log_delta = T::of((delta as f64).ln());
    let lhs = bd.residual_vs_usp * log_delta;
    let rhs = t.phihat0() * tau + l1_term(delta, t, ctx.h)?;
    Ok((lhs, rhs))
}

/// Everything the tau table wants for one field.
pub fn report<T: Real>(
    delta: u64,
    t: &TestFunction<T>,
    cutoff: u64,
    beta0_step: f64,
) -> Result<LowerOrderReport<T>> {
    let ctx = FieldCtx::build(delta)?;
    let l1 = l_one_ctx::<T>(&ctx)?;
    let (lp, lp_err) = l_prime_one_ctx::<T>(&ctx);
    let gamma_k = T::euler_gamma() * l1 + lp;
    let (inert, inert_tail) = inert_sum::<T>(delta, cutoff);
    let tau = tau_from_parts(delta, l1, lp, cutoff);
    let l1t = l1_term(delta, t, ctx.h)?;
    let b0_formula = beta0_formula_from_parts(delta, l1, lp);
    let b0_numeric = beta0_numeric_ctx(&ctx, beta0_step)?;
    let eb = euler_bound_from_parts(delta, l1, lp);
    Ok(LowerOrderReport {
        delta,
        h: ctx.h,
        h_odd: ctx.h_odd(),
        rho_k0: T::one(),
        gamma_k0: T::of(EULER_GAMMA),
        l1_chi: l1,
        l1_chi_prime: lp,
        l1_chi_prime_err: lp_err,
        rho_k: l1,
        gamma_k,
        inert_sum: inert,
        inert_tail,
        tau,
        l1_term: l1t,
        beta0_formula: b0_formula,
        beta0_numeric: b0_numeric,
        euler_bound_lhs: eb.lhs,
        euler_bound_rhs: eb.rhs,
        euler_bound_holds: eb.holds,
    })
}
