//! The averaged explicit formula for the one-level density, assembled term
//! by term for K = Q(sqrt(-Delta)) (degree N = 1 over the base, r1 = 0).
//!
//! Averaging the Weil explicit formula over the ideal class characters
//! leaves five pieces:
//!
//!   D * logDelta = cosh_term + phihat(0)(logDelta - 2 gamma - 2 log 8pi)
//!                + S1 + S2 + 2 * sinh_integral
//!
//! where S1 runs over non-principal primes with principal powers and S2
//! over principal primes. Compact support of phihat makes both sums finite:
//! only norm powers below Delta^sigma contribute, so the prime enumeration
//! is exact, never truncated. The zero side of the explicit formula is not
//! computed anywhere; the right-hand side above is the definition of the
//! density D here.

use crate::quadfield::{
    kronecker_chi, ramified_prime_form, ramified_primes, reduce, split_prime_form, ClassGroup,
};
use crate::real::Real;
use crate::sieve::primes_up_to;
use crate::testfn::TestFunction;
use crate::{Error, Result};
use rayon::prelude::*;

/// The five additive terms of the density expansion plus their total.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct DensityBreakdown<T> {
    pub delta: u64,
    pub h: u64,
    pub sigma: T,
    pub cosh_term: T,
    pub const_term: T,
    pub s1: T,
    pub s2: T,
    pub sinh_term: T,
    /// (cosh + const + s1 + s2 + sinh) / logDelta
    pub total_d: T,
    /// total_d minus the symplectic prediction phihat(0) - phi(0)/2
    pub residual_vs_usp: T,
    /// Euler-Mascheroni constant, recomputed from the limit definition as a
    /// startup self-check
    pub gamma_em: T,
}

/// One nonzero prime-power contribution, for audit trails.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct TermLogEntry<T> {
    pub p: u64,
    pub f: u32,
    pub m: u64,
    /// (p^f)^m; inside the support this is below Delta^sigma
    pub norm_power: u64,
    pub weight: T,
}

#[derive(Debug, Clone)]
pub struct TermLogs<T> {
    pub s1: Vec<TermLogEntry<T>>,
    pub s2: Vec<TermLogEntry<T>>,
}

fn prime_bound(delta: u64, sigma: f64) -> u64 {
    ((delta as f64).powf(sigma)).floor() as u64 + 1
}

/// Largest m with (p^f)^m possibly inside the support, plus one for safety;
/// phihat vanishes exactly at and beyond the edge, so overshooting is free.
fn m_bound(delta: u64, sigma: f64, log_norm: f64) -> u64 {
    (sigma * (delta as f64).ln() / log_norm).floor() as u64 + 1
}

/// S1 = -2 sum over non-principal primes p of log Np
///      * sum over m >= 2 with p^m principal of phihat(m log Np / logDelta) / Np^(m/2).
///
/// The inner sum runs over multiples of the class order d >= 2. Inert primes
/// are principal, so only residue-degree-1 primes (split pairs, one ramified
/// ideal per p | Delta) appear; both conjugates of a split pair contribute.
pub fn s1_sum<T: Real>(cg: &ClassGroup, t: &TestFunction<T>) -> T {
    let sigma = t.sigma().to_f64().expect("sigma fits in f64");
    let bound = prime_bound(cg.delta, sigma / 2.0);
    let primes = primes_up_to(bound);
    s1_sum_with_primes(cg, t, &primes)
}

pub fn s1_sum_with_primes<T: Real>(cg: &ClassGroup, t: &TestFunction<T>, primes: &[u64]) -> T {
    let delta = cg.delta;
    let sigma = t.sigma().to_f64().expect("sigma fits in f64");
    let log_delta_f = (delta as f64).ln();
    let log_delta = T::of(log_delta_f);
    let bound = prime_bound(delta, sigma / 2.0);
    let mut total = T::zero();
    for &p in primes {
        if p > bound {
            break;
        }
        let chi = kronecker_chi(delta, p);
        if chi == -1 {
            continue; // inert primes are principal
        }
        let multiplicity: u64 = if chi == 1 { 2 } else { 1 };
        let form = if chi == 1 {
            reduce(&split_prime_form(delta, p))
        } else {
            reduce(&ramified_prime_form(delta, p))
        };
        if form == cg.principal {
            continue; // principal primes belong to S2
        }
        let log_p = (p as f64).ln();
        let m_max = m_bound(delta, sigma, log_p);
        let d = match cg
            .order_of_capped(&form, m_max)
            .expect("forms share a discriminant")
        {
            Some(d) => d,
            None => continue, // smallest principal power already out of support
        };
        debug_assert!(d >= 2);
        let log_p_t = T::of(log_p);
        let mut m = d;
        let mut tail = T::zero();
        while m <= m_max {
            let arg = T::of_u64(m) * log_p_t / log_delta;
            let hat = t.phihat(arg);
            if hat != T::zero() {
                let denom = (T::of_u64(m) * log_p_t * T::half()).exp(); // p^(m/2)
                tail = tail + hat / denom;
            }
            m += d;
        }
        total = total - T::two() * T::of_u64(multiplicity) * log_p_t * tail;
    }
    total
}

/// S2 = -2 sum over principal primes of log Np
///      * sum over m >= 1 of phihat(m log Np / logDelta) / Np^(m/2).
///
/// Inert primes enter with Np = p^2; ramified and split principal primes
/// with Np = p. Split principal primes are detected by reducing the prime
/// form, never assumed absent: for large Delta the norm lower bound for
/// principal degree-1 primes empties that range on its own.
pub fn s2_sum<T: Real>(cg: &ClassGroup, t: &TestFunction<T>) -> T {
    let sigma = t.sigma().to_f64().expect("sigma fits in f64");
    let primes = primes_up_to(prime_bound(cg.delta, sigma));
    s2_sum_with_primes(cg, t, &primes)
}

pub fn s2_sum_with_primes<T: Real>(cg: &ClassGroup, t: &TestFunction<T>, primes: &[u64]) -> T {
    let delta = cg.delta;
    let sigma = t.sigma().to_f64().expect("sigma fits in f64");
    let log_delta = T::of((delta as f64).ln());
    let bound = prime_bound(delta, sigma);
    let mut total = T::zero();
    for &p in primes {
        if p > bound {
            break;
        }
        let chi = kronecker_chi(delta, p);
        let log_p = (p as f64).ln();
        match chi {
            -1 => {
                // norm p^2, always principal
                let log_norm = 2.0 * log_p;
                let m_max = m_bound(delta, sigma, log_norm);
                let log_norm_t = T::of(log_norm);
                let mut tail = T::zero();
                for m in 1..=m_max {
                    let arg = T::of_u64(m) * log_norm_t / log_delta;
                    let hat = t.phihat(arg);
                    if hat != T::zero() {
                        tail = tail + hat / (T::of_u64(m) * log_norm_t * T::half()).exp();
                    }
                }
                total = total - T::two() * log_norm_t * tail;
            }
            0 | 1 => {
                let form = if chi == 1 {
                    reduce(&split_prime_form(delta, p))
                } else {
                    reduce(&ramified_prime_form(delta, p))
                };
                if form != cg.principal {
                    continue;
                }
                let multiplicity: u64 = if chi == 1 { 2 } else { 1 };
                let m_max = m_bound(delta, sigma, log_p);
                let log_p_t = T::of(log_p);
                let mut tail = T::zero();
                for m in 1..=m_max {
                    let arg = T::of_u64(m) * log_p_t / log_delta;
                    let hat = t.phihat(arg);
                    if hat != T::zero() {
                        tail = tail + hat / (T::of_u64(m) * log_p_t * T::half()).exp();
                    }
                }
                total = total - T::two() * T::of_u64(multiplicity) * log_p_t * tail;
            }
            _ => unreachable!(),
        }
    }
    total
}

/// Count of split principal primes found below Delta^sigma; the norm lower
/// bound for principal degree-1 primes predicts zero once Delta^(1-sigma)
/// exceeds 4, and the enumeration verifies rather than assumes that.
pub fn split_principal_count(cg: &ClassGroup, sigma: f64) -> u64 {
    let delta = cg.delta;
    let primes = primes_up_to(prime_bound(delta, sigma));
    let mut count = 0;
    for &p in &primes {
        if kronecker_chi(delta, p) == 1
            && reduce(&split_prime_form(delta, p)) == cg.principal
        {
            count += 1;
        }
    }
    count
}

/// Full nonzero term list for both sums, for audits and oracle comparisons.
pub fn term_log<T: Real>(cg: &ClassGroup, t: &TestFunction<T>) -> TermLogs<T> {
    let delta = cg.delta;
    let sigma = t.sigma().to_f64().expect("sigma fits in f64");
    let log_delta = T::of((delta as f64).ln());
    let primes = primes_up_to(prime_bound(delta, sigma));
    let mut logs = TermLogs {
        s1: Vec::new(),
        s2: Vec::new(),
    };
    for &p in &primes {
        let chi = kronecker_chi(delta, p);
        let log_p = (p as f64).ln();
        let (f, log_norm, multiplicity): (u32, f64, u64) = match chi {
            -1 => (2, 2.0 * log_p, 1),
            1 => (1, log_p, 2),
            _ => (1, log_p, 1),
        };
        let principal;
        let d;
        if chi == -1 {
            principal = true;
            d = 1;
        } else {
            let form = if chi == 1 {
                reduce(&split_prime_form(delta, p))
            } else {
                reduce(&ramified_prime_form(delta, p))
            };
            if form == cg.principal {
                principal = true;
                d = 1;
            } else {
                principal = false;
                let m_max = m_bound(delta, sigma, log_norm);
                d = match cg.order_of_capped(&form, m_max).unwrap() {
                    Some(d) => d,
                    None => continue,
                };
            }
        }
        let m_max = m_bound(delta, sigma, log_norm);
        let log_norm_t = T::of(log_norm);
        let start = if principal { 1 } else { d };
        let step = if principal { 1 } else { d };
        let mut m = start;
        while m <= m_max {
            let arg = T::of_u64(m) * log_norm_t / log_delta;
            let hat = t.phihat(arg);
            if hat != T::zero() {
                let weight = -T::two()
                    * T::of_u64(multiplicity)
                    * log_norm_t
                    * hat
                    / (T::of_u64(m) * log_norm_t * T::half()).exp();
                let norm = if f == 2 { p * p } else { p };
                let entry = TermLogEntry {
                    p,
                    f,
                    m,
                    norm_power: norm.pow(m as u32),
                    weight,
                };
                if principal {
                    logs.s2.push(entry);
                } else {
                    logs.s1.push(entry);
                }
            }
            m += step;
        }
    }
    logs
}

/// Assemble the full density breakdown for one field.
pub fn density<T: Real>(delta: u64, t: &TestFunction<T>) -> Result<DensityBreakdown<T>> {
    let cg = ClassGroup::build(delta)?;
    let sigma = t.sigma().to_f64().expect("sigma fits in f64");
    let primes = primes_up_to(prime_bound(delta, sigma));
    density_with_group(&cg, t, &primes)
}

/// Density breakdown given a prebuilt class group and a prime table reaching
/// at least Delta^sigma.
pub fn density_with_group<T: Real>(
    cg: &ClassGroup,
    t: &TestFunction<T>,
    primes: &[u64],
) -> Result<DensityBreakdown<T>> {
    let delta = cg.delta;
    let sigma_f = t.sigma().to_f64().expect("sigma fits in f64");
    // the table must contain every prime below Delta^sigma; a shorter table
    // is fine only when the gap holds no prime
    let last = primes.last().copied().unwrap_or(1);
    let needed = prime_bound(delta, sigma_f) - 1;
    if last < needed {
        if let Some(missing) = (last + 1..=needed).find(|&n| crate::sieve::is_prime(n)) {
            return Err(Error::Invalid(format!(
                "prime table reaches {last} but Delta^sigma needs the prime {missing}"
            )));
        }
    }
    let gamma_recomputed = crate::dirichlet::euler_gamma_recomputed();
    debug_assert!(
        (gamma_recomputed - crate::dirichlet::EULER_GAMMA).abs() < 1e-12,
        "Euler-Mascheroni self-check failed"
    );
    let log_delta = T::of((delta as f64).ln());
    let cosh_term = t.cosh_term(cg.h, log_delta)?;
    let const_term =
        t.phihat0() * (log_delta - T::two() * T::euler_gamma() - T::two() * T::log_8pi());
    let s1 = s1_sum_with_primes(cg, t, primes);
    let s2 = s2_sum_with_primes(cg, t, primes);
    let sinh_term = T::two() * t.sinh_integral()?;
    let total_d = (cosh_term + const_term + s1 + s2 + sinh_term) / log_delta;
    Ok(DensityBreakdown {
        delta,
        h: cg.h,
        sigma: t.sigma(),
        cosh_term,
        const_term,
        s1,
        s2,
        sinh_term,
        total_d,
        residual_vs_usp: total_d - t.usp_prediction(),
        gamma_em: T::of(gamma_recomputed),
    })
}

/// Per-Delta breakdowns in deterministic (input) order; rows that fail keep
/// their error so a sweep can log and continue.
pub fn density_sweep<T: Real>(
    deltas: &[u64],
    t: &TestFunction<T>,
) -> Vec<(u64, Result<DensityBreakdown<T>>)> {
    let sigma = t.sigma().to_f64().expect("sigma fits in f64");
    let max_delta = deltas.iter().copied().max().unwrap_or(0);
    let primes = if max_delta >= 3 {
        primes_up_to(prime_bound(max_delta, sigma))
    } else {
        Vec::new()
    };
    deltas
        .par_iter()
        .map(|&delta| {
            let row = ClassGroup::build(delta)
                .and_then(|cg| density_with_group(&cg, t, &primes));
            (delta, row)
        })
        .collect()
}

/// All fundamental discriminants in [lo, hi].
pub fn fundamental_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(3)..=hi)
        .filter(|&d| crate::quadfield::is_fundamental(d))
        .collect()
}

/// Fundamental discriminants with odd class number in [lo, hi]: exactly one
/// ramified prime (Delta = 4, 8, or a prime = 3 mod 4), verified on the
/// class group itself.
pub fn odd_class_number_in(lo: u64, hi: u64) -> Vec<u64> {
    fundamental_in(lo, hi)
        .into_par_iter()
        .filter(|&delta| {
            let candidate = delta == 4 || delta == 8 || (delta % 4 == 3 && ramified_primes(delta).len() == 1);
            if !candidate {
                return false;
            }
            let cg = ClassGroup::build(delta).expect("fundamental");
            let odd = cg.h % 2 == 1;
            if odd {
                assert_eq!(
                    ramified_primes(delta).len(),
                    1,
                    "odd class number forces a single ramified prime"
                );
            }
            odd
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fejer(sigma: f64) -> TestFunction<f64> {
        TestFunction::fejer(sigma, 1.0).unwrap()
    }

    #[test]
    fn s1_trivial_cases() {
        // h = 1: every ideal is principal
        let cg = ClassGroup::build(3).unwrap();
        assert_eq!(s1_sum(&cg, &fejer(0.9)), 0.0);
        // support excludes every m >= 2 term: sigma log Delta < 2 log 2
        let cg15 = ClassGroup::build(15).unwrap();
        let narrow = TestFunction::fejer(0.5, 1.0).unwrap();
        assert!(15f64.powf(0.5) < 4.0);
        assert_eq!(s1_sum(&cg15, &narrow), 0.0);
    }

    #[test]
    fn s2_zero_scale() {
        let cg = ClassGroup::build(23).unwrap();
        let z = TestFunction::fejer(0.9, 0.0).unwrap();
        assert_eq!(s2_sum(&cg, &z), 0.0);
        assert_eq!(s1_sum(&cg, &z), 0.0);
    }

    #[test]
    fn s2_nonpositive_for_nonnegative_hat() {
        for &delta in &[3u64, 4, 8, 23, 24, 40, 163, 479] {
            let cg = ClassGroup::build(delta).unwrap();
            let s2 = s2_sum(&cg, &fejer(0.9));
            assert!(s2 <= 0.0, "delta={delta}: s2={s2}");
        }
    }

    #[test]
    fn split_principal_outside_support_for_large_delta() {
        // norm lower bound: principal degree-1 primes have p >= Delta/4, so
        // none lie below Delta^sigma once Delta^(1-sigma) > 4
        let half = 0.5;
        for &delta in &[263u64, 264] {
            let cg = ClassGroup::build(delta).unwrap();
            assert!((delta as f64) / 4.0 > (delta as f64).powf(half));
            assert_eq!(split_principal_count(&cg, half), 0, "delta={delta}");
        }
    }

    #[test]
    fn guard_band_does_not_change_sums() {
        // enumerating primes to 2 * Delta^sigma adds only terms with
        // phihat = 0 exactly
        let t = fejer(0.9);
        for &delta in &[23u64, 24, 40, 163] {
            let cg = ClassGroup::build(delta).unwrap();
            let bound = prime_bound(delta, 0.9);
            let primes = primes_up_to(bound);
            let wide = primes_up_to(2 * bound);
            assert_eq!(
                s1_sum_with_primes(&cg, &t, &primes),
                s1_sum_with_primes(&cg, &t, &wide)
            );
            assert_eq!(
                s2_sum_with_primes(&cg, &t, &primes),
                s2_sum_with_primes(&cg, &t, &wide)
            );
        }
    }

    #[test]
    fn breakdown_identity() {
        let t = fejer(0.9);
        for &delta in &[23u64, 24, 1003] {
            if !crate::quadfield::is_fundamental(delta) {
                continue;
            }
            let bd = density(delta, &t).unwrap();
            let log_delta = (delta as f64).ln();
            let lhs = bd.total_d * log_delta;
            let rhs = bd.cosh_term + bd.const_term + bd.s1 + bd.s2 + bd.sinh_term;
            assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
        }
    }

    #[test]
    fn density_scale_zero_is_zero() {
        let z = TestFunction::fejer(0.9, 0.0).unwrap();
        let bd = density(23, &z).unwrap();
        assert_eq!(bd.total_d, 0.0);
    }

    #[test]
    fn sweep_purity_and_order() {
        let t = fejer(0.9);
        let rows = density_sweep(&[23, 23, 24], &t);
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].0, 23);
        assert_eq!(rows[1].0, 23);
        let a = rows[0].1.as_ref().unwrap();
        let b = rows[1].1.as_ref().unwrap();
        assert_eq!(a.total_d, b.total_d);
        // empty input
        assert!(density_sweep(&[], &t).is_empty());
        // non-fundamental rows carry errors, sweep continues
        let rows = density_sweep(&[12, 23], &t);
        assert!(rows[0].1.is_err());
        assert!(rows[1].1.is_ok());
    }

    #[test]
    fn term_log_matches_sums() {
        let t = fejer(0.9);
        for &delta in &[23u64, 24, 479] {
            let cg = ClassGroup::build(delta).unwrap();
            let logs = term_log(&cg, &t);
            let s1_from_log: f64 = logs.s1.iter().map(|e| e.weight).sum();
            let s2_from_log: f64 = logs.s2.iter().map(|e| e.weight).sum();
            assert!((s1_from_log - s1_sum(&cg, &t)).abs() < 1e-12);
            assert!((s2_from_log - s2_sum(&cg, &t)).abs() < 1e-12);
            // support condition on every logged term:
            // m f log p = log(norm_power) < sigma log Delta
            let sigma_log_delta = 0.9 * (delta as f64).ln();
            for e in logs.s1.iter().chain(logs.s2.iter()) {
                assert!((e.m as f64) * (e.f as f64) * (e.p as f64).ln() < sigma_log_delta);
                assert!((e.norm_power as f64).ln() < sigma_log_delta);
            }
        }
    }

    #[test]
    fn odd_class_number_selection() {
        let odd = odd_class_number_in(3, 50);
        // 3, 4, 7, 8, 11, 19, 23, 31, 43, 47 all have odd h; 23 has h = 3
        assert!(odd.contains(&3));
        assert!(odd.contains(&4));
        assert!(odd.contains(&8));
        assert!(odd.contains(&23));
        assert!(odd.contains(&47));
        assert!(!odd.contains(&15)); // h(-15) = 2
        assert!(!odd.contains(&20)); // h(-20) = 2
        assert!(!odd.contains(&24));
    }
}
