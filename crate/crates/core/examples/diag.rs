use lowlying::explicit_formula::*;
use lowlying::lower_order::*;
use lowlying::testfn::TestFunction;
use lowlying::sieve::primes_up_to;
use rayon::prelude::*;
use std::time::Instant;

fn main() {
    let t = TestFunction::fejer(0.9, 1.0).unwrap();
    // criterion 4: max |S1|/loglog over >=50 fundamental at 10^6
    let start = Instant::now();
    let mut hi = 1_000_120;
    let deltas = loop {
        let v = fundamental_in(1_000_000, hi);
        if v.len() >= 50 { break v; }
        hi += 50;
    };
    let bound = ((*deltas.last().unwrap() + 1) as f64).powf(0.45) as u64 + 2;
    let primes = primes_up_to(bound);
    let ratios: Vec<f64> = deltas.par_iter().map(|&d| {
        let cg = lowlying::quadfield::ClassGroup::build(d).unwrap();
        { let s: f64 = s1_sum_with_primes(&cg, &t, &primes); s.abs() } / (d as f64).ln().ln()
    }).collect();
    let maxr = ratios.iter().cloned().fold(0.0, f64::max);
    println!("criterion4: n={} max|S1|/loglog = {:.6}  ({:.1}s)", deltas.len(), maxr, start.elapsed().as_secs_f64());

    // criterion 5: max |tau| over 200 odd-h fields
    let start = Instant::now();
    let mut panel = Vec::new();
    for k in 0..4u32 {
        let lo = 10u64.pow(3 + k);
        let mut hi = lo + 2000;
        let v = loop {
            let v = odd_class_number_in(lo, hi);
            if v.len() >= 50 { break v[..50].to_vec(); }
            hi += 2000;
        };
        panel.extend(v);
    }
    let taus: Vec<f64> = panel.par_iter().map(|&d| {
        let ctx = FieldCtx::build(d).unwrap();
        let l1: f64 = l_one_ctx(&ctx).unwrap();
        let (lp, _): (f64, f64) = l_prime_one_ctx(&ctx);
        let eb = euler_bound_from_parts(d, l1, lp);
        assert!(eb.holds, "euler bound failed at {d}");
        tau_from_parts(d, l1, lp, 100_000)
    }).collect();
    let maxt = taus.iter().map(|t| t.abs()).fold(0.0, f64::max);
    println!("criterion5: n={} max|tau| = {:.6}  ({:.1}s)", panel.len(), maxt, start.elapsed().as_secs_f64());

    // criterion 6: beta0 panel worst gap + timing
    let start = Instant::now();
    let mut p6 = Vec::new();
    for i in 0..20u32 {
        let target = (23.0f64 * (1_000_000.0f64 / 23.0).powf(i as f64 / 19.0)) as u64;
        p6.push((target..target + 200).find(|&d| lowlying::quadfield::is_fundamental(d)).unwrap());
    }
    p6.dedup();
    let worst: f64 = p6.par_iter().map(|&d| {
        let ctx = FieldCtx::build(d).unwrap();
        let l1: f64 = l_one_ctx(&ctx).unwrap();
        let (lp, _): (f64, f64) = l_prime_one_ctx(&ctx);
        let f = beta0_formula_from_parts(d, l1, lp);
        let n: f64 = beta0_numeric_ctx(&ctx, 1e-3).unwrap();
        (f - n).abs()
    }).reduce(|| 0.0, f64::max);
    println!("criterion6: n={} worst beta0 gap = {:.3e}  ({:.1}s)", p6.len(), worst, start.elapsed().as_secs_f64());
}
