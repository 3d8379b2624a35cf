//! Segmented sieve of Eratosthenes and trial-division factorization.

const SEGMENT: usize = 1 << 20;

/// All primes up to and including `limit`, by segmented sieve.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let root = crate::arith::isqrt_u64(limit);
    // simple sieve for the base primes
    let mut base_composite = vec![false; (root + 1) as usize];
    let mut base = Vec::new();
    for p in 2..=root {
        if !base_composite[p as usize] {
            base.push(p);
            let mut q = p * p;
            while q <= root {
                base_composite[q as usize] = true;
                q += p;
            }
        }
    }

    let mut primes = base.clone();
    let mut lo = root + 1;
    let mut segment = vec![false; SEGMENT];
    while lo <= limit {
        let hi = (lo + SEGMENT as u64 - 1).min(limit);
        let len = (hi - lo + 1) as usize;
        segment[..len].fill(false);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let mut start = lo.div_ceil(p) * p;
            if start < p * p {
                start = p * p;
            }
            let mut q = start;
            while q <= hi {
                segment[(q - lo) as usize] = true;
                q += p;
            }
        }
        for i in 0..len {
            if !segment[i] {
                primes.push(lo + i as u64);
            }
        }
        lo = hi + 1;
    }
    primes
}

/// Prime factorization by trial division, as (prime, exponent) pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0u32;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    true
}
