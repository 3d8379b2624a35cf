//! Integer helpers: Kronecker symbol, modular square roots, integer sqrt.

/// Kronecker symbol (a|n), defined for all integers n.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut a = a;
    let mut n = n;
    // factor out 2s from n
    let mut twos = 0u32;
    while n % 2 == 0 {
        n /= 2;
        twos += 1;
    }
    let mut k = if twos % 2 == 0 {
        1i32
    } else {
        match a.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => return 0, // a even with n even was excluded; a even here means (a|2)=0
        }
    };
    if n < 0 {
        n = -n;
        if a < 0 {
            k = -k;
        }
    }
    // Jacobi loop, n odd positive
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            match n % 8 {
                3 | 5 => k = -k,
                _ => {}
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            k = -k;
        }
        a %= n;
    }
    if n == 1 {
        k
    } else {
        0
    }
}

pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut result = 1u128;
    let m = modulus as u128;
    let mut b = (base as u128) % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    result as u64
}

/// Square root of n modulo an odd prime p (Tonelli-Shanks).
/// Returns None when n is a non-residue.
pub fn sqrt_mod(n: u64, p: u64) -> Option<u64> {
    assert!(p > 2, "sqrt_mod requires an odd prime");
    let n = n % p;
    if n == 0 {
        return Some(0);
    }
    if pow_mod(n, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(n, (p + 1) / 4, p));
    }
    // write p-1 = q * 2^s with q odd
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    // find a quadratic non-residue z
    let mut z = 2u64;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(n, q, p);
    let mut r = pow_mod(n, (q + 1) / 2, p);
    while t != 1 {
        // smallest i with t^(2^i) = 1
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = ((t2 as u128 * t2 as u128) % p as u128) as u64;
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        let b2 = ((b as u128 * b as u128) % p as u128) as u64;
        m = i;
        c = b2;
        t = ((t as u128 * b2 as u128) % p as u128) as u64;
        r = ((r as u128 * b as u128) % p as u128) as u64;
    }
    Some(r)
}

pub fn isqrt_u64(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).map_or(true, |rr| rr > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).map_or(false, |rr| rr <= n) {
        r += 1;
    }
    r
}

pub fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended gcd: returns (g, x, y) with g = x*a + y*b, g >= 0.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Extended gcd of three values: (g, u, v, w) with g = u*a + v*b + w*c.
pub fn ext_gcd3(a: i128, b: i128, c: i128) -> (i128, i128, i128, i128) {
    let (g1, x1, y1) = ext_gcd(a, b);
    let (g, x2, y2) = ext_gcd(g1, c);
    (g, x2 * x1, x2 * y1, y2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_small_table() {
        // (-4|p): +1 for p = 1 mod 4, -1 for p = 3 mod 4
        assert_eq!(kronecker(-4, 5), 1);
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(-23, 23), 0);
        assert_eq!(kronecker(-23, 2), 1); // -23 = 1 mod 8
        assert_eq!(kronecker(-20, 3), 1); // -20 = 1 mod 3, QR
        assert_eq!(kronecker(5, 2), -1); // 5 = 5 mod 8
    }

    #[test]
    fn kronecker_matches_euler_criterion() {
        for &p in &[3u64, 5, 7, 11, 13, 17, 19, 23, 101, 997] {
            for a in -30i64..30 {
                let k = kronecker(a, p as i64);
                let e = pow_mod(a.rem_euclid(p as i64) as u64, (p - 1) / 2, p);
                let expect = if e == 0 {
                    0
                } else if e == 1 {
                    1
                } else {
                    -1
                };
                assert_eq!(k, expect, "a={a} p={p}");
            }
        }
    }

    #[test]
    fn sqrt_mod_roundtrip() {
        for &p in &[3u64, 5, 13, 17, 97, 101, 65537, 1000003] {
            for n in 1..50u64 {
                if let Some(r) = sqrt_mod(n, p) {
                    assert_eq!(
                        (r as u128 * r as u128 % p as u128) as u64,
                        n % p,
                        "n={n} p={p}"
                    );
                }
            }
        }
    }

    #[test]
    fn ext_gcd3_identity() {
        let (g, u, v, w) = ext_gcd3(12, 18, 27);
        assert_eq!(g, 3);
        assert_eq!(u * 12 + v * 18 + w * 27, 3);
    }

    #[test]
    fn isqrt_edges() {
        assert_eq!(isqrt_u64(0), 0);
        assert_eq!(isqrt_u64(1), 1);
        assert_eq!(isqrt_u64(8), 2);
        assert_eq!(isqrt_u64(9), 3);
        assert_eq!(isqrt_u64(u64::MAX), 4294967295);
    }
}
