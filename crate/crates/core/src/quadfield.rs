//! Exact arithmetic for imaginary quadratic fields K = Q(sqrt(-Delta)):
//! fundamental discriminants, reduced binary quadratic forms, Gauss
//! composition, class groups, and prime-ideal data.
//!
//! The reduced positive-definite forms of discriminant -Delta model the
//! ideal class group; composition-then-reduction is the group law. All form
//! arithmetic is 128-bit: composition intermediates stay below ~Delta^2,
//! which is comfortable for Delta up to the 10^9 sweep cap.

use crate::arith::{ext_gcd3, gcd_i128, isqrt_u64, kronecker, sqrt_mod};
use crate::sieve::factorize;
use crate::{Error, Result};

/// Maximum Delta accepted by sweeps; keeps i128 composition intermediates
/// far from overflow.
pub const DELTA_CAP: u64 = 1_000_000_000;

/// Whether -delta is a fundamental discriminant (delta > 0).
///
/// Either -delta = 1 mod 4 with delta squarefree, or -delta = 0 mod 4 with
/// delta/4 squarefree and -delta/4 = 2 or 3 mod 4.
pub fn is_fundamental(delta: u64) -> bool {
    if delta < 3 {
        return false;
    }
    if delta % 4 == 3 {
        // -delta = 1 mod 4
        return crate::sieve::is_squarefree(delta);
    }
    if delta % 4 == 0 {
        let m = delta / 4;
        let residue_ok = m % 4 == 1 || m % 4 == 2; // -m = 3 or 2 mod 4
        return residue_ok && crate::sieve::is_squarefree(m);
    }
    false
}

/// Integer binary quadratic form a x^2 + b xy + c y^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

impl QuadForm {
    pub fn new(a: i128, b: i128, c: i128) -> Self {
        QuadForm { a, b, c }
    }

    pub fn discriminant(&self) -> i128 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        a > 0 && b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    /// The inverse class representative (a, -b, c).
    pub fn inverse(&self) -> QuadForm {
        QuadForm::new(self.a, -self.b, self.c)
    }

    /// Principal (identity) form of discriminant -delta.
    pub fn principal(delta: u64) -> QuadForm {
        let d = delta as i128;
        if delta % 4 == 0 {
            QuadForm::new(1, 0, d / 4)
        } else {
            QuadForm::new(1, 1, (1 + d) / 4)
        }
    }
}

/// The unique reduced form equivalent to `f` (positive definite; a > 0,
/// disc < 0). Idempotent on reduced forms.
pub fn reduce(f: &QuadForm) -> QuadForm {
    let disc = f.discriminant();
    debug_assert!(disc < 0, "reduction requires negative discriminant");
    debug_assert!(f.a > 0, "reduction requires a positive leading coefficient");
    let (mut a, mut b, mut c) = (f.a, f.b, f.c);
    loop {
        // normalize b into (-a, a]
        if b > a || b <= -a {
            let two_a = 2 * a;
            let mut r = b.rem_euclid(two_a);
            if r > a {
                r -= two_a;
            }
            b = r;
            c = (b * b - disc) / (4 * a);
        }
        if a > c {
            // swap orientation
            let t = a;
            a = c;
            c = t;
            b = -b;
            continue;
        }
        break;
    }
    if b < 0 && (b == -a || a == c) {
        b = -b;
    }
    debug_assert!(QuadForm::new(a, b, c).is_reduced());
    debug_assert_eq!(QuadForm::new(a, b, c).discriminant(), disc);
    QuadForm::new(a, b, c)
}

/// Reduced Gauss composition (Dirichlet form of the algorithm).
pub fn compose(f: &QuadForm, g: &QuadForm) -> Result<QuadForm> {
    let disc = f.discriminant();
    if disc != g.discriminant() {
        return Err(Error::DiscriminantMismatch(disc, g.discriminant()));
    }
    let f = reduce(f);
    let g = reduce(g);
    let s = (f.b + g.b) / 2;
    let (d, _u, v, w) = ext_gcd3(f.a, g.a, s);
    debug_assert!(d > 0);
    let a3 = (f.a / d) * (g.a / d);
    let half_diff = (f.b - g.b) / 2;
    let inner = v * half_diff - w * g.c;
    let b_raw = g.b + 2 * (g.a / d) * inner;
    let two_a = 2 * a3;
    let mut b3 = b_raw.rem_euclid(two_a);
    if b3 > a3 {
        b3 -= two_a;
    }
    let c3 = (b3 * b3 - disc) / (4 * a3);
    debug_assert_eq!((b3 * b3 - disc) % (4 * a3), 0);
    Ok(reduce(&QuadForm::new(a3, b3, c3)))
}

/// Repeated-squaring power of a class.
pub fn pow(f: &QuadForm, mut k: u64) -> Result<QuadForm> {
    let disc = f.discriminant();
    let delta = (-disc) as u64;
    let mut acc = QuadForm::principal(delta);
    let mut base = reduce(f);
    while k > 0 {
        if k & 1 == 1 {
            acc = compose(&acc, &base)?;
        }
        base = compose(&base, &base)?;
        k >>= 1;
    }
    Ok(acc)
}

/// The class group of discriminant -delta as the full set of reduced forms.
#[derive(Debug, Clone)]
pub struct ClassGroup {
    pub delta: u64,
    /// All reduced forms, sorted by (a, b); the principal form is first.
    pub forms: Vec<QuadForm>,
    pub h: u64,
    pub principal: QuadForm,
}

impl ClassGroup {
    /// Enumerate all reduced forms of discriminant -delta.
    pub fn build(delta: u64) -> Result<ClassGroup> {
        if !is_fundamental(delta) {
            return Err(Error::NotFundamental(delta));
        }
        if delta > DELTA_CAP {
            return Err(Error::Invalid(format!(
                "delta {delta} exceeds the sweep cap {DELTA_CAP}"
            )));
        }
        let d = delta as i128;
        let a_max = isqrt_u64(delta / 3) as i128;
        let mut forms = Vec::new();
        for a in 1..=a_max {
            // b = delta mod 2 and b^2 = -delta mod 4a
            for b in (-a + 1)..=a {
                let num = b * b + d;
                if num % (4 * a) != 0 {
                    continue;
                }
                let c = num / (4 * a);
                if c < a {
                    continue;
                }
                if b < 0 && a == c {
                    continue;
                }
                debug_assert_eq!(gcd_i128(gcd_i128(a, b), c), 1, "fundamental => primitive");
                forms.push(QuadForm::new(a, b, c));
            }
        }
        forms.sort();
        let principal = QuadForm::principal(delta);
        debug_assert_eq!(forms[0], principal);
        let h = forms.len() as u64;
        Ok(ClassGroup {
            delta,
            forms,
            h,
            principal,
        })
    }

    pub fn is_principal(&self, f: &QuadForm) -> bool {
        reduce(f) == self.principal
    }

    /// Order of a class by iterated composition; aborts past h, which is a
    /// Lagrange violation and therefore a bug.
    pub fn order_of(&self, f: &QuadForm) -> Result<u64> {
        let f = reduce(f);
        if f == self.principal {
            return Ok(1);
        }
        let mut acc = f;
        for k in 1..=self.h {
            if acc == self.principal {
                return Ok(k);
            }
            acc = compose(&acc, &f)?;
        }
        panic!("class order exceeded h = {}; composition is broken", self.h);
    }

    /// Least k >= 1 with f^k principal, searching only k <= cap.
    /// Returns None when the order exceeds cap.
    pub fn order_of_capped(&self, f: &QuadForm, cap: u64) -> Result<Option<u64>> {
        let f = reduce(f);
        let mut acc = f;
        for k in 1..=cap.min(self.h) {
            if acc == self.principal {
                return Ok(Some(k));
            }
            acc = compose(&acc, &f)?;
        }
        Ok(None)
    }

    /// Decomposition into cyclic factors: generators g_i with orders d_i
    /// such that the group is the internal direct product of the <g_i>.
    /// Intended for test-scale groups (h up to a few thousand).
    pub fn abelian_structure(&self) -> Vec<(QuadForm, u64)> {
        let mul =
            |a: &QuadForm, b: &QuadForm| compose(a, b).expect("forms share a discriminant");
        decompose_set(self.principal, &self.forms, &mul)
    }
}

/// Direct-product decomposition of a finite abelian group given its element
/// list and multiplication. A maximal-order element always generates a
/// direct factor; the quotient (realized on canonical coset representatives)
/// is decomposed recursively and its generators are lifted so their powers
/// land on the identity rather than inside the split-off factor.
fn decompose_set(
    identity: QuadForm,
    elements: &[QuadForm],
    mul: &dyn Fn(&QuadForm, &QuadForm) -> QuadForm,
) -> Vec<(QuadForm, u64)> {
    use std::collections::HashMap;
    let h = elements.len() as u64;
    if h == 1 {
        return Vec::new();
    }
    let order_of = |f: &QuadForm| -> u64 {
        let mut ord = 1u64;
        let mut acc = *f;
        while acc != identity {
            acc = mul(&acc, f);
            ord += 1;
        }
        ord
    };
    let pow_of = |f: &QuadForm, k: u64| -> QuadForm {
        let mut acc = identity;
        for _ in 0..k {
            acc = mul(&acc, f);
        }
        acc
    };
    let (g1, d1) = elements
        .iter()
        .map(|f| (*f, order_of(f)))
        .max_by_key(|&(_, d)| d)
        .unwrap();
    if d1 == h {
        return vec![(g1, d1)];
    }
    // cyclic factor <g1> and discrete logs inside it
    let mut cyclic = Vec::with_capacity(d1 as usize);
    let mut dlog: HashMap<QuadForm, u64> = HashMap::new();
    let mut acc = identity;
    for k in 0..d1 {
        cyclic.push(acc);
        dlog.insert(acc, k);
        acc = mul(&acc, &g1);
    }
    // canonical coset representatives for G/<g1>
    let mut rep: HashMap<QuadForm, QuadForm> = HashMap::new();
    let mut quotient: Vec<QuadForm> = Vec::new();
    for f in elements {
        if rep.contains_key(f) {
            continue;
        }
        let members: Vec<QuadForm> = cyclic.iter().map(|c| mul(f, c)).collect();
        let r = *members.iter().min().unwrap();
        for m in members {
            rep.insert(m, r);
        }
        quotient.push(r);
    }
    let q_identity = rep[&identity];
    let q_mul = |a: &QuadForm, b: &QuadForm| -> QuadForm { rep[&mul(a, b)] };
    let mut out = vec![(g1, d1)];
    for (y, e) in decompose_set(q_identity, &quotient, &q_mul) {
        // y^e lies in <g1>, say g1^k; the exponent of the group is d1, so
        // e | k and z = y * g1^(-k/e) has exact order e in G
        let ye = pow_of(&y, e);
        let k = *dlog
            .get(&ye)
            .expect("power of a quotient generator must fall into the split factor");
        assert_eq!(k % e, 0, "maximal-order factor must split off");
        let z = mul(&y, &pow_of(&g1, (d1 - k / e) % d1));
        debug_assert_eq!(pow_of(&z, e), identity);
        out.push((z, e));
    }
    let total: u64 = out.iter().map(|&(_, d)| d).product();
    assert_eq!(total, h, "direct-product orders must multiply to h");
    out
}

/// Degree data of K = Q(sqrt(-Delta)) over Q; the base field here is Q, so
/// N = 1, r1 = 0, r2 = 1 and the regulator is trivial.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct FieldData {
    pub delta: u64,
    pub h: u64,
    /// number of roots of unity: 6 for Delta = 3, 4 for Delta = 4, else 2
    pub w: u32,
    pub r1: u32,
    pub r2: u32,
    pub degree_base: u32,
    pub regulator: f64,
}

impl FieldData {
    pub fn new(delta: u64, h: u64) -> FieldData {
        FieldData {
            delta,
            h,
            w: roots_of_unity(delta),
            r1: 0,
            r2: 1,
            degree_base: 1,
            regulator: 1.0,
        }
    }
}

pub fn roots_of_unity(delta: u64) -> u32 {
    match delta {
        3 => 6,
        4 => 4,
        _ => 2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum SplitType {
    Split,
    Inert,
    Ramified,
}

/// A prime ideal of O_K over a rational prime p.
#[derive(Debug, Clone)]
pub struct PrimeIdealRecord {
    pub p: u64,
    /// residue degree over Q
    pub f: u32,
    pub norm: u64,
    pub split_type: SplitType,
    /// reduced form representing the ideal class (principal form for inert)
    pub ideal_class: QuadForm,
    /// order of the class in the class group
    pub d: u64,
    pub principal: bool,
}

/// chi(p) for the quadratic character of K/Q: 0 ramified, +1 split, -1 inert.
pub fn kronecker_chi(delta: u64, p: u64) -> i32 {
    kronecker(-(delta as i64), p as i64)
}

/// Form (p, b, c) of discriminant -delta with 0 < b <= 2p canonical, for a
/// prime p with chi(p) = +1; the conjugate ideal is (p, -b, c).
pub fn split_prime_form(delta: u64, p: u64) -> QuadForm {
    let d = delta as i128;
    let b: i128 = if p == 2 {
        // -delta = 1 mod 8 here, so b = 1 works
        debug_assert_eq!((-(delta as i64)).rem_euclid(8), 1);
        1
    } else if delta % 4 == 0 {
        // b even with (b/2)^2 = -delta/4 mod p; take the smaller root
        let target = ((-((delta / 4) as i128)).rem_euclid(p as i128)) as u64;
        let r = sqrt_mod(target, p).expect("chi(p) = +1 guarantees a root");
        2 * r.min(p - r) as i128
    } else {
        // b odd with b^2 = -delta mod p; the roots mod p are r and p - r,
        // of opposite parity since p is odd, so exactly one odd candidate
        // sits in (0, p) and one in (p, 2p): take the smaller
        let target = ((-(delta as i128)).rem_euclid(p as i128)) as u64;
        let r = sqrt_mod(target, p).expect("chi(p) = +1 guarantees a root");
        let c1 = if r % 2 == 1 { r } else { r + p };
        let c2 = if (p - r) % 2 == 1 { p - r } else { 2 * p - r };
        c1.min(c2) as i128
    };
    let c = (b * b + d) / (4 * p as i128);
    debug_assert_eq!((b * b + d) % (4 * p as i128), 0, "delta={delta} p={p} b={b}");
    QuadForm::new(p as i128, b, c)
}

/// Form for the ramified prime over p | delta.
pub fn ramified_prime_form(delta: u64, p: u64) -> QuadForm {
    let d = delta as i128;
    let pc = p as i128;
    let b = if p == 2 {
        if delta % 8 == 0 {
            0
        } else if delta % 4 == 0 {
            2
        } else {
            // odd delta = 3 mod 4 cannot have 2 ramified
            unreachable!("2 does not ramify for odd delta")
        }
    } else if delta % 2 == 1 {
        pc // p odd, delta odd: b = p
    } else {
        // 4 | delta and p odd divides delta/4, so 4p | delta
        0
    };
    let c = (b * b + d) / (4 * pc);
    debug_assert_eq!((b * b + d) % (4 * pc), 0);
    QuadForm::new(pc, b, c)
}

/// The prime ideals of O_K over p: two conjugate records for split p, one
/// each for inert and ramified p.
pub fn prime_ideal(cg: &ClassGroup, p: u64) -> Result<Vec<PrimeIdealRecord>> {
    let delta = cg.delta;
    match kronecker_chi(delta, p) {
        1 => {
            let form = reduce(&split_prime_form(delta, p));
            let conj = reduce(&split_prime_form(delta, p).inverse());
            let d = cg.order_of(&form)?;
            let principal = d == 1;
            Ok(vec![
                PrimeIdealRecord {
                    p,
                    f: 1,
                    norm: p,
                    split_type: SplitType::Split,
                    ideal_class: form,
                    d,
                    principal,
                },
                PrimeIdealRecord {
                    p,
                    f: 1,
                    norm: p,
                    split_type: SplitType::Split,
                    ideal_class: conj,
                    d,
                    principal,
                },
            ])
        }
        -1 => Ok(vec![PrimeIdealRecord {
            p,
            f: 2,
            norm: p * p,
            split_type: SplitType::Inert,
            ideal_class: cg.principal,
            d: 1,
            principal: true,
        }]),
        _ => {
            let form = reduce(&ramified_prime_form(delta, p));
            let d = cg.order_of(&form)?;
            debug_assert!(d <= 2, "ramified classes are 2-torsion");
            Ok(vec![PrimeIdealRecord {
                p,
                f: 1,
                norm: p,
                split_type: SplitType::Ramified,
                ideal_class: form,
                d,
                principal: d == 1,
            }])
        }
    }
}

/// (delta, h, log h / (0.5 log delta)); the ratio creeps towards 1 by
/// Brauer-Siegel.
pub fn brauer_siegel_row(cg: &ClassGroup) -> (u64, u64, f64) {
    let ratio = if cg.h == 1 {
        0.0
    } else {
        (cg.h as f64).ln() / (0.5 * (cg.delta as f64).ln())
    };
    (cg.delta, cg.h, ratio)
}

/// Rational primes dividing delta.
pub fn ramified_primes(delta: u64) -> Vec<u64> {
    factorize(delta).into_iter().map(|(p, _)| p).collect()
}
