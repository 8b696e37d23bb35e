//! Dense polynomials: integer ones for cyclotomic moduli, rational ones for
//! the extended Euclidean algorithm. Coefficients are stored lowest degree
//! first.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use parking_lot::Mutex;

use crate::arith::divisors;
use crate::Rational;

/// Integer polynomial, lowest degree first, no trailing zeros.
pub type IntPoly = Vec<BigInt>;

/// Rational polynomial, lowest degree first, no trailing zeros.
pub type RatPoly = Vec<Rational>;

fn cache() -> &'static Mutex<HashMap<u64, Arc<IntPoly>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<IntPoly>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The `n`-th cyclotomic polynomial, obtained by dividing `x^n - 1` exactly by
/// `Φ_d` for every proper divisor `d` of `n`.
///
/// # Panics
///
/// Panics if `n == 0`.
pub fn cyclotomic_polynomial(n: u64) -> Arc<IntPoly> {
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    if let Some(p) = cache().lock().get(&n) {
        return p.clone();
    }
    let mut quotient: IntPoly = vec![BigInt::zero(); n as usize + 1];
    quotient[0] = -BigInt::one();
    quotient[n as usize] = BigInt::one();
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let phi_d = cyclotomic_polynomial(d);
        let (q, r) = int_divrem_monic(&quotient, &phi_d);
        debug_assert!(r.iter().all(Zero::is_zero), "Φ_{d} does not divide x^{n} - 1");
        quotient = q;
    }
    let p = Arc::new(quotient);
    cache().lock().insert(n, p.clone());
    p
}

/// Division with remainder by a monic integer polynomial.
pub fn int_divrem_monic(a: &IntPoly, m: &IntPoly) -> (IntPoly, IntPoly) {
    let dm = m.len() - 1;
    debug_assert!(m[dm].is_one());
    if a.len() <= dm {
        return (Vec::new(), trim_int(a.clone()));
    }
    let mut r = a.clone();
    let mut q = vec![BigInt::zero(); a.len() - dm];
    for i in (dm..a.len()).rev() {
        let c = std::mem::take(&mut r[i]);
        if c.is_zero() {
            continue;
        }
        for j in 0..dm {
            r[i - dm + j] -= &c * &m[j];
        }
        q[i - dm] = c;
    }
    r.truncate(dm);
    (trim_int(q), trim_int(r))
}

pub fn trim_int(mut p: IntPoly) -> IntPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub fn trim_rat(mut p: RatPoly) -> RatPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn rat_sub(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim_rat(out)
}

pub fn rat_mul(a: &RatPoly, b: &RatPoly) -> RatPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim_rat(out)
}

/// Division with remainder over ℚ. `b` must be nonzero.
pub fn rat_divrem(a: &RatPoly, b: &RatPoly) -> (RatPoly, RatPoly) {
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), trim_rat(r));
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    for i in (db..r.len()).rev() {
        if r[i].is_zero() {
            continue;
        }
        let c = &r[i] / &lead;
        for j in 0..=db {
            let t = &c * &b[j];
            r[i - db + j] -= t;
        }
        q[i - db] = c;
    }
    r.truncate(db);
    (trim_rat(q), trim_rat(r))
}

/// Returns `(g, s)` with `s·a ≡ g (mod m)` where `g = gcd(a, m)` is not normalized.
pub fn rat_half_gcdext(a: &RatPoly, m: &RatPoly) -> (RatPoly, RatPoly) {
    let (mut r0, mut r1) = (trim_rat(m.clone()), trim_rat(a.clone()));
    let (mut s0, mut s1): (RatPoly, RatPoly) = (Vec::new(), vec![Rational::one()]);
    while !r1.is_empty() {
        let (q, r) = rat_divrem(&r0, &r1);
        let s = rat_sub(&s0, &rat_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    (r0, s0)
}

/// Largest absolute value among the coefficients.
pub fn max_abs(p: &[Rational]) -> Rational {
    p.iter()
        .map(|c| c.abs())
        .fold(Rational::zero(), |a, b| if b > a { b } else { a })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> IntPoly {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(*cyclotomic_polynomial(2), ints(&[1, 1]));
        assert_eq!(*cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(*cyclotomic_polynomial(6), ints(&[1, -1, 1]));
        assert_eq!(*cyclotomic_polynomial(12), ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn phi_six_by_direct_division() {
        // x^6 - 1 = Φ1 Φ2 Φ3 Φ6
        let mut x6 = ints(&[-1, 0, 0, 0, 0, 0, 1]);
        for d in [1u64, 2, 3] {
            let (q, r) = int_divrem_monic(&x6, &cyclotomic_polynomial(d));
            assert!(r.is_empty());
            x6 = q;
        }
        assert_eq!(x6, ints(&[1, -1, 1]));
    }

    #[test]
    fn degrees_match_totient() {
        for n in 1..=60u64 {
            assert_eq!(
                cyclotomic_polynomial(n).len() as u64 - 1,
                crate::arith::euler_phi(n),
                "n = {n}"
            );
        }
        // first cyclotomic polynomial with a coefficient of absolute value 2
        assert!(cyclotomic_polynomial(105)
            .iter()
            .any(|c| c == &BigInt::from(-2)));
    }
}
