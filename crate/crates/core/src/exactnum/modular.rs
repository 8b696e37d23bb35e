//! Word-size prime fields with Montgomery multiplication, prime search and
//! Chinese remaindering. Backs the multi-modular Verlinde engine.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::arith::factorize;

/// Arithmetic modulo an odd prime `p < 2^62`, values kept in Montgomery form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MontgomeryField {
    p: u64,
    /// `-p^{-1} mod 2^64`
    p_neg_inv: u64,
    /// `2^128 mod p`
    r2: u64,
}

impl MontgomeryField {
    pub fn new(p: u64) -> Self {
        assert!(p % 2 == 1 && p < 1 << 62, "modulus must be odd and below 2^62");
        // Newton iteration for p^{-1} mod 2^64
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        MontgomeryField {
            p,
            p_neg_inv: inv.wrapping_neg(),
            r2,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.p_neg_inv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn to_mont(&self, a: u64) -> u64 {
        self.mul(a % self.p, self.r2)
    }

    pub fn from_mont(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    pub fn one(&self) -> u64 {
        self.to_mont(1)
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = self.one();
        let mut sq = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, sq);
            }
            sq = self.mul(sq, sq);
            e >>= 1;
        }
        acc
    }

    /// Inverse by Fermat; `a` must be nonzero.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a != 0);
        self.pow(a, self.p - 2)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The `count` largest primes `p < 2^62` with `p ≡ 1 (mod n)`, descending.
pub fn primes_one_mod(n: u64, count: usize) -> Vec<u64> {
    let limit = (1u64 << 62) - 1;
    // p = 1 + j·lcm(2, n) keeps p odd
    let step = num_integer::lcm(2, n);
    let mut p = 1 + (limit - 1) / step * step;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        if is_prime_u64(p) {
            out.push(p);
        }
        p -= step;
    }
    out
}

/// A primitive `n`-th root of unity modulo the prime `p`, plain representation.
pub fn primitive_root_of_unity(p: u64, n: u64) -> u64 {
    assert_eq!((p - 1) % n, 0, "{n} does not divide {p} - 1");
    let primes: Vec<u64> = factorize(n).into_iter().map(|(q, _)| q).collect();
    for a in 2..p {
        let z = pow_mod(a, (p - 1) / n, p);
        if primes.iter().all(|&q| pow_mod(z, n / q, p) != 1) {
            return z;
        }
    }
    unreachable!("no primitive root of unity of order {n} modulo {p}")
}

/// The unique `x` in `[0, ∏ p_i)` with `x ≡ r_i (mod p_i)`.
pub fn crt(residues: &[u64], primes: &[u64]) -> BigUint {
    let mut x = BigUint::zero();
    let mut m = BigUint::one();
    for (&r, &p) in residues.iter().zip(primes) {
        // x + m·t ≡ r (mod p)
        let x_mod = (&x % p).iter_u64_digits().next().unwrap_or(0);
        let m_mod = (&m % p).iter_u64_digits().next().unwrap_or(0);
        let diff = (r + p - x_mod % p) % p;
        let t = mul_mod(diff, pow_mod(m_mod, p - 2, p), p);
        x += &m * t;
        m *= p;
    }
    x
}
