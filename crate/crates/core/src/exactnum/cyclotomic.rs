//! Exact arithmetic in the cyclotomic field ℚ(ζ_n) = ℚ[x]/(Φ_n).

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use parking_lot::Mutex;

use super::poly::{cyclotomic_polynomial, max_abs, rat_half_gcdext, RatPoly};
use crate::error::{Error, Result};
use crate::Rational;

/// Per-conductor data shared by every [`CycNum`] of that conductor.
#[derive(Debug)]
pub(crate) struct CycloContext {
    degree: usize,
    modulus: Vec<BigInt>,
    /// `x^j mod Φ_n` for `0 <= j < n`, integer coordinates.
    root_powers: Vec<Vec<BigInt>>,
}

impl CycloContext {
    fn build(n: u64) -> Self {
        let modulus: Vec<BigInt> = cyclotomic_polynomial(n).to_vec();
        let degree = modulus.len() - 1;
        let mut root_powers = Vec::with_capacity(n as usize);
        let mut cur = vec![BigInt::zero(); degree];
        cur[0] = BigInt::one();
        for _ in 0..n {
            root_powers.push(cur.clone());
            // multiply by x and reduce the overflow coefficient
            let top = cur.pop().unwrap_or_else(BigInt::zero);
            cur.insert(0, BigInt::zero());
            if !top.is_zero() {
                for (c, m) in cur.iter_mut().zip(&modulus) {
                    *c -= &top * m;
                }
            }
        }
        CycloContext {
            degree,
            modulus,
            root_powers,
        }
    }

    pub(crate) fn get(n: u64) -> Arc<CycloContext> {
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CycloContext>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(c) = cache.lock().get(&n) {
            return c.clone();
        }
        let ctx = Arc::new(CycloContext::build(n));
        cache.lock().entry(n).or_insert(ctx).clone()
    }

    /// Reduces an integer coefficient vector of any length modulo Φ_n.
    fn reduce(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        let d = self.degree;
        for i in (d..v.len()).rev() {
            let c = std::mem::take(&mut v[i]);
            if c.is_zero() {
                continue;
            }
            for j in 0..d {
                v[i - d + j] -= &c * &self.modulus[j];
            }
        }
        v.resize(d, BigInt::zero());
        v
    }
}

/// An element of ℚ(ζ_n), stored as coordinates in the power basis
/// `1, ζ, …, ζ^{φ(n)-1}`.
///
/// Conductor 1 is the field ℚ itself; such values combine with any conductor.
/// Binary operators panic on a genuine conductor mismatch, the `checked_*`
/// methods return [`Error::ConductorMismatch`] instead.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNum {
    conductor: u64,
    coeffs: Vec<Rational>,
}

impl CycNum {
    fn ctx(&self) -> Arc<CycloContext> {
        CycloContext::get(self.conductor)
    }

    /// Builds a value from power-basis coordinates; the length must be φ(n).
    pub fn from_coeffs(conductor: u64, coeffs: Vec<Rational>) -> Result<Self> {
        if conductor == 0 {
            return Err(Error::invalid("conductor must be positive"));
        }
        let ctx = CycloContext::get(conductor);
        if coeffs.len() != ctx.degree {
            return Err(Error::invalid(format!(
                "conductor {conductor} needs {} coordinates, got {}",
                ctx.degree,
                coeffs.len()
            )));
        }
        Ok(CycNum { conductor, coeffs })
    }

    pub fn from_rational(conductor: u64, q: Rational) -> Self {
        let mut c = Self::zero(conductor);
        c.coeffs[0] = q;
        c
    }

    pub fn from_integer(conductor: u64, v: i64) -> Self {
        Self::from_rational(conductor, Rational::from_integer(v.into()))
    }

    pub fn zero(conductor: u64) -> Self {
        let ctx = CycloContext::get(conductor);
        CycNum {
            conductor,
            coeffs: vec![Rational::zero(); ctx.degree],
        }
    }

    pub fn one(conductor: u64) -> Self {
        Self::from_integer(conductor, 1)
    }

    /// `ζ_n^e` for any integer exponent.
    pub fn root_power(conductor: u64, e: i64) -> Self {
        let ctx = CycloContext::get(conductor);
        let j = e.rem_euclid(conductor as i64) as usize;
        CycNum {
            conductor,
            coeffs: ctx.root_powers[j]
                .iter()
                .map(|c| Rational::from_integer(c.clone()))
                .collect(),
        }
    }

    /// `Σ_e counts[e] ζ_n^e`, for an exponent histogram of length `n`.
    pub fn from_root_histogram(conductor: u64, counts: &[i64]) -> Self {
        let ctx = CycloContext::get(conductor);
        let mut acc = vec![BigInt::zero(); ctx.degree];
        for (e, &k) in counts.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let j = e % conductor as usize;
            for (a, c) in acc.iter_mut().zip(&ctx.root_powers[j]) {
                *a += c * k;
            }
        }
        CycNum {
            conductor,
            coeffs: acc.into_iter().map(Rational::from_integer).collect(),
        }
    }

    /// `2 - ζ^d - ζ^{-d}`, which embeds to `4 sin²(πd/n)`.
    pub fn chord_square(conductor: u64, d: i64) -> Self {
        let two = Self::from_integer(conductor, 2);
        &(&two - &Self::root_power(conductor, d)) - &Self::root_power(conductor, -d)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// True iff every coordinate on a positive basis power vanishes.
    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// Brings two operands to a common conductor; conductor 1 embeds anywhere.
    fn align(&self, other: &Self) -> Result<(Self, Self)> {
        match (self.conductor, other.conductor) {
            (a, b) if a == b => Ok((self.clone(), other.clone())),
            (1, b) => Ok((Self::from_rational(b, self.coeffs[0].clone()), other.clone())),
            (a, 1) => Ok((self.clone(), Self::from_rational(a, other.coeffs[0].clone()))),
            (a, b) => Err(Error::ConductorMismatch { left: a, right: b }),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.align(other)?;
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        Ok(CycNum {
            conductor: a.conductor,
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.align(other)?;
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect();
        Ok(CycNum {
            conductor: a.conductor,
            coeffs,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.align(other)?;
        if a.conductor == 1 {
            return Ok(CycNum {
                conductor: 1,
                coeffs: vec![&a.coeffs[0] * &b.coeffs[0]],
            });
        }
        // multiply integer numerators over a common denominator, then reduce
        let (an, ad) = integer_coords(&a.coeffs);
        let (bn, bd) = integer_coords(&b.coeffs);
        let mut prod = vec![BigInt::zero(); an.len() + bn.len() - 1];
        for (i, x) in an.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in bn.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        let ctx = a.ctx();
        let den = ad * bd;
        let coeffs = ctx
            .reduce(prod)
            .into_iter()
            .map(|c| Rational::new(c, den.clone()))
            .collect();
        Ok(CycNum {
            conductor: a.conductor,
            coeffs,
        })
    }

    pub fn scale(&self, q: &Rational) -> Self {
        CycNum {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Multiplicative inverse through the extended Euclidean algorithm with Φ_n.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_rational() {
            return Ok(Self::from_rational(self.conductor, self.coeffs[0].recip()));
        }
        let ctx = self.ctx();
        let modulus: RatPoly = ctx
            .modulus
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        let (g, s) = rat_half_gcdext(&self.coeffs, &modulus);
        // Φ_n is irreducible, so the gcd is a nonzero constant
        debug_assert_eq!(g.len(), 1);
        let scale = g[0].recip();
        let mut coeffs = vec![Rational::zero(); ctx.degree];
        for (c, v) in coeffs.iter_mut().zip(s) {
            *c = v * &scale;
        }
        Ok(CycNum {
            conductor: self.conductor,
            coeffs,
        })
    }

    /// Integer power; negative exponents go through [`CycNum::inv`].
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut exp = e.unsigned_abs();
        let mut acc = Self::one(self.conductor);
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &sq;
            }
            exp >>= 1;
            if exp > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Complex conjugation, `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// The automorphism `ζ ↦ ζ^u`; `u` must be a unit modulo the conductor.
    pub fn galois(&self, u: i64) -> Self {
        let n = self.conductor as i64;
        debug_assert_eq!(u.rem_euclid(n).gcd(&n), 1);
        let ctx = self.ctx();
        let mut acc = vec![Rational::zero(); ctx.degree];
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = (u * j as i64).rem_euclid(n) as usize;
            for (a, b) in acc.iter_mut().zip(&ctx.root_powers[k]) {
                *a += c * b;
            }
        }
        CycNum {
            conductor: self.conductor,
            coeffs: acc,
        }
    }

    /// Re-expresses the value in ℚ(ζ_m) for a multiple `m` of the conductor.
    pub fn embed(&self, m: u64) -> Result<Self> {
        if m % self.conductor != 0 {
            return Err(Error::invalid(format!(
                "cannot embed conductor {} into {m}",
                self.conductor
            )));
        }
        let step = (m / self.conductor) as i64;
        let mut acc = Self::zero(m);
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &Self::root_power(m, step * j as i64).scale(c);
            }
        }
        Ok(acc)
    }

    /// Image under `ζ_n ↦ e^{2πi/n}` in double precision.
    pub fn to_complex(&self) -> Complex64 {
        let n = self.conductor as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / n;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), theta)
            })
            .sum()
    }

    /// The value as a rational number, or [`Error::NotRational`].
    pub fn extract_rational(&self) -> Result<Rational> {
        if self.is_rational() {
            Ok(self.coeffs[0].clone())
        } else {
            Err(Error::NotRational {
                residual: max_abs(&self.coeffs[1..]),
            })
        }
    }
}

/// Clears denominators: returns integer coordinates and the common denominator.
fn integer_coords(c: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let den = c
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let nums = c
        .iter()
        .map(|q| q.numer() * (&den / q.denom()))
        .collect();
    (nums, den)
}

pub fn cyc_add(a: &CycNum, b: &CycNum) -> Result<CycNum> {
    a.checked_add(b)
}

pub fn cyc_mul(a: &CycNum, b: &CycNum) -> Result<CycNum> {
    a.checked_mul(b)
}

pub fn cyc_inv(a: &CycNum) -> Result<CycNum> {
    a.inv()
}

pub fn extract_rational(a: &CycNum) -> Result<Rational> {
    a.extract_rational()
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum({}, {})", self.conductor, self)
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| match j {
                0 => c.to_string(),
                1 => format!("({c})·ζ"),
                _ => format!("({c})·ζ^{j}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&CycNum> for &CycNum {
            type Output = CycNum;
            fn $method(self, rhs: &CycNum) -> CycNum {
                self.$checked(rhs).expect("cyclotomic conductor mismatch")
            }
        }
        impl $tr for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: CycNum) -> CycNum {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl std::iter::Sum for CycNum {
    fn sum<I: Iterator<Item = CycNum>>(iter: I) -> CycNum {
        iter.fold(CycNum::zero(1), |a, b| a + b)
    }
}
