//! Floating-point scalars for the non-authoritative cross-check mode.
//!
//! [`RealScalar`] is implemented for `f32`, `f64` and [`ExtFloat`], a
//! fixed-precision binary float whose mantissa width is a const parameter.

use std::cell::RefCell;
use std::fmt;
use std::ops::{Add, Div, Mul, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_traits::{Float, One, ToPrimitive, Zero};

use crate::Rational;

/// A real scalar that can evaluate the Verlinde summands in floating point.
pub trait RealScalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    /// Bits of mantissa carried by the type.
    const MANTISSA_BITS: u32;

    fn from_u64(v: u64) -> Self;

    fn from_rational(q: &Rational) -> Self;

    /// `4 sin²(π d / n)`.
    fn chord_square(d: u64, n: u64) -> Self;

    fn powi(&self, e: i32) -> Self;

    fn to_f64(&self) -> f64;
}

macro_rules! impl_native {
    ($t:ty, $bits:expr) => {
        impl RealScalar for $t {
            const MANTISSA_BITS: u32 = $bits;

            fn from_u64(v: u64) -> Self {
                v as $t
            }

            fn from_rational(q: &Rational) -> Self {
                q.to_f64().unwrap_or(f64::NAN) as $t
            }

            fn chord_square(d: u64, n: u64) -> Self {
                let s = (std::f64::consts::PI * d as f64 / n as f64).sin();
                (4.0 * s * s) as $t
            }

            fn powi(&self, e: i32) -> Self {
                Float::powi(*self, e)
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }
        }
    };
}

impl_native!(f32, 24);
impl_native!(f64, 53);

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants cache"));
}

/// Binary floating point with `BITS` bits of mantissa (rounded up to whole
/// 64-bit words by the backend), round-to-nearest-even.
#[derive(Clone)]
pub struct ExtFloat<const BITS: usize>(BigFloat);

/// The default cross-check precision.
pub type Ext128 = ExtFloat<128>;

impl<const BITS: usize> ExtFloat<BITS> {
    fn wrap(v: BigFloat) -> Self {
        ExtFloat(v)
    }

    pub fn inner(&self) -> &BigFloat {
        &self.0
    }

    fn parse_decimal(s: &str) -> BigFloat {
        CONSTS.with(|cc| BigFloat::parse(s, Radix::Dec, BITS, RM, &mut cc.borrow_mut()))
    }
}

impl<const BITS: usize> fmt::Debug for ExtFloat<BITS> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtFloat<{BITS}>({})", self.0)
    }
}

impl<const BITS: usize> fmt::Display for ExtFloat<BITS> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const BITS: usize> PartialEq for ExtFloat<BITS> {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl<const BITS: usize> PartialOrd for ExtFloat<BITS> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl<const BITS: usize> Add for ExtFloat<BITS> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::wrap(self.0.add(&rhs.0, BITS, RM))
    }
}

impl<const BITS: usize> Sub for ExtFloat<BITS> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::wrap(self.0.sub(&rhs.0, BITS, RM))
    }
}

impl<const BITS: usize> Mul for ExtFloat<BITS> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::wrap(self.0.mul(&rhs.0, BITS, RM))
    }
}

impl<const BITS: usize> Div for ExtFloat<BITS> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        Self::wrap(self.0.div(&rhs.0, BITS, RM))
    }
}

impl<const BITS: usize> Zero for ExtFloat<BITS> {
    fn zero() -> Self {
        Self::wrap(BigFloat::from_u64(0, BITS))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl<const BITS: usize> One for ExtFloat<BITS> {
    fn one() -> Self {
        Self::wrap(BigFloat::from_u64(1, BITS))
    }
}

impl<const BITS: usize> RealScalar for ExtFloat<BITS> {
    const MANTISSA_BITS: u32 = BITS as u32;

    fn from_u64(v: u64) -> Self {
        Self::wrap(BigFloat::from_u64(v, BITS))
    }

    fn from_rational(q: &Rational) -> Self {
        let num = Self::parse_decimal(&q.numer().to_string());
        let den = Self::parse_decimal(&q.denom().to_string());
        Self::wrap(num.div(&den, BITS, RM))
    }

    fn chord_square(d: u64, n: u64) -> Self {
        // compute with a guard word, then round once
        let p = BITS + 64;
        CONSTS.with(|cc| {
            let mut cc = cc.borrow_mut();
            let pi = cc.pi(p, RM);
            let angle = pi
                .mul(&BigFloat::from_u64(d, p), p, RM)
                .div(&BigFloat::from_u64(n, p), p, RM);
            let s = angle.sin(p, RM, &mut cc);
            let v = s.mul(&s, p, RM).mul(&BigFloat::from_u64(4, p), BITS, RM);
            Self::wrap(v)
        })
    }

    fn powi(&self, e: i32) -> Self {
        let base = if e < 0 {
            self.0.reciprocal(BITS, RM)
        } else {
            self.0.clone()
        };
        Self::wrap(base.powi(e.unsigned_abs() as usize, BITS, RM))
    }

    fn to_f64(&self) -> f64 {
        let s = CONSTS.with(|cc| self.0.format(Radix::Dec, RM, &mut cc.borrow_mut()));
        s.ok().and_then(|s| s.parse().ok()).unwrap_or(f64::NAN)
    }
}

/// Relative difference `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn relative_difference(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn chord_squares_agree_across_precisions() {
        for n in 2..=12u64 {
            for d in 1..n {
                let lo = <f64 as RealScalar>::chord_square(d, n);
                let hi = Ext128::chord_square(d, n).to_f64();
                assert!(relative_difference(lo, hi) < 1e-14, "d={d} n={n}");
            }
        }
        // 4 sin²(π/6) = 1 to full extended precision
        let one = Ext128::chord_square(1, 6);
        let err = (one - Ext128::one()).to_f64().abs();
        assert!(err < 1e-36, "{err}");
    }

    #[test]
    fn rationals_and_powers() {
        let third = Ext128::from_rational(&rat(1, 3));
        let back = (third.clone() * Ext128::from_u64(3) - Ext128::one()).to_f64();
        assert!(back.abs() < 1e-37);
        let nine = third.powi(-2).to_f64();
        assert!((nine - 9.0).abs() < 1e-12);
    }
}
