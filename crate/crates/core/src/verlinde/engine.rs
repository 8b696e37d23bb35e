//! Necklace folds that evaluate `Σ_S P(S)^{1-g}` in three arithmetics.
//!
//! `P(S)` is the product of `2 - ζ^d - ζ^{-d}` over unordered pairs of members
//! with difference `d`. The folds carry the partial product of a prefix in
//! their frame, so each new member costs one multiplication per earlier member.

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;

use super::necklace::{fold_necklaces, NecklaceFold};
use crate::exactnum::modular::{crt, primes_one_mod, primitive_root_of_unity, MontgomeryField};
use crate::exactnum::{CycNum, RealScalar};
use crate::{Error, Rational, Result};

/// Distance class of a difference: `min(d, n - d)`.
#[inline]
fn class(d: u32, n: u32) -> usize {
    d.min(n - d) as usize
}

/// `(∏_d c_d^{mult_d})^{1-g}` for a histogram of distance classes.
pub(crate) fn term_from_histogram(chords: &[CycNum], hist: &[u32], g: u32, n: u64) -> CycNum {
    if g == 1 {
        return CycNum::one(n);
    }
    let mut prod = CycNum::one(n);
    for (d, &mult) in hist.iter().enumerate() {
        if mult > 0 {
            let f = chords[d].pow(mult as i64).expect("chord squares are units");
            prod = &prod * &f;
        }
    }
    prod.pow(1 - g as i64)
        .expect("a product of nonzero chord squares is invertible")
}

pub(crate) fn chord_table(n: u64) -> Vec<CycNum> {
    (0..=n / 2)
        .map(|d| {
            if d == 0 {
                CycNum::zero(n)
            } else {
                CycNum::chord_square(n, d as i64)
            }
        })
        .collect()
}

/// Exact evaluation in `ℚ(ζ_n)`, grouping equal distance classes.
pub(crate) struct CyclotomicFold {
    n: u32,
    g: u32,
    chords: Vec<CycNum>,
}

impl CyclotomicFold {
    pub(crate) fn new(n: u32, g: u32) -> Self {
        CyclotomicFold {
            n,
            g,
            chords: chord_table(n as u64),
        }
    }

    pub(crate) fn run(&self, r: u32) -> CycNum {
        fold_necklaces(self, self.n as usize, r as usize)
    }
}

impl NecklaceFold for CyclotomicFold {
    type Frame = Vec<u32>;
    type Acc = CycNum;

    fn root(&self) -> Vec<u32> {
        vec![0; self.n as usize / 2 + 1]
    }

    fn empty(&self) -> CycNum {
        CycNum::zero(self.n as u64)
    }

    fn push(&self, parent: &Vec<u32>, members: &[u32], new: u32, out: &mut Vec<u32>) {
        out.clone_from(parent);
        for &m in members {
            out[class(new - m, self.n)] += 1;
        }
    }

    fn leaf(&self, hist: &Vec<u32>, _: &[u32], orbit: u64, acc: &mut CycNum) {
        let term = term_from_histogram(&self.chords, hist, self.g, self.n as u64);
        *acc = &*acc + &term.scale(&Rational::from_integer(BigInt::from(orbit)));
    }

    fn merge(&self, acc: &mut CycNum, other: CycNum) {
        *acc = &*acc + &other;
    }
}

/// Residue images of `Σ_S P(S)^{1-g}` modulo primes `p ≡ 1 (mod n)`, with
/// `ζ_n` sent to a primitive root of unity in `F_p`.
///
/// Each prime carries a running fraction `N / D` so that no inversion is
/// needed per leaf.
pub(crate) struct ModularFold {
    g: u32,
    fields: Vec<MontgomeryField>,
    /// `chords[d * P + j]` is the image of `2 - ζ^d - ζ^{-d}` modulo the j-th
    /// of the `P` primes. Prime-minor so that a push walks one row per member.
    chords: Vec<u64>,
    /// `weights[o * P + j]` is `o` in Montgomery form, for orbit sizes `o ≤ n`.
    weights: Vec<u64>,
}

impl ModularFold {
    pub(crate) fn new(n: u32, g: u32, primes: &[u64]) -> Self {
        let fields: Vec<MontgomeryField> = primes.iter().map(|&p| MontgomeryField::new(p)).collect();
        let roots: Vec<u64> = fields
            .iter()
            .map(|f| f.to_mont(primitive_root_of_unity(f.modulus(), n as u64)))
            .collect();
        let mut chords = Vec::with_capacity(n as usize * fields.len());
        for d in 0..n {
            for (f, &z) in fields.iter().zip(&roots) {
                let zd = f.pow(z, d as u64);
                let zmd = f.pow(z, ((n - d) % n) as u64);
                chords.push(f.sub(f.sub(f.to_mont(2), zd), zmd));
            }
        }
        let mut weights = Vec::with_capacity((n as usize + 1) * fields.len());
        for o in 0..=n as u64 {
            weights.extend(fields.iter().map(|f| f.to_mont(o)));
        }
        ModularFold {
            g,
            fields,
            chords,
            weights,
        }
    }

    fn width(&self) -> usize {
        self.fields.len()
    }
}

impl NecklaceFold for ModularFold {
    type Frame = Vec<u64>;
    type Acc = Vec<(u64, u64)>;

    fn root(&self) -> Vec<u64> {
        self.fields.iter().map(|f| f.one()).collect()
    }

    fn empty(&self) -> Self::Acc {
        self.fields.iter().map(|f| (0, f.one())).collect()
    }

    fn push(&self, parent: &Vec<u64>, members: &[u32], new: u32, out: &mut Vec<u64>) {
        // primes innermost: the per-prime products are independent chains
        let w = self.width();
        out.copy_from_slice(parent);
        for &m in members {
            let row = &self.chords[(new - m) as usize * w..][..w];
            for ((x, f), &c) in out.iter_mut().zip(&self.fields).zip(row) {
                *x = f.mul(*x, c);
            }
        }
    }

    fn leaf(&self, frame: &Vec<u64>, _: &[u32], orbit: u64, acc: &mut Self::Acc) {
        let w = self.width();
        let weights = &self.weights[orbit as usize * w..][..w];
        for (j, f) in self.fields.iter().enumerate() {
            let b = f.pow(frame[j], (self.g - 1) as u64);
            let (num, den) = acc[j];
            acc[j] = (f.add(f.mul(num, b), f.mul(weights[j], den)), f.mul(den, b));
        }
    }

    fn merge(&self, acc: &mut Self::Acc, other: Self::Acc) {
        for (j, f) in self.fields.iter().enumerate() {
            let (n1, d1) = acc[j];
            let (n2, d2) = other[j];
            acc[j] = (f.add(f.mul(n1, d2), f.mul(n2, d1)), f.mul(d1, d2));
        }
    }
}

/// `v_g(r, k)` by Chinese remaindering.
///
/// `v` equals `Σ_S ∏_{s∈S, t∉S} |1 - ζ^{s-t}|^{g-1}`, a sum of algebraic
/// integers that is rational, hence a non-negative integer bounded by
/// `C(n, r) · 2^{rk(g-1)}`. That bound is usually far from sharp, so a
/// floating-point pass first estimates `v`; since every summand is positive
/// the estimate is accurate to a relative `~1e-7` and, with a safety factor
/// of 4, bounds `v` from above. Enough primes are used to exceed the smaller
/// bound, a reconstruction above it is reported as an integrality failure,
/// and one that disagrees with the estimate as an internal failure.
pub(crate) fn v_modular(g: u32, r: u32, k: u32) -> Result<Rational> {
    let n = r + k;
    let estimate = v_float::<f64>(g, r, k);
    let bound_bits = match float_bound_bits(estimate) {
        Some(bits) => bits.min(bound_bits(g, r, k)),
        None => bound_bits(g, r, k),
    };
    let primes = primes_one_mod(n as u64, bound_bits.div_ceil(61) as usize);
    let fold = ModularFold::new(n, g, &primes);
    let sums = fold_necklaces(&fold, n as usize, r as usize);
    let exponent = (r as u64) * (g as u64 - 1);
    let mut residues = Vec::with_capacity(primes.len());
    for (j, f) in fold.fields.iter().enumerate() {
        let (num, den) = sums[j];
        if den == 0 {
            return Err(Error::identity(
                "P(S) is a unit away from primes dividing r+k",
                format!("vanished modulo {}", f.modulus()),
            ));
        }
        let pre = f.pow(f.to_mont(n as u64), exponent);
        residues.push(f.from_mont(f.mul(pre, f.mul(num, f.inv(den)))));
    }
    let value = crt(&residues, &primes);
    if value.bits() > bound_bits {
        return Err(Error::NotIntegral {
            what: format!("v_{g}({r},{k}) reconstructed modulo {} primes", primes.len()),
            value: Rational::from_integer(BigInt::from(value)),
        });
    }
    if estimate.is_finite() {
        let exact = value.to_f64().unwrap_or(f64::INFINITY);
        if ((exact - estimate) / estimate).abs() > 1e-6 {
            return Err(Error::identity(
                "modular and floating-point evaluations agree",
                format!("v_{g}({r},{k}): {value} vs {estimate:e}"),
            ));
        }
    }
    Ok(Rational::from_integer(BigInt::from(value)))
}

/// Floating-point fold in any [`RealScalar`].
pub(crate) struct FloatFold<T> {
    g: u32,
    chords: Vec<T>,
}

impl<T: RealScalar> FloatFold<T> {
    pub(crate) fn new(n: u32, g: u32) -> Self {
        let chords = (0..n)
            .map(|d| {
                if d == 0 {
                    T::zero()
                } else {
                    T::chord_square(d as u64, n as u64)
                }
            })
            .collect();
        FloatFold { g, chords }
    }
}

impl<T: RealScalar> NecklaceFold for FloatFold<T> {
    type Frame = T;
    type Acc = T;

    fn root(&self) -> T {
        T::one()
    }

    fn empty(&self) -> T {
        T::zero()
    }

    fn push(&self, parent: &T, members: &[u32], new: u32, out: &mut T) {
        let mut acc = parent.clone();
        for &m in members {
            acc = acc * self.chords[(new - m) as usize].clone();
        }
        *out = acc;
    }

    fn leaf(&self, frame: &T, _: &[u32], orbit: u64, acc: &mut T) {
        let term = frame.powi(1 - self.g as i32) * T::from_u64(orbit);
        *acc = acc.clone() + term;
    }

    fn merge(&self, acc: &mut T, other: T) {
        *acc = acc.clone() + other;
    }
}

pub(crate) fn v_float<T: RealScalar>(g: u32, r: u32, k: u32) -> T {
    let n = r + k;
    let fold = FloatFold::<T>::new(n, g);
    let sum = fold_necklaces(&fold, n as usize, r as usize);
    T::from_u64(n as u64).powi((r * (g - 1)) as i32) * sum
}

/// Bit length of `C(n, r) · 2^{rk(g-1)}`, an upper bound for `v_g(r, k)`.
fn bound_bits(g: u32, r: u32, k: u32) -> u64 {
    let count: BigUint = crate::arith::binomial((r + k) as u64, r as u64);
    count.bits() + (r as u64) * (k as u64) * (g as u64 - 1) + 1
}

/// Bits of `4·estimate`, when the estimate is a usable positive float.
fn float_bound_bits(estimate: f64) -> Option<u64> {
    if !(estimate.is_finite() && estimate >= 1.0) {
        return None;
    }
    Some(estimate.log2().ceil() as u64 + 3)
}

/// Number of primes above `2^61` the modular engine uses.
pub(crate) fn modular_prime_count(g: u32, r: u32, k: u32) -> usize {
    bound_bits(g, r, k).div_ceil(61) as usize
}
