//! The torsion group `A[h] ≅ (ℤ/h)^{2g}`, its characters, the genus-`g`
//! totient symbol and the character sums over points of fixed order.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arith::{divisors, factorize, int, rat_pow};
use crate::exactnum::CycNum;
use crate::{Error, Rational, Result};

fn order_of(h: u64, coords: &[u64]) -> u64 {
    let g = coords.iter().fold(h, |acc, &c| acc.gcd(&c));
    h / g
}

fn check_coords(h: u64, coords: &[u64]) -> Result<()> {
    if h == 0 {
        return Err(Error::invalid("modulus h must be positive"));
    }
    if coords.is_empty() || coords.len() % 2 == 1 {
        return Err(Error::invalid("need 2g coordinates with g ≥ 1"));
    }
    if let Some(c) = coords.iter().find(|&&c| c >= h) {
        return Err(Error::invalid(format!("coordinate {c} is not reduced mod {h}")));
    }
    Ok(())
}

/// A point of `(ℤ/h)^{2g}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorsionPoint {
    h: u64,
    coords: Vec<u64>,
}

impl TorsionPoint {
    pub fn new(h: u64, coords: Vec<u64>) -> Result<Self> {
        check_coords(h, &coords)?;
        Ok(TorsionPoint { h, coords })
    }

    pub fn modulus(&self) -> u64 {
        self.h
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn genus(&self) -> u32 {
        (self.coords.len() / 2) as u32
    }

    pub fn order(&self) -> u64 {
        order_of(self.h, &self.coords)
    }
}

/// A character `α ↦ ζ_h^{⟨ξ, α⟩}` of `(ℤ/h)^{2g}`, labelled by its coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharacterLabel {
    h: u64,
    coords: Vec<u64>,
}

impl CharacterLabel {
    pub fn new(h: u64, coords: Vec<u64>) -> Result<Self> {
        check_coords(h, &coords)?;
        Ok(CharacterLabel { h, coords })
    }

    pub fn trivial(h: u64, g: u32) -> Self {
        CharacterLabel {
            h,
            coords: vec![0; 2 * g as usize],
        }
    }

    pub fn modulus(&self) -> u64 {
        self.h
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn genus(&self) -> u32 {
        (self.coords.len() / 2) as u32
    }

    pub fn order(&self) -> u64 {
        order_of(self.h, &self.coords)
    }

    /// `⟨ξ, α⟩ mod h`.
    pub fn pairing(&self, alpha: &[u64]) -> u64 {
        let h = self.h as u128;
        let s: u128 = self
            .coords
            .iter()
            .zip(alpha)
            .map(|(&x, &a)| x as u128 * a as u128 % h)
            .sum();
        (s % h) as u64
    }
}

/// Calls `f` on every point of `(ℤ/h)^{dim}` in lexicographic order.
pub fn for_each_point(h: u64, dim: usize, mut f: impl FnMut(&[u64])) {
    let mut p = vec![0u64; dim];
    loop {
        f(&p);
        let mut i = dim;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            p[i] += 1;
            if p[i] < h {
                break;
            }
            p[i] = 0;
        }
    }
}

/// The first `count` characters of exact order `ω` in lexicographic order.
pub fn characters_of_order(h: u64, g: u32, omega: u64, count: usize) -> Result<Vec<CharacterLabel>> {
    if h == 0 || g == 0 {
        return Err(Error::invalid("need h ≥ 1 and g ≥ 1"));
    }
    if h % omega != 0 {
        return Err(Error::invalid(format!("order {omega} does not divide {h}")));
    }
    // characters of order dividing ω are the multiples of h/ω
    let step = h / omega;
    let mut out = Vec::new();
    for_each_point(omega, 2 * g as usize, |p| {
        if out.len() < count && order_of(omega, p) == omega {
            out.push(CharacterLabel {
                h,
                coords: p.iter().map(|&c| c * step).collect(),
            });
        }
    });
    Ok(out)
}

/// Arguments of the totient symbol `{λ/h}_g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymbolQuery {
    pub lambda: u64,
    pub h: u64,
    pub g: u32,
}

/// `{λ/h}_g`: 1 for `h = 1`; otherwise, writing `h = ∏ p_i^{a_i}`, zero unless
/// `∏ p_i^{a_i - 1}` divides `λ`, and `∏ (ε_i - p_i^{-2g})` with `ε_i = 1`
/// exactly when `p_i^{a_i}` divides `λ`.
pub fn totient_symbol(q: &SymbolQuery) -> Result<Rational> {
    if q.h == 0 {
        return Err(Error::invalid("h must be positive"));
    }
    let factors = factorize(q.h);
    let radical_part: u64 = factors.iter().map(|&(p, a)| p.pow(a - 1)).product();
    if q.lambda % radical_part != 0 {
        return Ok(Rational::zero());
    }
    let mut acc = Rational::one();
    for (p, a) in factors {
        let eps = if q.lambda % p.pow(a) == 0 {
            Rational::one()
        } else {
            Rational::zero()
        };
        acc *= eps - rat_pow(&int(p), -2 * q.g as i64);
    }
    Ok(acc)
}

/// `n(δ) = δ^{2g} ∏_{p | δ} (1 - p^{-2g})`, the number of points of exact
/// order `δ` in `(ℤ/h)^{2g}`.
pub fn count_order(h: u64, delta: u64, g: u32) -> Result<BigInt> {
    if delta == 0 || h % delta != 0 {
        return Err(Error::invalid(format!("{delta} does not divide {h}")));
    }
    let mut acc = int(BigInt::from(delta).pow(2 * g));
    for (p, _) in factorize(delta) {
        acc *= Rational::one() - rat_pow(&int(p), -2 * g as i64);
    }
    debug_assert!(acc.is_integer());
    Ok(acc.to_integer())
}

/// `Σ_{δ | m} n(δ) = m^{2g}`.
pub fn check_count_partition(m: u64, g: u32) -> Result<bool> {
    let mut total = BigInt::zero();
    for d in divisors(m) {
        total += count_order(m, d, g)?;
    }
    Ok(total == BigInt::from(m).pow(2 * g))
}

/// Brute-force count of points of exact order `δ` in `(ℤ/h)^{2g}`.
pub fn brute_count_order(h: u64, delta: u64, g: u32) -> u64 {
    let mut count = 0;
    for_each_point(h, 2 * g as usize, |p| {
        if order_of(h, p) == delta {
            count += 1;
        }
    });
    count
}

/// Closed form `(h/δ)^{2g} · {(h/ω) / (h/δ)}_g` of the character sum over
/// points of order `h/δ`, for a character of order `ω`.
pub fn character_order_sum_closed(h: u64, omega: u64, delta: u64, g: u32) -> Result<Rational> {
    if delta == 0 || h % delta != 0 || omega == 0 || h % omega != 0 {
        return Err(Error::invalid("δ and ω must divide h"));
    }
    let m = h / delta;
    let sym = totient_symbol(&SymbolQuery {
        lambda: h / omega,
        h: m,
        g,
    })?;
    Ok(int(BigInt::from(m).pow(2 * g)) * sym)
}

/// `Σ_{ord α = h/δ} ξ(α^{-1})` by enumeration of `(ℤ/h)^{2g}`.
///
/// The sum is accumulated as a histogram of exponents of `ζ_h`, evaluated in
/// `ℚ(ζ_h)` and required to be rational.
pub fn character_order_sum_brute(xi: &CharacterLabel, delta: u64) -> Result<Rational> {
    let h = xi.h;
    if delta == 0 || h % delta != 0 {
        return Err(Error::invalid(format!("{delta} does not divide {h}")));
    }
    let target = h / delta;
    let dim = xi.coords.len();
    let hist = (0..h)
        .into_par_iter()
        .map(|first| {
            let mut hist = vec![0i64; h as usize];
            let mut alpha = vec![0u64; dim];
            alpha[0] = first;
            for_each_point(h, dim - 1, |rest| {
                alpha[1..].copy_from_slice(rest);
                if order_of(h, &alpha) == target {
                    let e = xi.pairing(&alpha);
                    hist[((h - e) % h) as usize] += 1;
                }
            });
            hist
        })
        .reduce(
            || vec![0i64; h as usize],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    CycNum::from_root_histogram(h, &hist).extract_rational()
}

/// The character sum over points of order `h/δ`, by enumeration, checked
/// against [`character_order_sum_closed`].
pub fn character_order_sum(xi: &CharacterLabel, delta: u64) -> Result<Rational> {
    let brute = character_order_sum_brute(xi, delta)?;
    let closed = character_order_sum_closed(xi.h, xi.order(), delta, xi.genus())?;
    if brute != closed {
        return Err(Error::identity(
            "Σ_{ord α = h/δ} ξ(α⁻¹) = (h/δ)^{2g} {(h/ω)/(h/δ)}_g",
            format!(
                "h={}, g={}, ω={}, δ={delta}: enumeration gives {brute}, closed form {closed}",
                xi.h,
                xi.genus(),
                xi.order()
            ),
        ));
    }
    Ok(brute)
}
