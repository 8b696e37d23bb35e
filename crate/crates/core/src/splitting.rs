//! Traces of torsion points on spaces of generalized theta functions and the
//! multiplicities with which the Verlinde bundle `E_{r,k}` splits, pulled back
//! along multiplication by `h` on the Jacobian.
//!
//! For `α` of exact order `δ | h`, `h` odd:
//!
//! ```text
//! Trace(α, H⁰(SU_X(hr), L^{hk})) = r^g / (r+k)^g · v_{(g-1)δ+1}(hr/δ, hk/δ)
//! ```
//!
//! and, when also `gcd(r, k) = 1`, a character `ξ` of order `ω` occurs with
//! multiplicity
//!
//! ```text
//! m_ω = Σ_{δ | h} {(h/ω) / (h/δ)}_g · v_{(h/δ)(g-1)+1}(rδ, kδ) / ((r+k)^g δ^{2g}).
//! ```

use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use parking_lot::RwLock;
use rayon::prelude::*;

use crate::arith::{as_integer, divisors, int};
use crate::exactnum::CycNum;
use crate::torsion::{count_order, for_each_point, totient_symbol, CharacterLabel, SymbolQuery};
use crate::verlinde::{v_number, verlinde_dim, VerlindeQuery};
use crate::{Error, Rational, Result};

fn require_odd(h: u64, what: &str) -> Result<()> {
    if h == 0 {
        return Err(Error::invalid("h must be positive"));
    }
    if h % 2 == 0 {
        return Err(Error::hypothesis(format!("h must be odd (hypothesis of {what})")));
    }
    Ok(())
}

fn require_divisor(d: u64, h: u64, name: &str) -> Result<()> {
    if d == 0 || h % d != 0 {
        return Err(Error::invalid(format!("{name} = {d} must divide h = {h}")));
    }
    Ok(())
}

/// Genus, rank, level and odd multiplier for the torsion trace formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TraceQuery {
    g: u32,
    r: u32,
    k: u32,
    h: u64,
}

impl TraceQuery {
    pub fn new(g: u32, r: u32, k: u32, h: u64) -> Result<Self> {
        VerlindeQuery::new(g, r, k)?;
        require_odd(h, "the torsion trace formula")?;
        Ok(TraceQuery { g, r, k, h })
    }
}

/// Parameters of the splitting theorem: `h` odd and `gcd(r, k) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SplitQuery {
    g: u32,
    r: u32,
    k: u32,
    h: u64,
}

impl SplitQuery {
    pub fn new(g: u32, r: u32, k: u32, h: u64) -> Result<Self> {
        VerlindeQuery::new(g, r, k)?;
        require_odd(h, "the splitting theorem")?;
        if k == 0 || r.gcd(&k) != 1 {
            return Err(Error::hypothesis(
                "gcd(r, k) must be 1 (hypothesis of the splitting theorem)",
            ));
        }
        Ok(SplitQuery { g, r, k, h })
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn rank(&self) -> u32 {
        self.r
    }

    pub fn level(&self) -> u32 {
        self.k
    }

    pub fn h(&self) -> u64 {
        self.h
    }

    /// Rank and level exchanged.
    pub fn swapped(&self) -> SplitQuery {
        SplitQuery {
            r: self.k,
            k: self.r,
            ..*self
        }
    }

    pub fn trace_query(&self) -> TraceQuery {
        TraceQuery {
            g: self.g,
            r: self.r,
            k: self.k,
            h: self.h,
        }
    }
}

/// Trace of a torsion point on a space of generalized theta functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceValue {
    pub value: Rational,
}

type TraceKey = (u32, u32, u32, u64, u64);

fn trace_table() -> &'static RwLock<HashMap<TraceKey, Rational>> {
    static TABLE: OnceLock<RwLock<HashMap<TraceKey, Rational>>> = OnceLock::new();
    TABLE.get_or_init(Default::default)
}

/// Drops every memoized trace.
pub fn clear_trace_table() {
    trace_table().write().clear();
}

fn ratio_pow(num: u64, den: u64, e: u32) -> Rational {
    let q = Rational::new(BigInt::from(num), BigInt::from(den));
    num_traits::pow(q, e as usize)
}

fn small_int(v: u64) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::invalid(format!("{v} is too large")))
}

/// `r^g / (r+k)^g · v_{(g-1)δ+1}(hr/δ, hk/δ)` for a point of exact order `δ`.
///
/// Memoized by `(g, r, k, h, δ)`.
pub fn trace_of_torsion(q: &TraceQuery, delta: u64) -> Result<TraceValue> {
    require_divisor(delta, q.h, "the order δ")?;
    let key = (q.g, q.r, q.k, q.h, delta);
    if let Some(v) = trace_table().read().get(&key) {
        return Ok(TraceValue { value: v.clone() });
    }
    let m = q.h / delta;
    let genus = (q.g as u64 - 1) * delta + 1;
    let vq = VerlindeQuery::new(
        small_int(genus)?,
        small_int(m * q.r as u64)?,
        small_int(m * q.k as u64)?,
    )?;
    let value = ratio_pow(q.r as u64, (q.r + q.k) as u64, q.g) * v_number(&vq)?;
    if !value.is_positive() {
        return Err(Error::identity(
            "torsion traces are positive",
            format!("{key:?} gave {value}"),
        ));
    }
    trace_table().write().insert(key, value.clone());
    Ok(TraceValue { value })
}

/// The multiplicity `m_ω` of a character of order `ω`, required to be a
/// non-negative integer.
pub fn multiplicity(q: &SplitQuery, omega: u64) -> Result<BigInt> {
    require_divisor(omega, q.h, "the order ω")?;
    let value = multiplicity_exact(q, omega)?;
    match as_integer(&value) {
        Some(m) if !m.is_negative() => Ok(m),
        _ => Err(Error::NotIntegral {
            what: format!(
                "multiplicity for (g, r, k, h, ω) = ({}, {}, {}, {}, {omega})",
                q.g, q.r, q.k, q.h
            ),
            value,
        }),
    }
}

/// The closed-form sum for `m_ω` as a rational, without the integrality check.
pub fn multiplicity_exact(q: &SplitQuery, omega: u64) -> Result<Rational> {
    let mut total = Rational::zero();
    for delta in divisors(q.h) {
        let sym = totient_symbol(&SymbolQuery {
            lambda: q.h / omega,
            h: q.h / delta,
            g: q.g,
        })?;
        if sym.is_zero() {
            continue;
        }
        let genus = (q.h / delta) * (q.g as u64 - 1) + 1;
        let vq = VerlindeQuery::new(
            small_int(genus)?,
            small_int(q.r as u64 * delta)?,
            small_int(q.k as u64 * delta)?,
        )?;
        let weight = ratio_pow(1, (q.r + q.k) as u64, q.g) * ratio_pow(1, delta, 2 * q.g);
        total += weight * sym * v_number(&vq)?;
    }
    Ok(total)
}

/// `m_ξ = 1/(r^g h^{2g}) Σ_{α ∈ (ℤ/h)^{2g}} ξ(α^{-1}) Trace(α)` by enumeration.
///
/// Points are grouped by order; within each group the values `ξ(α^{-1})` are
/// collected as a histogram of powers of `ζ_h`.
pub fn multiplicity_oracle(q: &SplitQuery, xi: &CharacterLabel) -> Result<Rational> {
    let h = q.h;
    if xi.modulus() != h || xi.genus() != q.g {
        return Err(Error::invalid("character does not match (h, g)"));
    }
    let orders = divisors(h);
    let slot = |o: u64| orders.binary_search(&o).expect("order divides h");
    let dim = 2 * q.g as usize;
    let zero = || vec![vec![0i64; h as usize]; orders.len()];
    let hist = (0..h)
        .into_par_iter()
        .map(|first| {
            let mut hist = zero();
            let mut alpha = vec![0u64; dim];
            alpha[0] = first;
            for_each_point(h, dim - 1, |rest| {
                alpha[1..].copy_from_slice(rest);
                let o = h / alpha.iter().fold(h, |acc, &c| acc.gcd(&c));
                let e = xi.pairing(&alpha);
                hist[slot(o)][((h - e) % h) as usize] += 1;
            });
            hist
        })
        .reduce(zero, |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                x.iter_mut().zip(y).for_each(|(u, v)| *u += v);
            }
            a
        });
    let tq = q.trace_query();
    let mut total = CycNum::zero(h);
    for (i, &o) in orders.iter().enumerate() {
        let trace = trace_of_torsion(&tq, o)?.value;
        total = &total + &CycNum::from_root_histogram(h, &hist[i]).scale(&trace);
    }
    let norm = int(BigInt::from(q.r).pow(q.g) * BigInt::from(h).pow(2 * q.g));
    Ok(total.extract_rational()? / norm)
}

/// `Σ_ω n(ω) · m_ω · r^g` over the orders `ω | h`.
pub fn split_rank(q: &SplitQuery) -> Result<BigInt> {
    let mut total = BigInt::zero();
    for omega in divisors(q.h) {
        total += count_order(q.h, omega, q.g)? * multiplicity(q, omega)?;
    }
    Ok(total * BigInt::from(q.r).pow(q.g))
}

/// The same rank, summing `m_{ord ξ} · r^g` over every character individually.
pub fn split_rank_pointwise(q: &SplitQuery) -> Result<BigInt> {
    let mut by_order = HashMap::new();
    for omega in divisors(q.h) {
        by_order.insert(omega, multiplicity(q, omega)?);
    }
    let mut total = BigInt::zero();
    for_each_point(q.h, 2 * q.g as usize, |xi| {
        let o = q.h / xi.iter().fold(q.h, |acc, &c| acc.gcd(&c));
        total += &by_order[&o];
    });
    Ok(total * BigInt::from(q.r).pow(q.g))
}

/// Whether the split pieces add up to `dim H⁰(SU_X(hr), L^{hk})`.
pub fn check_rank_consistency(q: &SplitQuery) -> Result<bool> {
    let dim = verlinde_dim(&VerlindeQuery::new(
        q.g,
        small_int(q.h * q.r as u64)?,
        small_int(q.h * q.k as u64)?,
    )?)?;
    Ok(split_rank(q)? == dim)
}

/// Whether `m_ω(r, k) = m_ω(k, r)` for every `ω | h`.
pub fn check_multiplicity_symmetry(q: &SplitQuery) -> Result<bool> {
    let swapped = q.swapped();
    for omega in divisors(q.h) {
        if multiplicity_exact(q, omega)? != multiplicity_exact(&swapped, omega)? {
            return Ok(false);
        }
    }
    Ok(true)
}
