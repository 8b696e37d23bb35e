//! Dimensions of spaces of generalized theta functions for the quotient
//! groups `SL_r / Z_d`, by two independent routes.
//!
//! The character-average route averages torsion traces over `A[d]`:
//!
//! ```text
//! (1/d^{2g}) · r^g/(r+k)^g · Σ_{δ|d} n(δ) · v_{δ(g-1)+1}(r/δ, k/δ)
//! ```
//!
//! The coperiodic route weights each `r`-subset by `ξ_d(S) = (gcd(δ_S, d)/d)^{2g}`:
//!
//! ```text
//! r^g (r+k)^{(r-1)(g-1)-1} Σ_{|S|=r} ξ_d(S) ∏_{s≠t∈S} |2 sin((s-t)π/(r+k))|^{1-g}
//! ```
//!
//! where `δ_S` is the largest coperiod of `S`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::arith::{as_integer, divisors, int, rat_pow};
use crate::exactnum::CycNum;
use crate::torsion::count_order;
use crate::verlinde::{all_subsets, distance_histogram, v_number, SubsetS, TermEvaluator, VerlindeQuery};
use crate::{Error, Rational, Result};

/// Parameters `(g, r, k, d)` with `r` odd and `d` dividing both `r` and `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PglQuery {
    g: u32,
    r: u32,
    k: u32,
    d: u32,
}

impl PglQuery {
    pub fn new(g: u32, r: u32, k: u32, d: u32) -> Result<Self> {
        VerlindeQuery::new(g, r, k)?;
        if r % 2 == 0 {
            return Err(Error::hypothesis(
                "r must be odd (hypothesis of the SL_r/Z_d dimension formula)",
            ));
        }
        if d == 0 || r % d != 0 || k % d != 0 {
            return Err(Error::hypothesis(
                "d must divide both r and k (hypothesis of the SL_r/Z_d dimension formula)",
            ));
        }
        Ok(PglQuery { g, r, k, d })
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

    pub fn d(&self) -> u32 {
        self.d
    }
}

/// A subset together with its largest coperiod.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoperiodResult {
    pub set: SubsetS,
    pub coperiod: u32,
}

/// Whether `S` is a union of `δ` copies of `S ∩ {1, …, n/δ}` shifted by
/// multiples of `n/δ`, i.e. invariant under the shift by `n/δ`.
pub fn is_coperiodic(s: &SubsetS, delta: u32) -> bool {
    let n = s.n();
    if delta == 0 || n % delta != 0 || s.len() as u32 % delta != 0 {
        return false;
    }
    s.shifted(n / delta) == *s
}

/// The largest `δ | gcd(r, k)` for which `S` is `δ`-coperiodic.
pub fn coperiod(s: &SubsetS, r: u32, k: u32) -> Result<CoperiodResult> {
    if s.len() as u32 != r || s.n() != r + k {
        return Err(Error::invalid("S must be an r-subset of {1, …, r+k}"));
    }
    let coperiod = divisors(r.gcd(&k) as u64)
        .into_iter()
        .rev()
        .map(|d| d as u32)
        .find(|&d| is_coperiodic(s, d))
        .unwrap_or(1);
    Ok(CoperiodResult {
        set: s.clone(),
        coperiod,
    })
}

/// `ξ_d(S) = (gcd(δ_S, d)/d)^{2g}`, checked against `d^{-2g} Σ_{δ | gcd(d, δ_S)} n(δ)`.
pub fn xi_weight(s: &SubsetS, d: u32, r: u32, k: u32, g: u32) -> Result<Rational> {
    if d == 0 || r % d != 0 || k % d != 0 {
        return Err(Error::invalid("d must divide gcd(r, k)"));
    }
    let delta_s = coperiod(s, r, k)?.coperiod;
    xi_from_coperiod(delta_s, d, g)
}

fn xi_from_coperiod(delta_s: u32, d: u32, g: u32) -> Result<Rational> {
    let direct = rat_pow(
        &Rational::new(BigInt::from(delta_s.gcd(&d)), BigInt::from(d)),
        2 * g as i64,
    );
    let mut count = BigInt::zero();
    for delta in divisors(delta_s.gcd(&d) as u64) {
        count += count_order(d as u64, delta, g)?;
    }
    let summed = int(count) * rat_pow(&int(d), -2 * g as i64);
    if direct != summed {
        return Err(Error::identity(
            "ξ_d(S) = d^{-2g} Σ_{δ | d, δ | δ_S} n(δ)",
            format!("δ_S={delta_s}, d={d}, g={g}: {direct} vs {summed}"),
        ));
    }
    Ok(direct)
}

fn ratio_pow(num: u32, den: u32, e: u32) -> Rational {
    num_traits::pow(
        Rational::new(BigInt::from(num), BigInt::from(den)),
        e as usize,
    )
}

/// The character-average route, required to be a non-negative integer.
pub fn pgl_dim_charsum(q: &PglQuery) -> Result<Rational> {
    let mut sum = Rational::zero();
    for delta in divisors(q.d as u64) {
        let delta32 = delta as u32;
        let vq = VerlindeQuery::new(
            delta32 * (q.g - 1) + 1,
            q.r / delta32,
            q.k / delta32,
        )?;
        sum += int(count_order(q.d as u64, delta, q.g)?) * v_number(&vq)?;
    }
    let value = rat_pow(&int(q.d), -2 * q.g as i64) * ratio_pow(q.r, q.r + q.k, q.g) * sum;
    match as_integer(&value) {
        Some(v) if !v.is_negative() => Ok(value),
        _ => Err(Error::NotIntegral {
            what: format!(
                "SL_r/Z_d dimension for (g, r, k, d) = ({}, {}, {}, {})",
                q.g, q.r, q.k, q.d
            ),
            value,
        }),
    }
}

/// The coperiodic route, summed exactly over all `r`-subsets in `ℚ(ζ_{r+k})`.
///
/// Subsets are grouped by their distance histogram, so every distinct summand
/// is evaluated once with the total `ξ_d` weight of its class.
pub fn pgl_dim_coperiodic(q: &PglQuery) -> Result<Rational> {
    let n = q.r + q.k;
    let mut weights: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
    for s in all_subsets(n, q.r) {
        let delta_s = coperiod(&s, q.r, q.k)?.coperiod;
        let w = xi_from_coperiod(delta_s, q.d, q.g)?;
        *weights.entry(distance_histogram(&s)).or_insert_with(Rational::zero) += w;
    }
    let eval = TermEvaluator::new(n);
    let mut total = CycNum::zero(n as u64);
    for (hist, w) in &weights {
        total = &total + &eval.histogram_term(hist, q.g).scale(w);
    }
    let exponent = (q.r as i64 - 1) * (q.g as i64 - 1) - 1;
    let pre = int(BigInt::from(q.r).pow(q.g)) * rat_pow(&int(n), exponent);
    Ok(pre * total.extract_rational()?)
}

/// Both routes and whether they agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PglComparison {
    pub charsum: Rational,
    pub coperiodic: Rational,
}

impl PglComparison {
    pub fn agree(&self) -> bool {
        self.charsum == self.coperiodic
    }
}

pub fn pgl_compare(q: &PglQuery) -> Result<PglComparison> {
    Ok(PglComparison {
        charsum: pgl_dim_charsum(q)?,
        coperiodic: pgl_dim_coperiodic(q)?,
    })
}

/// Squared form of `∏_{i<δ} |2 sin(x + iπ/δ)| = |2 sin(δx)|` for `x = (x/π)·π`,
/// compared exactly in `ℚ(ζ_N)` with `N` the least common multiple of the
/// denominator of `x/π` and `δ`.
pub fn check_sine_identity(delta: u32, x_over_pi: &Rational) -> Result<bool> {
    if delta == 0 {
        return Err(Error::invalid("δ must be positive"));
    }
    let den = x_over_pi.denom().clone();
    let den = u64::try_from(den).map_err(|_| Error::invalid("denominator too large"))?;
    let conductor = den.lcm(&(delta as u64));
    // x/π = a / conductor
    let a = x_over_pi * int(conductor);
    let a = as_integer(&a).expect("conductor clears the denominator");
    let a = i64::try_from(a).map_err(|_| Error::invalid("numerator too large"))?;
    let c = conductor as i64;
    let delta = delta as i64;
    if (delta * a).rem_euclid(c) == 0 {
        return Err(Error::DegenerateAngle(format!(
            "{delta}·x is a multiple of π for x/π = {x_over_pi}"
        )));
    }
    // 4 sin²(θ) = 2 - e^{2iθ} - e^{-2iθ}, and e^{2i(x + iπ/δ)} = ζ_N^{a + iN/δ}
    let mut lhs = CycNum::one(conductor);
    for i in 0..delta {
        lhs = &lhs * &CycNum::chord_square(conductor, a + i * c / delta);
    }
    let rhs = CycNum::chord_square(conductor, delta * a);
    Ok(lhs == rhs)
}

/// `∏_{s≠t∈S} |2 sin((s-t)π/n)| = δ^r ∏_{s̃≠t̃∈S̃} |2 sin((s̃-t̃)δπ/n)|^δ`
/// for a `δ`-coperiodic `S` with fundamental piece `S̃ = S ∩ {1, …, n/δ}`.
///
/// Ordered products of `|2 sin|` are products of chord squares over unordered
/// pairs, so both sides live in `ℚ(ζ_n)`.
pub fn check_coperiodic_product(s: &SubsetS, delta: u32) -> Result<bool> {
    if !is_coperiodic(s, delta) {
        return Err(Error::invalid(format!("S is not {delta}-coperiodic")));
    }
    let n = s.n() as u64;
    let mut lhs = CycNum::one(n);
    for (i, &a) in s.members().iter().enumerate() {
        for &b in &s.members()[i + 1..] {
            lhs = &lhs * &CycNum::chord_square(n, (b - a) as i64);
        }
    }
    let piece: Vec<u32> = s
        .members()
        .iter()
        .copied()
        .filter(|&m| m <= s.n() / delta)
        .collect();
    let mut small = CycNum::one(n);
    for (i, &a) in piece.iter().enumerate() {
        for &b in &piece[i + 1..] {
            small = &small * &CycNum::chord_square(n, (delta * (b - a)) as i64);
        }
    }
    let scale = int(BigInt::from(delta).pow(s.len() as u32));
    let rhs = small.pow(delta as i64)?.scale(&scale);
    Ok(lhs == rhs)
}

/// Convenience for callers that only need a yes/no on both routes.
pub fn routes_agree(q: &PglQuery) -> Result<bool> {
    Ok(pgl_compare(q)?.agree())
}
