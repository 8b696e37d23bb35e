//! Verlinde numbers
//!
//! ```text
//! v_g(r, k) = (r+k)^{r(g-1)} Σ_{S ⊂ {1..r+k}, |S| = r} ∏_{s≠t ∈ S} |2 sin((s-t)π/(r+k))|^{1-g}
//! ```
//!
//! and the dimensions `r^g / (r+k)^g · v_g(r, k)` of spaces of generalized
//! theta functions on `SU_X(r)` at level `k`.
//!
//! The summand only depends on `S` up to rotation, so the sum runs over
//! necklace representatives weighted by orbit size. Three exact evaluation
//! routes are available (see [`Engine`]) plus a floating-point one.

mod engine;
pub mod necklace;

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::Signed;
use parking_lot::RwLock;

use crate::arith::{as_integer, binomial};
use crate::exactnum::{CycNum, RealScalar};
use crate::{Error, Rational, Result};

pub use necklace::necklace_estimate;

/// Genus, rank and level addressing `v_g(r, k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VerlindeQuery {
    g: u32,
    r: u32,
    k: u32,
}

impl VerlindeQuery {
    /// Requires `g ≥ 1` and `r ≥ 1`.
    pub fn new(g: u32, r: u32, k: u32) -> Result<Self> {
        if g == 0 {
            return Err(Error::hypothesis("genus must be at least 1"));
        }
        if r == 0 {
            return Err(Error::hypothesis("rank must be at least 1"));
        }
        if r.checked_add(k).is_none() || r + k > 4096 {
            return Err(Error::invalid("rank + level is too large"));
        }
        Ok(VerlindeQuery { g, r, k })
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

    /// `r + k`.
    pub fn n(&self) -> u32 {
        self.r + self.k
    }

    /// Same genus with rank and level exchanged. Fails when `k = 0`.
    pub fn swapped(&self) -> Result<Self> {
        VerlindeQuery::new(self.g, self.k, self.r)
    }
}

/// An `r`-subset of `{1, …, n}`, members strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubsetS {
    n: u32,
    members: Vec<u32>,
}

impl SubsetS {
    pub fn new(n: u32, members: Vec<u32>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("ambient size must be positive"));
        }
        if members.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("members must be strictly increasing"));
        }
        if members.iter().any(|&m| m == 0 || m > n) {
            return Err(Error::invalid(format!("members must lie in 1..={n}")));
        }
        Ok(SubsetS { n, members })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The cyclic shift `S + by`, reduced into `{1, …, n}`.
    pub fn shifted(&self, by: u32) -> SubsetS {
        let mut members: Vec<u32> = self
            .members
            .iter()
            .map(|&m| (m - 1 + by) % self.n + 1)
            .collect();
        members.sort_unstable();
        SubsetS { n: self.n, members }
    }
}

/// Counts of unordered pairs of members by distance class `min(d, n - d)`.
pub fn distance_histogram(s: &SubsetS) -> Vec<u32> {
    let n = s.n;
    let mut hist = vec![0u32; n as usize / 2 + 1];
    for (i, &a) in s.members.iter().enumerate() {
        for &b in &s.members[i + 1..] {
            let d = b - a;
            hist[d.min(n - d) as usize] += 1;
        }
    }
    hist
}

/// Evaluates summands for a fixed `n`, reusing the table of chord squares.
pub struct TermEvaluator {
    n: u32,
    chords: Vec<CycNum>,
}

impl TermEvaluator {
    pub fn new(n: u32) -> Self {
        TermEvaluator {
            n,
            chords: engine::chord_table(n as u64),
        }
    }

    /// `∏_d (2 - ζ^d - ζ^{-d})^{hist[d] · (1-g)}`.
    pub fn histogram_term(&self, hist: &[u32], g: u32) -> CycNum {
        engine::term_from_histogram(&self.chords, hist, g, self.n as u64)
    }

    pub fn term(&self, s: &SubsetS, g: u32) -> CycNum {
        assert_eq!(s.n, self.n, "subset of the wrong ambient size");
        self.histogram_term(&distance_histogram(s), g)
    }
}

/// `∏_{pairs {s,t} ⊂ S} (2 - ζ_n^{s-t} - ζ_n^{t-s})^{1-g}` in `ℚ(ζ_n)`.
///
/// Equal distances are grouped, so each distinct chord is raised to its
/// multiplicity once.
pub fn subset_term(s: &SubsetS, g: u32) -> CycNum {
    TermEvaluator::new(s.n).term(s, g)
}

/// How the exact sum is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Engine {
    /// Cyclotomic arithmetic for small instances, residues otherwise.
    #[default]
    Auto,
    /// Sum over necklace representatives in `ℚ(ζ_n)`, then extract the rational.
    Cyclotomic,
    /// Sum over necklace representatives modulo word-size primes, then
    /// reconstruct the integer value by Chinese remaindering.
    Modular,
    /// Sum over every `r`-subset in `ℚ(ζ_n)` without orbit reduction.
    Subsets,
}

/// Options for one evaluation of `v_g(r, k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    pub engine: Engine,
    /// Refuse enumerations whose estimated necklace count exceeds this.
    pub max_necklaces: u128,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            engine: Engine::Auto,
            max_necklaces: necklace_budget(),
        }
    }
}

/// Default necklace budget: roughly ten minutes of single-core work for
/// the residue engine at moderate genus.
pub const DEFAULT_NECKLACE_BUDGET: u128 = 1_000_000_000;

/// Up to this conductor `Engine::Auto` uses cyclotomic arithmetic. Its cost
/// per leaf grows steeply with the conductor (13 ms per leaf at 25).
const CYCLOTOMIC_CUTOFF: u32 = 12;

static BUDGET: AtomicU64 = AtomicU64::new(DEFAULT_NECKLACE_BUDGET as u64);

/// Process-wide budget used by [`v_number`] and everything built on it.
pub fn necklace_budget() -> u128 {
    BUDGET.load(Ordering::Relaxed) as u128
}

pub fn set_necklace_budget(budget: u64) {
    BUDGET.store(budget, Ordering::Relaxed);
}

fn check_budget(q: &VerlindeQuery, budget: u128) -> Result<()> {
    let estimate = necklace_estimate(q.n() as u64, q.r as u64);
    if estimate > budget {
        return Err(Error::BudgetExceeded { estimate, budget });
    }
    Ok(())
}

fn prefactor(q: &VerlindeQuery) -> Rational {
    let n = BigInt::from(q.n());
    Rational::from_integer(num_traits::pow(n, (q.r * (q.g - 1)) as usize))
}

/// `v_g(r, k)` with explicit options, not cached.
pub fn v_number_with(q: &VerlindeQuery, opts: &EvalOptions) -> Result<Rational> {
    let n = q.n();
    let engine = match opts.engine {
        Engine::Auto if q.g == 1 => {
            // every summand is the empty power 1
            return Ok(Rational::from_integer(binomial(n as u64, q.r as u64).into()));
        }
        Engine::Auto => {
            if n <= CYCLOTOMIC_CUTOFF {
                Engine::Cyclotomic
            } else {
                Engine::Modular
            }
        }
        e => e,
    };
    check_budget(q, opts.max_necklaces)?;
    match engine {
        Engine::Cyclotomic => {
            let sum = engine::CyclotomicFold::new(n, q.g).run(q.r);
            Ok(prefactor(q) * sum.extract_rational()?)
        }
        Engine::Subsets => {
            let eval = TermEvaluator::new(n);
            let sum = all_subsets(n, q.r)
                .iter()
                .map(|s| eval.term(s, q.g))
                .fold(CycNum::zero(n as u64), |a, b| &a + &b);
            Ok(prefactor(q) * sum.extract_rational()?)
        }
        Engine::Modular => engine::v_modular(q.g, q.r, q.k),
        Engine::Auto => unreachable!(),
    }
}

/// Every `r`-subset of `{1, …, n}` in lexicographic order.
pub fn all_subsets(n: u32, r: u32) -> Vec<SubsetS> {
    fn rec(n: u32, r: u32, start: u32, cur: &mut Vec<u32>, out: &mut Vec<SubsetS>) {
        if cur.len() == r as usize {
            out.push(SubsetS {
                n,
                members: cur.clone(),
            });
            return;
        }
        let need = r - cur.len() as u32;
        for m in start..=n + 1 - need {
            cur.push(m);
            rec(n, r, m + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if r <= n {
        rec(n, r, 1, &mut Vec::new(), &mut out);
    }
    out
}

fn cache() -> &'static RwLock<HashMap<VerlindeQuery, Rational>> {
    static CACHE: OnceLock<RwLock<HashMap<VerlindeQuery, Rational>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `v_g(r, k)` as an exact rational (in fact always an integer).
///
/// Results are memoized process-wide; concurrent callers may both compute a
/// value, and both store the same one.
pub fn v_number(q: &VerlindeQuery) -> Result<Rational> {
    if let Some(v) = cache().read().get(q) {
        return Ok(v.clone());
    }
    let v = v_number_with(q, &EvalOptions::default())?;
    cache().write().insert(*q, v.clone());
    Ok(v)
}

/// Drops every memoized `v_g(r, k)`.
pub fn clear_cache() {
    cache().write().clear();
}

/// `v_g(r, k)` in floating point. Never authoritative.
pub fn v_number_float<T: RealScalar>(q: &VerlindeQuery) -> Result<T> {
    check_budget(q, necklace_budget())?;
    Ok(engine::v_float::<T>(q.g, q.r, q.k))
}

/// Exact `r^g / (r+k)^g · v_g(r, k)`, without the integrality check.
pub fn dim_ratio(q: &VerlindeQuery) -> Result<Rational> {
    let ratio = Rational::new(BigInt::from(q.r), BigInt::from(q.n()));
    Ok(num_traits::pow(ratio, q.g as usize) * v_number(q)?)
}

/// `h⁰(SU_X(r), L^k) = r^g / (r+k)^g · v_g(r, k)`, checked to be a positive integer.
pub fn verlinde_dim(q: &VerlindeQuery) -> Result<BigInt> {
    let value = dim_ratio(q)?;
    match as_integer(&value) {
        Some(d) if d.is_positive() => Ok(d),
        _ => Err(Error::NotIntegral {
            what: format!("dimension for (g, r, k) = ({}, {}, {})", q.g, q.r, q.k),
            value,
        }),
    }
}

/// Exact comparison of `v_g(r, k)` with `v_g(k, r)`.
pub fn check_level_rank_symmetry(g: u32, r: u32, k: u32) -> Result<bool> {
    if k == 0 {
        return Err(Error::hypothesis("level-rank symmetry needs r, k ≥ 1"));
    }
    let q = VerlindeQuery::new(g, r, k)?;
    Ok(v_number(&q)? == v_number(&q.swapped()?)?)
}

/// Rough number of leaf evaluations a query costs, with the number of
/// residue fields for the modular route.
pub fn cost_estimate(q: &VerlindeQuery) -> (u128, usize) {
    (
        necklace_estimate(q.n() as u64, q.r as u64),
        engine::modular_prime_count(q.g, q.r, q.k),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn q(g: u32, r: u32, k: u32) -> VerlindeQuery {
        VerlindeQuery::new(g, r, k).unwrap()
    }

    fn with(engine: Engine) -> EvalOptions {
        EvalOptions {
            engine,
            max_necklaces: u128::MAX,
        }
    }

    #[test]
    fn subset_terms() {
        let s = SubsetS::new(3, vec![1, 2]).unwrap();
        assert_eq!(subset_term(&s, 2), CycNum::from_rational(3, rat(1, 3)));
        assert_eq!(subset_term(&s, 1), CycNum::one(3));
        let single = SubsetS::new(7, vec![4]).unwrap();
        assert_eq!(subset_term(&single, 5), CycNum::one(7));
    }

    #[test]
    fn subset_validation() {
        assert!(SubsetS::new(4, vec![2, 2]).is_err());
        assert!(SubsetS::new(4, vec![0, 2]).is_err());
        assert!(SubsetS::new(4, vec![3, 5]).is_err());
        assert_eq!(
            SubsetS::new(5, vec![2, 5]).unwrap().shifted(1).members(),
            &[1, 3]
        );
    }

    #[test]
    fn worked_values() {
        assert_eq!(v_number(&q(2, 2, 1)).unwrap(), int(9));
        assert_eq!(verlinde_dim(&q(2, 2, 1)).unwrap(), BigInt::from(4));
        assert_eq!(verlinde_dim(&q(1, 2, 1)).unwrap(), BigInt::from(2));
        for g in 1..=5 {
            assert_eq!(v_number(&q(g, 1, 1)).unwrap(), int(1u64 << g));
            assert_eq!(verlinde_dim(&q(g, 1, 3)).unwrap(), BigInt::from(1));
        }
    }

    #[test]
    fn level_zero_has_dimension_one() {
        for g in 1..=4 {
            for r in 1..=6 {
                assert_eq!(verlinde_dim(&q(g, r, 0)).unwrap(), BigInt::from(1));
            }
        }
    }

    #[test]
    fn engines_agree() {
        for g in 1..=4 {
            for n in 2..=9 {
                for r in 1..n {
                    let query = q(g, r, n - r);
                    let a = v_number_with(&query, &with(Engine::Cyclotomic)).unwrap();
                    let b = v_number_with(&query, &with(Engine::Modular)).unwrap();
                    let c = v_number_with(&query, &with(Engine::Subsets)).unwrap();
                    assert_eq!(a, b, "{query:?}");
                    assert_eq!(a, c, "{query:?}");
                }
            }
        }
    }

    #[test]
    fn symmetric_cases() {
        assert!(check_level_rank_symmetry(2, 2, 1).unwrap());
        assert!(check_level_rank_symmetry(3, 3, 2).unwrap());
        assert!(check_level_rank_symmetry(1, 4, 5).unwrap());
        assert!(check_level_rank_symmetry(2, 2, 0).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let opts = EvalOptions {
            engine: Engine::Modular,
            max_necklaces: 10,
        };
        assert!(matches!(
            v_number_with(&q(2, 10, 10), &opts),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn rejects_bad_queries() {
        assert!(VerlindeQuery::new(0, 1, 1).is_err());
        assert!(VerlindeQuery::new(1, 0, 1).is_err());
    }
}
