//! The identity suite: every exact identity the library knows how to check,
//! run over a configurable range and rendered as deterministic text.

use std::fmt::Write as _;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::Signed;

use crate::arith::{binomial, divisors, int};
use crate::chern::{
    self, check_fm_of_w, check_wirtinger_determinants, check_wirtinger_dims,
    check_wirtinger_pullback, fm_transform, fm_transform_by_kernel, isogeny_pullback_a,
};
use crate::heisenberg::{check_schrodinger_irreducible, irrep_census, schrodinger_rep};
use crate::pgl::{check_coperiodic_product, check_sine_identity, is_coperiodic, pgl_compare, PglQuery};
use crate::splitting::{
    check_multiplicity_symmetry, check_rank_consistency, multiplicity, multiplicity_oracle,
    trace_of_torsion, SplitQuery, TraceQuery,
};
use crate::torsion::{
    character_order_sum_brute, character_order_sum_closed, characters_of_order,
    check_count_partition,
};
use crate::verlinde::{
    all_subsets, check_level_rank_symmetry, v_number_with, verlinde_dim, Engine, EvalOptions,
    VerlindeQuery,
};
use crate::{Error, Rational, Result};

/// Range of the identity suite, read from `key=value` lines.
///
/// Keys: `g_max`, `n_max` (bound on `r + k`), `h_list`, `d_list` (comma
/// separated), and `hn_max`, the bound on `h(r + k)` for the torsion
/// families (defaults to `2 · n_max`). Blank lines and `#` comments are
/// ignored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RangeSpec {
    pub g_max: u32,
    pub n_max: u32,
    pub h_list: Vec<u64>,
    pub d_list: Vec<u32>,
    pub hn_max: u32,
}

impl Default for RangeSpec {
    fn default() -> Self {
        RangeSpec {
            g_max: 3,
            n_max: 8,
            h_list: vec![1, 3, 5],
            d_list: vec![1, 3],
            hn_max: 16,
        }
    }
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| Error::invalid(format!("{key}: cannot parse {s:?}")))
        })
        .collect()
}

fn parse_one<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::invalid(format!("{key}: cannot parse {value:?}")))
}

impl FromStr for RangeSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut spec = RangeSpec::default();
        let mut hn_max = None;
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("line {}: expected key=value", i + 1)))?;
            match key.trim() {
                "g_max" => spec.g_max = parse_one(key, value)?,
                "n_max" => spec.n_max = parse_one(key, value)?,
                "hn_max" => hn_max = Some(parse_one(key, value)?),
                "h_list" => spec.h_list = parse_list(key, value)?,
                "d_list" => spec.d_list = parse_list(key, value)?,
                other => return Err(Error::invalid(format!("unknown range key {other:?}"))),
            }
        }
        spec.hn_max = hn_max.unwrap_or(2 * spec.n_max);
        if spec.g_max == 0 || spec.n_max < 2 {
            return Err(Error::invalid("need g_max ≥ 1 and n_max ≥ 2"));
        }
        if let Some(h) = spec.h_list.iter().find(|&&h| h == 0 || h % 2 == 0) {
            return Err(Error::hypothesis(format!(
                "h = {h}: h must be odd (hypothesis of the splitting theorem)"
            )));
        }
        if spec.d_list.contains(&0) {
            return Err(Error::invalid("d_list entries must be positive"));
        }
        Ok(spec)
    }
}

/// One checked instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseResult {
    pub family: &'static str,
    /// The identity being checked, stated in words.
    pub identity: &'static str,
    pub case: String,
    /// Exact value(s) produced, or the error that stopped the check.
    pub value: String,
    pub passed: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub cases: Vec<CaseResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(|c| !c.passed)
    }

    /// True when some failure is an identity or consistency failure rather
    /// than a budget or argument problem.
    pub fn has_internal_failure(&self) -> bool {
        self.failures().any(|c| c.value.starts_with("internal:"))
    }

    /// One line per case, in query order. Contains only exact values.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.cases {
            let _ = writeln!(
                out,
                "{} {} [{}] {} => {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.family,
                c.case,
                c.identity,
                c.value
            );
        }
        let failed = self.failures().count();
        let _ = writeln!(out, "{} cases, {} failed", self.cases.len(), failed);
        out
    }
}

fn describe(e: &Error) -> String {
    if e.is_internal() {
        format!("internal: {e}")
    } else {
        format!("error: {e}")
    }
}

struct Recorder {
    cases: Vec<CaseResult>,
}

impl Recorder {
    fn check(
        &mut self,
        family: &'static str,
        identity: &'static str,
        case: String,
        f: impl FnOnce() -> Result<(bool, String)>,
    ) {
        let (passed, value) = match f() {
            Ok(v) => v,
            Err(e) => (false, describe(&e)),
        };
        self.cases.push(CaseResult {
            family,
            identity,
            case,
            value,
            passed,
        });
    }
}

/// Clears the process-wide memo tables so a run recomputes everything.
pub fn clear_caches() {
    crate::verlinde::clear_cache();
    crate::splitting::clear_trace_table();
}

/// Runs every family over `spec`. Never stops early: failures are recorded
/// per case.
pub fn run_identities(spec: &RangeSpec) -> SuiteReport {
    let mut rec = Recorder { cases: Vec::new() };
    verlinde_family(spec, &mut rec);
    torsion_family(spec, &mut rec);
    splitting_family(spec, &mut rec);
    pgl_family(spec, &mut rec);
    chern_family(&mut rec);
    heisenberg_family(&mut rec);
    SuiteReport { cases: rec.cases }
}

fn verlinde_family(spec: &RangeSpec, rec: &mut Recorder) {
    for g in 1..=spec.g_max {
        for n in 2..=spec.n_max {
            for r in 1..n {
                let k = n - r;
                rec.check(
                    "verlinde",
                    "dimension is a positive integer and v_g(r,k) = v_g(k,r)",
                    format!("g={g} r={r} k={k}"),
                    || {
                        let dim = verlinde_dim(&VerlindeQuery::new(g, r, k)?)?;
                        Ok((check_level_rank_symmetry(g, r, k)?, dim.to_string()))
                    },
                );
            }
        }
    }
    for n in 2..=spec.n_max {
        for r in 1..n {
            rec.check(
                "verlinde",
                "v_1(r,k) = C(r+k, r) by necklace enumeration",
                format!("r={r} k={}", n - r),
                || {
                    let opts = EvalOptions {
                        engine: Engine::Cyclotomic,
                        ..EvalOptions::default()
                    };
                    let v = v_number_with(&VerlindeQuery::new(1, r, n - r)?, &opts)?;
                    let expected = int(binomial(n as u64, r as u64));
                    Ok((v == expected, v.to_string()))
                },
            );
        }
    }
}

fn torsion_family(spec: &RangeSpec, rec: &mut Recorder) {
    for g in 1..=spec.g_max {
        for m in 1..=30 {
            rec.check(
                "torsion",
                "Σ_{δ|m} n(δ) = m^{2g}",
                format!("g={g} m={m}"),
                || Ok((check_count_partition(m, g)?, String::new())),
            );
        }
    }
    for &h in &spec.h_list {
        for g in 1..=spec.g_max.min(2) {
            for delta in divisors(h) {
                for omega in divisors(h) {
                    rec.check(
                        "torsion",
                        "character sum over points of order δ matches the totient-symbol closed form",
                        format!("h={h} g={g} δ={delta} ω={omega}"),
                        || {
                            let xi = characters_of_order(h, g, omega, 1)?.remove(0);
                            let brute = character_order_sum_brute(&xi, delta)?;
                            let closed = character_order_sum_closed(h, omega, delta, g)?;
                            Ok((brute == closed, closed.to_string()))
                        },
                    );
                }
            }
        }
    }
}

fn torsion_pairs(spec: &RangeSpec, h: u64) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for n in 2..=spec.n_max {
        if h * n as u64 > spec.hn_max as u64 {
            break;
        }
        for r in 1..n {
            out.push((r, n - r));
        }
    }
    out
}

fn splitting_family(spec: &RangeSpec, rec: &mut Recorder) {
    for &h in &spec.h_list {
        for g in 1..=spec.g_max {
            for (r, k) in torsion_pairs(spec, h) {
                rec.check(
                    "splitting",
                    "trace of the identity point equals the rank hr, level hk dimension",
                    format!("g={g} r={r} k={k} h={h}"),
                    || {
                        let q = TraceQuery::new(g, r, k, h)?;
                        let trace = trace_of_torsion(&q, 1)?.value;
                        let dim = verlinde_dim(&VerlindeQuery::new(
                            g,
                            h as u32 * r,
                            h as u32 * k,
                        )?)?;
                        Ok((trace == Rational::from_integer(dim), trace.to_string()))
                    },
                );
            }
        }
        for g in 1..=spec.g_max.min(2) {
            for (r, k) in torsion_pairs(spec, h) {
                if r.gcd(&k) != 1 {
                    continue;
                }
                for omega in divisors(h) {
                    rec.check(
                        "splitting",
                        "closed-form multiplicity equals the Fourier-inversion sum",
                        format!("g={g} r={r} k={k} h={h} ω={omega}"),
                        || {
                            let q = SplitQuery::new(g, r, k, h)?;
                            let m = multiplicity(&q, omega)?;
                            let mut ok = true;
                            for xi in characters_of_order(h, g, omega, 2)? {
                                ok &= multiplicity_oracle(&q, &xi)? == Rational::from_integer(m.clone());
                            }
                            Ok((ok && !m.is_negative(), m.to_string()))
                        },
                    );
                }
                rec.check(
                    "splitting",
                    "Σ n(ω) m_ω r^g equals the rank hr, level hk dimension, and m_ω(r,k) = m_ω(k,r)",
                    format!("g={g} r={r} k={k} h={h}"),
                    || {
                        let q = SplitQuery::new(g, r, k, h)?;
                        Ok((
                            check_rank_consistency(&q)? && check_multiplicity_symmetry(&q)?,
                            String::new(),
                        ))
                    },
                );
            }
        }
    }
}

fn pgl_family(spec: &RangeSpec, rec: &mut Recorder) {
    for g in 1..=spec.g_max {
        for n in 2..=spec.n_max {
            for r in (1..n).step_by(2) {
                let k = n - r;
                for &d in &spec.d_list {
                    if r % d != 0 || k % d != 0 {
                        continue;
                    }
                    rec.check(
                        "pgl",
                        "character-sum and coperiodic-subset routes agree",
                        format!("g={g} r={r} k={k} d={d}"),
                        || {
                            let cmp = pgl_compare(&PglQuery::new(g, r, k, d)?)?;
                            Ok((cmp.agree(), cmp.charsum.to_string()))
                        },
                    );
                }
            }
        }
    }
    for delta in 1..=6u32 {
        for den in 1..=12i64 {
            for num in 1..2 * den {
                if num.gcd(&den) != 1 || ((delta as i64) * num) % den == 0 {
                    continue;
                }
                rec.check(
                    "pgl",
                    "∏_{i<δ} 4sin²(x + iπ/δ) = 4sin²(δx)",
                    format!("δ={delta} x/π={num}/{den}"),
                    || {
                        let x = Rational::new(num.into(), den.into());
                        Ok((check_sine_identity(delta, &x)?, String::new()))
                    },
                );
            }
        }
    }
    for n in 2..=spec.n_max {
        for r in 1..n {
            let k = n - r;
            for delta in divisors(r.gcd(&k) as u64).into_iter().skip(1) {
                let delta = delta as u32;
                let sets: Vec<_> = all_subsets(n, r)
                    .into_iter()
                    .filter(|s| is_coperiodic(s, delta))
                    .collect();
                rec.check(
                    "pgl",
                    "chord product of a δ-coperiodic set factors through its fundamental piece",
                    format!("r={r} k={k} δ={delta}"),
                    || {
                        let mut ok = true;
                        for s in &sets {
                            ok &= check_coperiodic_product(s, delta)?;
                        }
                        Ok((ok, format!("{} sets", sets.len())))
                    },
                );
            }
        }
    }
}

fn chern_family(rec: &mut Recorder) {
    type Q = chern::SlopeClass<Rational>;
    let odd = [1i64, 3, 5, 7, 9];
    for g in 1..=4u32 {
        for &a in &odd {
            for &b in &odd {
                rec.check(
                    "chern",
                    "χ(W_{a,b}) = b^g, fm(W_{a,b}) = W_{b,a}^∨ by closed form and by kernel, a*W_{a,b} = (a^g, ab)",
                    format!("g={g} a={a} b={b}"),
                    || {
                        let w = Q::w(g, a, b)?;
                        let chi = w.euler_char();
                        let mut ok = chi == int(num_traits::pow(num_bigint::BigInt::from(b), g as usize));
                        ok &= check_fm_of_w::<Rational>(g, a, b)?;
                        ok &= fm_transform_by_kernel(&w)? == fm_transform(&w)?;
                        let twice = fm_transform(&fm_transform(&w)?)?;
                        let sign = if g % 2 == 0 { 1 } else { -1 };
                        ok &= twice == Q::new(g, w.rank.clone() * int(sign), w.slope.clone());
                        let pulled = isogeny_pullback_a(&w, a)?;
                        ok &= pulled == Q::new(g, w.rank.clone(), int(a * b));
                        Ok((ok, chi.to_string()))
                    },
                );
                if a.gcd(&b) == 1 {
                    rec.check(
                        "chern",
                        "Wirtinger dimensions (a+b)^g, dim S = rank W_{a,b}, pullback diag(a(a+b), b(a+b))",
                        format!("g={g} a={a} b={b}"),
                        || {
                            Ok((
                                check_wirtinger_dims(a, b, g)?
                                    && check_wirtinger_determinants(a, b, g)?,
                                (a + b).pow(g).to_string(),
                            ))
                        },
                    );
                }
            }
        }
        for &a in &odd {
            for &b in &odd {
                for &c in &odd {
                    for &d in &odd {
                        if (a * c).gcd(&(b * d)) != 1 {
                            continue;
                        }
                        rec.check(
                            "chern",
                            "μ*(W_{ab,1} ⊠ W_{cd,1}) has the class of W_{bd,δ} ⊠ W_{ac,δ}",
                            format!("g={g} a={a} b={b} c={c} d={d}"),
                            || Ok((check_wirtinger_pullback(a, b, c, d, g)?, (a * d + b * c).to_string())),
                        );
                    }
                }
            }
        }
    }
}

fn heisenberg_family(rec: &mut Recorder) {
    for m in [1u64, 3, 5] {
        rec.check(
            "heisenberg",
            "one irreducible of dimension m^g per unit central weight, m^{2g} linear characters, Σ dim² = |G|",
            format!("m={m} g=1"),
            || {
                let census = irrep_census(m, 1)?;
                let linear = census
                    .entries
                    .iter()
                    .find(|e| e.dimension == 1)
                    .map_or(0, |e| e.multiplicity);
                let units = (1..m.max(2)).filter(|n| n.gcd(&m) == 1).count() as u64;
                let big: Vec<_> = census.entries.iter().filter(|e| e.dimension == m && m > 1).collect();
                let ok = linear == m * m
                    && (m == 1 || (big.len() as u64 == units && big.iter().all(|e| e.multiplicity == 1)))
                    && census.sum_of_squares == census.order;
                let shape: Vec<String> = census
                    .entries
                    .iter()
                    .map(|e| format!("{}x{}@{}", e.multiplicity, e.dimension, e.central_weight))
                    .collect();
                Ok((ok, shape.join(" ")))
            },
        );
    }
    for (m, g) in [(3u64, 1u32), (5, 1), (3, 2)] {
        for n in 1..m {
            if n.gcd(&m) != 1 {
                continue;
            }
            rec.check(
                "heisenberg",
                "Schrödinger character has norm 1 and vanishes off the center",
                format!("m={m} n={n} g={g}"),
                || Ok((check_schrodinger_irreducible(&schrodinger_rep(m, n, g)?)?, "1".into())),
            );
        }
    }
}
