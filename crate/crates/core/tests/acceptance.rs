//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//!
//! Every criterion is checked exactly; wall-clock limits are enforced too.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use thetasplit::arith::{binomial, divisors};
use thetasplit::chern::{
    check_fm_of_w, check_wirtinger_determinants, check_wirtinger_dims, check_wirtinger_pullback,
    fm_transform, isogeny_pullback_a, isogeny_pullback_axa, IsogenyMatrix, SlopeClass,
    SlopeMatrix,
};
use thetasplit::heisenberg::{check_schrodinger_irreducible, irrep_census, schrodinger_rep};
use thetasplit::pgl::{
    check_coperiodic_product, check_sine_identity, coperiod, pgl_compare, PglQuery,
};
use thetasplit::splitting::{
    check_rank_consistency, multiplicity, multiplicity_oracle, split_rank, trace_of_torsion,
    SplitQuery, TraceQuery,
};
use thetasplit::suite::{clear_caches, run_identities, RangeSpec};
use thetasplit::torsion::{
    character_order_sum_brute, character_order_sum_closed, characters_of_order,
    check_count_partition,
};
use thetasplit::verlinde::{
    all_subsets, v_number, v_number_with, verlinde_dim, Engine, EvalOptions, VerlindeQuery,
};
use thetasplit::{Error, Rational};

type Check = Result<String, String>;

fn err(e: Error) -> String {
    e.to_string()
}

fn q(g: u32, r: u32, k: u32) -> Result<VerlindeQuery, String> {
    VerlindeQuery::new(g, r, k).map_err(err)
}

fn int(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

fn c1_integrality_symmetry() -> Check {
    let mut count = 0;
    for g in 1..=4 {
        for n in 2..=10 {
            for r in 1..n {
                let k = n - r;
                let d = verlinde_dim(&q(g, r, k)?).map_err(err)?;
                if d <= BigInt::from(0) {
                    return Err(format!("g={g} r={r} k={k}: dim {d}"));
                }
                let (a, b) = (v_number(&q(g, r, k)?).map_err(err)?, v_number(&q(g, k, r)?).map_err(err)?);
                if a != b {
                    return Err(format!("g={g} r={r} k={k}: {a} ≠ {b}"));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} cases"))
}

fn c2_genus_one() -> Check {
    // enumerate necklaces rather than take the counting shortcut
    let opts = EvalOptions {
        engine: Engine::Cyclotomic,
        ..EvalOptions::default()
    };
    let mut count = 0;
    for n in 2..=16u32 {
        for r in 1..n {
            let v = v_number_with(&q(1, r, n - r)?, &opts).map_err(err)?;
            let expected = Rational::from_integer(binomial(n as u64, r as u64).into());
            if v != expected {
                return Err(format!("r={r} k={}: {v} ≠ {expected}", n - r));
            }
            count += 1;
        }
    }
    Ok(format!("{count} cases"))
}

fn c3_small_values() -> Check {
    let a = verlinde_dim(&q(2, 2, 1)?).map_err(err)?;
    let b = verlinde_dim(&q(1, 2, 1)?).map_err(err)?;
    if a == BigInt::from(4) && b == BigInt::from(2) {
        Ok("dim(2,2,1) = 4, dim(1,2,1) = 2".into())
    } else {
        Err(format!("got {a} and {b}"))
    }
}

fn c4_trace_at_identity() -> Check {
    let mut count = 0;
    for g in 1..=3 {
        for h in [1u64, 3, 5] {
            for n in 2..=6u32 {
                for r in 1..n {
                    let k = n - r;
                    let tq = TraceQuery::new(g, r, k, h).map_err(err)?;
                    let trace = trace_of_torsion(&tq, 1).map_err(err)?.value;
                    let dim = verlinde_dim(&q(g, h as u32 * r, h as u32 * k)?).map_err(err)?;
                    if trace != Rational::from_integer(dim.clone()) {
                        return Err(format!("g={g} h={h} r={r} k={k}: {trace} ≠ {dim}"));
                    }
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} cases"))
}

const PAIRS: [(u32, u32); 5] = [(1, 1), (1, 2), (2, 1), (1, 4), (3, 2)];

/// Runs `f` on every (h, g, r, k) of the multiplicity range, collecting
/// failures instead of stopping at the first.
fn over_split_range(f: impl Fn(&SplitQuery) -> Result<usize, String>) -> Check {
    let mut checked = 0;
    let mut failures = Vec::new();
    for h in [1u64, 3, 5, 9] {
        for g in 1..=2 {
            for (r, k) in PAIRS {
                let sq = SplitQuery::new(g, r, k, h).map_err(err)?;
                match f(&sq) {
                    Ok(n) => checked += n,
                    Err(e) => failures.push(format!("h={h} g={g} (r,k)=({r},{k}): {e}")),
                }
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("{checked} comparisons"))
    } else {
        Err(format!("{checked} comparisons passed; failed: {}", failures.join("; ")))
    }
}

fn c5_multiplicity_vs_oracle() -> Check {
    over_split_range(|sq| {
        let mut n = 0;
        for omega in divisors(sq.h()) {
            let m = multiplicity(sq, omega).map_err(err)?;
            for xi in characters_of_order(sq.h(), sq.genus(), omega, 2).map_err(err)? {
                let oracle = multiplicity_oracle(sq, &xi).map_err(err)?;
                if oracle != Rational::from_integer(m.clone()) {
                    return Err(format!("ω={omega}: closed form {m}, oracle {oracle}"));
                }
                n += 1;
            }
        }
        Ok(n)
    })
}

fn c6_worked_splitting() -> Check {
    let sq = SplitQuery::new(1, 1, 1, 3).map_err(err)?;
    let m1 = multiplicity(&sq, 1).map_err(err)?;
    let m3 = multiplicity(&sq, 3).map_err(err)?;
    let rank = split_rank(&sq).map_err(err)?;
    let dim = verlinde_dim(&q(1, 3, 3)?).map_err(err)?;
    if m1 == BigInt::from(2) && m3 == BigInt::from(1) && rank == BigInt::from(10) && dim == rank {
        Ok("m_1 = 2, m_3 = 1, 1·2 + 8·1 = 10 = dim(1,3,3)".into())
    } else {
        Err(format!("m_1 = {m1}, m_3 = {m3}, rank {rank}, dim {dim}"))
    }
}

fn c7_rank_consistency() -> Check {
    over_split_range(|sq| {
        if check_rank_consistency(sq).map_err(err)? {
            Ok(1)
        } else {
            Err("split rank differs from the dimension".into())
        }
    })
}

fn c8_character_sums() -> Check {
    let mut count = 0;
    for h in [3u64, 5, 9, 15] {
        for g in 1..=2 {
            for delta in divisors(h) {
                for omega in divisors(h) {
                    let xi = characters_of_order(h, g, omega, 1).map_err(err)?.remove(0);
                    let brute = character_order_sum_brute(&xi, delta).map_err(err)?;
                    let closed = character_order_sum_closed(h, omega, delta, g).map_err(err)?;
                    if brute != closed {
                        return Err(format!("h={h} g={g} δ={delta} ω={omega}: {brute} ≠ {closed}"));
                    }
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} cases"))
}

fn c9_partition() -> Check {
    for m in 1..=30 {
        for g in 1..=3 {
            if !check_count_partition(m, g).map_err(err)? {
                return Err(format!("m={m} g={g}"));
            }
        }
    }
    Ok("90 cases".into())
}

fn c10_pgl_routes() -> Check {
    let mut count = 0;
    for g in 1..=3 {
        for n in 2..=12u32 {
            for r in (1..n).step_by(2) {
                let k = n - r;
                for d in divisors(r.gcd(&k) as u64) {
                    let cmp = pgl_compare(&PglQuery::new(g, r, k, d as u32).map_err(err)?).map_err(err)?;
                    if !cmp.agree() {
                        return Err(format!("g={g} r={r} k={k} d={d}: {cmp:?}"));
                    }
                    count += 1;
                }
            }
        }
    }
    let worked = pgl_compare(&PglQuery::new(1, 3, 3, 3).map_err(err)?).map_err(err)?;
    if worked.charsum != int(2) || worked.coperiodic != int(2) {
        return Err(format!("worked instance gave {worked:?}"));
    }
    Ok(format!("{count} cases, (1,3,3,3) → 2 by both routes"))
}

fn c11_sine_identities() -> Check {
    let mut angles = 0;
    for delta in 1..=6u32 {
        for den in 1..=12i64 {
            for num in 0..2 * den {
                if num.gcd(&den) != 1 || (delta as i64 * num) % den == 0 {
                    continue;
                }
                let x = Rational::new(num.into(), den.into());
                if !check_sine_identity(delta, &x).map_err(err)? {
                    return Err(format!("δ={delta} x/π={x}"));
                }
                angles += 1;
            }
        }
    }
    let mut sets = 0;
    for n in 2..=12u32 {
        for r in 1..n {
            for s in all_subsets(n, r) {
                let top = coperiod(&s, r, n - r).map_err(err)?.coperiod;
                for delta in divisors(top as u64).into_iter().skip(1) {
                    if !check_coperiodic_product(&s, delta as u32).map_err(err)? {
                        return Err(format!("S={:?} δ={delta}", s.members()));
                    }
                    sets += 1;
                }
            }
        }
    }
    Ok(format!("{angles} angles, {sets} coperiodic sets"))
}

fn c12_chern() -> Check {
    type Q = SlopeClass<Rational>;
    let odd = [1i64, 3, 5, 7, 9];
    let mut count = 0;
    let fail = |what: &str, g: u32, p: &[i64]| Err(format!("{what} at g={g} {p:?}"));
    for g in 1..=4u32 {
        let sign = if g % 2 == 0 { 1 } else { -1 };
        for &a in &odd {
            for &b in &odd {
                let w = Q::w(g, a, b).map_err(err)?;
                if w.euler_char() != int(b.pow(g)) {
                    return fail("χ(W_{a,b}) = b^g", g, &[a, b]);
                }
                if !check_fm_of_w::<Rational>(g, a, b).map_err(err)? {
                    return fail("fm(W_{a,b}) = W_{b,a}^∨", g, &[a, b]);
                }
                let twice = fm_transform(&fm_transform(&w).map_err(err)?).map_err(err)?;
                if twice != Q::new(g, w.rank.clone() * int(sign), w.slope.clone()) {
                    return fail("fm² = (-1)^g on the rank", g, &[a, b]);
                }
                if isogeny_pullback_a(&w, a).map_err(err)? != Q::new(g, int(a.pow(g)), int(a * b)) {
                    return fail("a*W_{a,b} = a^g copies of Θ^{ab}", g, &[a, b]);
                }
                if a.gcd(&b) == 1 {
                    let line = SlopeMatrix::box_product(&Q::theta_power(g, 1), &Q::theta_power(g, a * b))
                        .map_err(err)?;
                    let pulled = isogeny_pullback_axa(&line, &IsogenyMatrix::new([[a, b], [1, -1]]).map_err(err)?);
                    let z = int(0);
                    if pulled.q != [[int(a * (a + b)), z.clone()], [z, int(b * (a + b))]] {
                        return fail("diag(a(a+b), b(a+b))", g, &[a, b]);
                    }
                    if !check_wirtinger_dims(a, b, g).map_err(err)?
                        || !check_wirtinger_determinants(a, b, g).map_err(err)?
                    {
                        return fail("(a+b)^g dimensions", g, &[a, b]);
                    }
                }
                for &c in &odd {
                    for &d in &odd {
                        if (a * c).gcd(&(b * d)) != 1 {
                            continue;
                        }
                        let delta = a * d + b * c;
                        let m = IsogenyMatrix::new([[a, b], [c, -d]]).map_err(err)?;
                        let src = SlopeMatrix::new(
                            g,
                            int(1),
                            [[Rational::new(1.into(), (a * b).into()), int(0)], [int(0), Rational::new(1.into(), (c * d).into())]],
                        )
                        .map_err(err)?;
                        let pulled = isogeny_pullback_axa(&src, &m);
                        let expected = [
                            [Rational::new(delta.into(), (b * d).into()), int(0)],
                            [int(0), Rational::new(delta.into(), (a * c).into())],
                        ];
                        if pulled.q != expected || !check_wirtinger_pullback(a, b, c, d, g).map_err(err)? {
                            return fail("diag(δ/bd, δ/ac)", g, &[a, b, c, d]);
                        }
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{count} Wirtinger matrices plus W-class rules"))
}

fn c13_heisenberg() -> Check {
    let c3 = irrep_census(3, 1).map_err(err)?;
    let dims3: Vec<(u64, u64)> = c3.entries.iter().map(|e| (e.dimension, e.multiplicity)).collect();
    if dims3 != [(1, 9), (3, 1), (3, 1)] || c3.sum_of_squares != 27 {
        return Err(format!("m=3: {:?}", c3.entries));
    }
    let c5 = irrep_census(5, 1).map_err(err)?;
    let linear = c5.entries.iter().filter(|e| e.dimension == 1).map(|e| e.multiplicity).sum::<u64>();
    let big = c5.entries.iter().filter(|e| e.dimension == 5).map(|e| e.multiplicity).sum::<u64>();
    if linear != 25 || big != 4 || c5.sum_of_squares != 125 {
        return Err(format!("m=5: {:?}", c5.entries));
    }
    for (m, n) in [(3, 1), (3, 2), (5, 1), (5, 2), (5, 3), (5, 4)] {
        if !check_schrodinger_irreducible(&schrodinger_rep(m, n, 1).map_err(err)?).map_err(err)? {
            return Err(format!("S_({m},{n}) has character norm ≠ 1"));
        }
    }
    Ok("9 + 2 irreps (27), 25 + 4 irreps (125), norms 1".into())
}

fn c14_determinism() -> Check {
    let spec = RangeSpec::default();
    let run = |threads: usize| -> Result<String, String> {
        clear_caches();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| e.to_string())?;
        Ok(pool.install(|| run_identities(&spec)).render())
    };
    let one = run(1)?;
    let eight = run(8)?;
    if one != eight {
        return Err("outputs differ".into());
    }
    if !one.ends_with(" 0 failed\n") {
        return Err(one.lines().last().unwrap_or("").to_string());
    }
    Ok(format!("{} bytes identical", one.len()))
}

fn main() {
    let criteria: [(u32, &str, Duration, fn() -> Check); 14] = [
        (1, "integrality and level-rank symmetry, g ≤ 4, r+k ≤ 10", Duration::from_secs(60), c1_integrality_symmetry),
        (2, "v_1(r,k) = C(r+k,r), r+k ≤ 16", Duration::from_secs(5), c2_genus_one),
        (3, "known small dimensions", Duration::from_secs(1), c3_small_values),
        (4, "trace at the identity equals the dimension", Duration::from_secs(60), c4_trace_at_identity),
        (5, "multiplicity closed form vs Fourier inversion", Duration::from_secs(300), c5_multiplicity_vs_oracle),
        (6, "worked splitting g=1, r=k=1, h=3", Duration::from_secs(1), c6_worked_splitting),
        (7, "rank consistency on the multiplicity range", Duration::from_secs(300), c7_rank_consistency),
        (8, "character sums by order, brute force vs closed form", Duration::from_secs(120), c8_character_sums),
        (9, "torsion partition Σ n(δ) = m^{2g}", Duration::from_secs(1), c9_partition),
        (10, "SL_r/Z_d dimension, two routes", Duration::from_secs(120), c10_pgl_routes),
        (11, "sine and coperiodic-product identities", Duration::from_secs(30), c11_sine_identities),
        (12, "slope-class, Fourier–Mukai and Wirtinger suite", Duration::from_secs(1), c12_chern),
        (13, "Heisenberg census and Schrödinger norms", Duration::from_secs(60), c13_heisenberg),
        (14, "identity suite identical on 1 and 8 threads", Duration::from_secs(300), c14_determinism),
    ];
    let mut failed = 0;
    for (id, name, limit, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if elapsed <= limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}, but over the {} s limit", limit.as_secs())),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "{status} criterion {id:>2}: {name} ({:.2} s): {detail}",
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", 14 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
