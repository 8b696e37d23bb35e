use num_bigint::BigInt;
use proptest::prelude::*;
use thetasplit::arith::binomial;
use thetasplit::verlinde::{
    all_subsets, subset_term, v_number, v_number_float, v_number_with, verlinde_dim, Engine,
    EvalOptions, SubsetS, VerlindeQuery,
};
use thetasplit::Rational;

/// `n^{r(g-1)} Σ_S ∏_{s<t} (4 sin²(π(t-s)/n))^{1-g}` straight from the
/// definition, subsets generated by bitmask.
fn float_oracle(g: u32, r: u32, k: u32) -> f64 {
    let n = r + k;
    let mut sum = 0.0;
    for mask in 0u32..1 << n {
        if mask.count_ones() != r {
            continue;
        }
        let s: Vec<u32> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let mut p = 1.0f64;
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                let x = (std::f64::consts::PI * (s[j] - s[i]) as f64 / n as f64).sin();
                p *= 4.0 * x * x;
            }
        }
        sum += p.powi(1 - g as i32);
    }
    (n as f64).powi((r * (g - 1)) as i32) * sum
}

fn q(g: u32, r: u32, k: u32) -> VerlindeQuery {
    VerlindeQuery::new(g, r, k).unwrap()
}

fn subset() -> impl Strategy<Value = SubsetS> {
    (2u32..=14).prop_flat_map(|n| {
        prop::sample::subsequence((1..=n).collect::<Vec<_>>(), 1..n as usize)
            .prop_map(move |m| SubsetS::new(n, m).unwrap())
    })
}

proptest! {
    #[test]
    fn terms_are_translation_invariant(s in subset(), g in 1u32..=4, by in 1u32..14) {
        prop_assert_eq!(subset_term(&s, g), subset_term(&s.shifted(by), g));
    }
}

#[test]
fn symmetry_and_integrality_up_to_ten() {
    for g in 1..=4 {
        for n in 2..=10 {
            for r in 1..n {
                let k = n - r;
                let v = v_number(&q(g, r, k)).unwrap();
                assert_eq!(v, v_number(&q(g, k, r)).unwrap(), "g={g} r={r} k={k}");
                let d = verlinde_dim(&q(g, r, k)).unwrap();
                assert!(d > BigInt::from(0));
            }
        }
    }
}

#[test]
fn genus_one_by_enumeration() {
    let opts = EvalOptions {
        engine: Engine::Cyclotomic,
        ..EvalOptions::default()
    };
    for n in 2..=16u32 {
        for r in 1..n {
            let v = v_number_with(&q(1, r, n - r), &opts).unwrap();
            assert_eq!(v, Rational::from_integer(binomial(n as u64, r as u64).into()));
        }
    }
}

#[test]
fn exact_matches_float_definition() {
    for g in 1..=4 {
        for n in 2..=10 {
            for r in 1..n {
                let exact: f64 = v_number(&q(g, r, n - r))
                    .unwrap()
                    .to_string()
                    .parse()
                    .unwrap();
                let oracle = float_oracle(g, r, n - r);
                assert!(
                    (exact - oracle).abs() / exact < 1e-9,
                    "g={g} r={r} k={}: {exact} vs {oracle}",
                    n - r
                );
                let fl = v_number_float::<f64>(&q(g, r, n - r)).unwrap();
                assert!((exact - fl).abs() / exact < 1e-9);
            }
        }
    }
}

#[test]
fn engines_agree() {
    for g in 2..=4 {
        for n in 2..=9 {
            for r in 1..n {
                let vq = q(g, r, n - r);
                let by = |engine| {
                    v_number_with(&vq, &EvalOptions { engine, ..EvalOptions::default() }).unwrap()
                };
                let subsets = by(Engine::Subsets);
                assert_eq!(by(Engine::Cyclotomic), subsets);
                assert_eq!(by(Engine::Modular), subsets);
            }
        }
    }
}

#[test]
fn subsets_are_all_listed() {
    assert_eq!(all_subsets(10, 4).len(), 210);
    assert!(all_subsets(3, 5).is_empty());
}

#[test]
fn worked_values() {
    assert_eq!(verlinde_dim(&q(2, 2, 1)).unwrap(), BigInt::from(4));
    assert_eq!(verlinde_dim(&q(1, 2, 1)).unwrap(), BigInt::from(2));
    assert_eq!(verlinde_dim(&q(3, 4, 0)).unwrap(), BigInt::from(1));
}
