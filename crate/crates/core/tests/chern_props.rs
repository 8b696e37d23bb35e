use proptest::prelude::*;
use thetasplit::chern::{
    check_wirtinger_determinants, check_wirtinger_dims, check_wirtinger_pullback, fm_transform,
    fm_transform_by_kernel, isogeny_pullback_a, isogeny_pullback_axa, IsogenyMatrix, SlopeMatrix,
};
use thetasplit::heisenberg::schrodinger_dim;
use thetasplit::{Rational, SlopeClassF64, SlopeClassQ};

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn class() -> impl Strategy<Value = SlopeClassQ> {
    (1u32..=4, 1i64..20, 1i64..6, -15i64..15, 1i64..6)
        .prop_filter("nonzero slope", |t| t.3 != 0)
        .prop_map(|(g, rn, rd, sn, sd)| SlopeClassQ::new(g, rat(rn, rd), rat(sn, sd)))
}

proptest! {
    #[test]
    fn transform_squared_is_a_sign(c in class()) {
        let twice = fm_transform(&fm_transform(&c).unwrap()).unwrap();
        let sign = if c.g % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(twice, SlopeClassQ::new(c.g, c.rank.clone() * rat(sign, 1), c.slope.clone()));
    }

    #[test]
    fn euler_characteristic_of_transform(c in class()) {
        let sign = if c.g % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(fm_transform(&c).unwrap().euler_char(), c.rank.clone() * rat(sign, 1));
    }

    #[test]
    fn kernel_integral_matches_closed_form(c in class()) {
        prop_assert_eq!(fm_transform_by_kernel(&c).unwrap(), fm_transform(&c).unwrap());
    }

    #[test]
    fn diagonal_isogenies_act_factorwise(a in class(), s in -15i64..15, m1 in 1i64..5, m2 in -4i64..5) {
        prop_assume!(m2 != 0);
        let b = SlopeClassQ::new(a.g, rat(3, 1), rat(s, 7));
        let m = IsogenyMatrix::new([[m1, 0], [0, m2]]).unwrap();
        let pulled = isogeny_pullback_axa(&SlopeMatrix::box_product(&a, &b).unwrap(), &m);
        let expected = SlopeMatrix::box_product(
            &isogeny_pullback_a(&a, m1).unwrap(),
            &isogeny_pullback_a(&b, m2).unwrap(),
        )
        .unwrap();
        prop_assert_eq!(pulled, expected);
    }
}

#[test]
fn w_class_examples() {
    for g in 1..=4u32 {
        for a in [1i64, 3, 5, 7, 9] {
            for b in [1i64, 3, 5, 7, 9] {
                let w = SlopeClassQ::w(g, a, b).unwrap();
                assert_eq!(w.euler_char(), rat(b.pow(g), 1));
                let t = fm_transform(&w).unwrap();
                assert_eq!(t, SlopeClassQ::new(g, rat(b.pow(g), 1), rat(-a, b)));
                let p = isogeny_pullback_a(&w, a).unwrap();
                assert_eq!(p, SlopeClassQ::new(g, rat(a.pow(g), 1), rat(a * b, 1)));
            }
        }
    }
    assert_eq!(SlopeClassQ::w(2, 3, 5).unwrap().euler_char(), rat(25, 1));
}

#[test]
fn wirtinger_suite() {
    let odd = [1i64, 3, 5, 7, 9];
    for g in 1..=3 {
        for a in odd {
            for b in odd {
                if num_integer::gcd(a, b) == 1 {
                    assert!(check_wirtinger_dims(a, b, g).unwrap());
                    assert!(check_wirtinger_determinants(a, b, g).unwrap());
                    assert_eq!(
                        schrodinger_dim(a as u64, g) as i64,
                        a.pow(g),
                    );
                }
                for c in odd {
                    for d in odd {
                        if num_integer::gcd(a * c, b * d) == 1 {
                            assert!(check_wirtinger_pullback(a, b, c, d, g).unwrap());
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn sum_difference_isogeny() {
    let th = SlopeClassQ::theta_power(1, 1);
    let m = IsogenyMatrix::new([[1, 1], [1, -1]]).unwrap();
    let pulled = isogeny_pullback_axa(&SlopeMatrix::box_product(&th, &th).unwrap(), &m);
    assert_eq!(pulled.q, [[rat(2, 1), rat(0, 1)], [rat(0, 1), rat(2, 1)]]);
    assert!(IsogenyMatrix::new([[1, 2], [2, 4]]).is_err());
}

#[test]
fn float_classes_follow_the_same_rules() {
    let w = SlopeClassF64::w(3, 3, 5).unwrap();
    let t = fm_transform(&w).unwrap();
    assert!((t.rank - 125.0).abs() < 1e-9);
    assert!((t.slope + 0.6).abs() < 1e-12);
}
