use proptest::prelude::*;
use thetasplit::arith::euler_phi;
use thetasplit::exactnum::{cyc_inv, cyc_mul, CycNum};
use thetasplit::Rational;

fn cyc(n: u64) -> impl Strategy<Value = CycNum> {
    let deg = euler_phi(n) as usize;
    prop::collection::vec((-9i64..=9, 1i64..=4), deg).prop_map(move |c| {
        let coeffs = c
            .into_iter()
            .map(|(p, q)| Rational::new(p.into(), q.into()))
            .collect();
        CycNum::from_coeffs(n, coeffs).unwrap()
    })
}

fn conductor_and(count: usize) -> impl Strategy<Value = (u64, Vec<CycNum>)> {
    (1u64..=30).prop_flat_map(move |n| (Just(n), prop::collection::vec(cyc(n), count)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms((_n, v) in conductor_and(3)) {
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        prop_assert_eq!(&(a + b) + c, a + &(b + c));
        prop_assert_eq!(&(a * b) * c, a * &(b * c));
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
        prop_assert!((a - a).is_zero());
    }

    #[test]
    fn inverse((n, v) in conductor_and(1)) {
        let a = &v[0];
        prop_assume!(!a.is_zero());
        let prod = cyc_mul(a, &cyc_inv(a).unwrap()).unwrap();
        prop_assert_eq!(prod, CycNum::one(n));
    }

    #[test]
    fn numeric_embedding((_n, v) in conductor_and(2)) {
        let (a, b) = (&v[0], &v[1]);
        let exact = (a * b).to_complex();
        let float = a.to_complex() * b.to_complex();
        let scale = exact.norm().max(1.0);
        prop_assert!((exact - float).norm() / scale < 1e-9);
    }

    #[test]
    fn embedding_into_a_multiple((n, v) in conductor_and(2), m in 1u64..=3) {
        let (a, b) = (&v[0], &v[1]);
        let big = n * m;
        let lifted = (a * b).embed(big).unwrap();
        prop_assert_eq!(lifted, &a.embed(big).unwrap() * &b.embed(big).unwrap());
    }

    #[test]
    fn conjugation_is_a_ring_map((_n, v) in conductor_and(2)) {
        let (a, b) = (&v[0], &v[1]);
        prop_assert_eq!((a * b).conj(), &a.conj() * &b.conj());
        let z = a.to_complex().conj();
        prop_assert!((a.conj().to_complex() - z).norm() < 1e-9 * z.norm().max(1.0));
    }
}

#[test]
fn chord_squares_embed_to_sine_squares() {
    for n in 1..=30u64 {
        for d in 1..n {
            let exact = CycNum::chord_square(n, d as i64).to_complex();
            let s = (std::f64::consts::PI * d as f64 / n as f64).sin();
            assert!((exact.re - 4.0 * s * s).abs() < 1e-12, "n={n} d={d}");
            assert!(exact.im.abs() < 1e-12);
        }
    }
}

#[test]
fn rational_extraction() {
    // ζ + ζ² + … + ζ^{n-1} = -1
    for n in 2..=30u64 {
        let mut hist = vec![1i64; n as usize];
        hist[0] = 0;
        let sum = CycNum::from_root_histogram(n, &hist);
        assert_eq!(sum.extract_rational().unwrap(), Rational::from_integer((-1).into()));
    }
    assert!(CycNum::root_power(5, 1).extract_rational().is_err());
}
