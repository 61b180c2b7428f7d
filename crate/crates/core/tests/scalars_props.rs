use num_bigint::BigInt;
use proptest::prelude::*;

use qybe::scalars::{
    evaluate, parse_scalar, render_scalar, rho, LaurentPoly, QPoint, QScalar, QuarterExponent, RationalFunction,
};

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-8i64..=8, -5i64..=5), 1..4)
        .prop_map(|terms| LaurentPoly::from_terms(terms.into_iter().map(|(e, c)| (e, BigInt::from(c)))))
}

fn nonzero_poly() -> impl Strategy<Value = LaurentPoly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn rational() -> impl Strategy<Value = RationalFunction> {
    (poly(), nonzero_poly()).prop_map(|(n, d)| RationalFunction::new(n, d).unwrap())
}

/// `1`, `sqrt([2])` or `sqrt([3])`.
fn radical() -> impl Strategy<Value = QScalar> {
    (1i64..=3).prop_map(|t| if t == 1 { QScalar::one() } else { QScalar::qint(t).sqrt().unwrap() })
}

fn single() -> impl Strategy<Value = QScalar> {
    (rational(), radical()).prop_map(|(r, x)| QScalar::from_rational(r).mul(&x))
}

fn scalar() -> impl Strategy<Value = QScalar> {
    prop::collection::vec(single(), 1..3).prop_map(|v| v.iter().fold(QScalar::zero(), |a, b| a.add(b)))
}

fn close(a: &QScalar, b: &QScalar, at: &QPoint) -> bool {
    let x = at.eval_raw(a).unwrap().to_f64().value();
    let y = at.eval_raw(b).unwrap().to_f64().value();
    (x - y).abs() <= 1e-12 * (1.0 + x.abs().max(y.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.neg().neg(), a.clone());
    }

    #[test]
    fn single_terms_invert(a in single()) {
        prop_assume!(!a.is_zero());
        prop_assert!(a.mul(&a.inv().unwrap()).is_one());
    }

    #[test]
    fn q_dual_is_an_involutive_homomorphism(a in scalar(), b in scalar()) {
        let d = |x: &QScalar| x.q_dual().unwrap();
        prop_assert_eq!(d(&d(&a)), a.clone());
        prop_assert_eq!(d(&a.mul(&b)), d(&a).mul(&d(&b)));
        prop_assert_eq!(d(&a.add(&b)), d(&a).add(&d(&b)));
    }

    #[test]
    fn q_dual_matches_evaluation_at_inverse(a in scalar()) {
        let at = QPoint::new("13/10", 128).unwrap();
        let inv = QPoint::new("10/13", 128).unwrap();
        let x = at.eval_raw(&a.q_dual().unwrap()).unwrap().to_f64().value();
        let y = inv.eval_raw(&a).unwrap().to_f64().value();
        prop_assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()));
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in scalar(), b in scalar()) {
        let at = QPoint::new("1.3", 128).unwrap();
        let ea = at.eval_raw(&a).unwrap();
        let eb = at.eval_raw(&b).unwrap();
        let prod = at.eval_raw(&a.mul(&b)).unwrap();
        let sum = at.eval_raw(&a.add(&b)).unwrap();
        let scale = 1.0 + (ea.to_f64().value() * eb.to_f64().value()).abs();
        prop_assert!((prod - &ea * &eb).to_f64().value().abs() <= 1e-30 * scale);
        let scale = 1.0 + ea.to_f64().value().abs() + eb.to_f64().value().abs();
        prop_assert!((sum - &ea - &eb).to_f64().value().abs() <= 1e-30 * scale);
    }

    #[test]
    fn render_parse_round_trip(a in scalar()) {
        prop_assert_eq!(parse_scalar(&render_scalar(&a)).unwrap(), a);
    }

    #[test]
    fn qint_is_self_dual_and_tends_to_t(t in 1i64..12) {
        let x = QScalar::qint(t);
        prop_assert_eq!(x.q_dual().unwrap(), x.clone());
        let at = QPoint::new("1.000001", 128).unwrap();
        let v = evaluate(&x, &at).unwrap().to_f64();
        prop_assert!((v - t as f64).abs() < 1e-6 * (t * t * t) as f64);
    }

    #[test]
    fn qpow_adds_exponents(a in -40i64..40, b in -40i64..40) {
        let p = |e| QScalar::qpow(QuarterExponent(e));
        prop_assert_eq!(p(a).mul(&p(b)), p(a + b));
        prop_assert!(p(a).mul(&p(-a)).is_one());
    }

    #[test]
    fn rho_matches_t_times_t_plus_one(twice in -20i64..20) {
        // rho(t) = t(t+1) in q; the exponent is stored in u = q^(1/4)
        let t = twice as f64 / 2.0;
        prop_assert_eq!(rho(twice).0 as f64, 4.0 * t * (t + 1.0));
    }

    #[test]
    fn sqrt_squares_back(t in 1i64..6) {
        let x = QScalar::qint(t);
        let r = x.sqrt().unwrap();
        prop_assert_eq!(r.mul(&r), x.clone());
        let at = QPoint::default_point();
        prop_assert!(close(&r.mul(&r), &x, &at));
    }
}
