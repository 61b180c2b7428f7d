use proptest::prelude::*;
use qybe::classify::{
    enumerate_numeric, full_ybe_residual, n1_cubic, prove_proposition1, reduced_ybe_all, step_force, Base,
    EnumerateOptions, SpectralVector, Verdict,
};
use qybe::matrix::{residual_norm, QMatrix};
use qybe::rep::Spin;
use qybe::rmatrix::braid_relation_residual;
use qybe::scalars::{QPoint, QScalar, QuarterExponent};

fn spin(t: u32) -> Spin {
    Spin::from_twice(t).unwrap()
}

/// `Σ (-1)^k P^{2s-k}`, the flip only at `q = 1`.
fn alternating(s: Spin) -> SpectralVector {
    let r = (0..s.dim()).map(|k| QScalar::from_int(if k % 2 == 0 { 1 } else { -1 })).collect();
    SpectralVector::new(s, r).unwrap()
}

#[test]
fn known_solutions_satisfy_the_full_relation() {
    for t in 1..=3 {
        let s = spin(t);
        for v in [SpectralVector::drinfeld(s), SpectralVector::inverse_scaled(s), SpectralVector::constant(s)] {
            assert!(full_ybe_residual(&v.operator()).is_zero(), "s={s} {:?}", v.r);
            assert!(reduced_ybe_all(&v).unwrap());
        }
        assert!(braid_relation_residual(s, &QMatrix::flip(s.dim())).is_zero());
        assert!(!reduced_ybe_all(&alternating(s)).unwrap());
    }
}

#[test]
fn small_perturbation_breaks_the_relation() {
    let s = spin(2);
    let mut v = SpectralVector::drinfeld(s).normalized().unwrap();
    v.r[2] = v.r[2].add(&QScalar::from_int(1).div(&QScalar::from_int(1000)).unwrap());
    assert!(!reduced_ybe_all(&v).unwrap());
    let res = residual_norm(&full_ybe_residual(&v.operator()), &QPoint::default_point()).unwrap();
    assert!(res.to_f64().value() > 1e-6);
}

#[test]
fn n1_roots_at_spin_one() {
    let s = spin(2);
    let c = n1_cubic(s).unwrap();
    assert!(c.roots_match && c.substitution_zero);
    // q^{-2}(1 - q^8) and q^{-2}(1 + q^4)
    let qp = |e: i64| QScalar::qpow(QuarterExponent(e));
    assert_eq!(c.closed_form[1], qp(-8).sub(&qp(24)));
    assert_eq!(c.closed_form[2], qp(-8).add(&qp(8)));
    let d = SpectralVector::drinfeld(s);
    assert_eq!(d.r[1].add(&c.closed_form[1]), SpectralVector::inverse_scaled(s).r[1]);
    assert_eq!(d.r[1].add(&c.closed_form[2]), d.r[0]);
    let forced = step_force(s, 1, Base::Drinfeld).unwrap().forced;
    assert_eq!(forced.len(), 3);
    assert!(c.closed_form.iter().all(|g| forced.contains(g)));
}

#[test]
fn higher_steps_force_zero_at_spin_two() {
    let s = spin(4);
    for base in [Base::Drinfeld, Base::Inverse] {
        for n in 2..=4 {
            let f = step_force(s, n, base).unwrap();
            assert!(f.substitution_zero);
            assert_eq!(f.forced, vec![QScalar::zero()], "n={n} {base:?}");
        }
    }
}

#[test]
fn certificates_are_valid() {
    for t in 1..=3 {
        let c = prove_proposition1(spin(t)).unwrap();
        assert!(c.valid, "s={}", spin(t));
        assert!(c.steps.iter().all(|o| o.passed()));
    }
}

#[test]
fn enumeration_is_deterministic_and_finds_both_families() {
    let s = spin(2);
    let at = QPoint::default_point();
    let opts = EnumerateOptions { attempts: 60, ..Default::default() };
    let a = enumerate_numeric(s, &at, &opts).unwrap();
    let b = enumerate_numeric(s, &at, &opts).unwrap();
    assert_eq!(serde_json::to_value(a.report()).unwrap(), serde_json::to_value(b.report()).unwrap());
    assert!(a.has(Verdict::Drinfeld));
    assert!(a.has(Verdict::DrinfeldInverseScaled));
    assert!(a.has_identity());
    assert!(a.consistent());
    for sol in &a.solutions {
        assert!(sol.full_residual.to_f64().value() < opts.full_ybe_tol);
    }
}

fn entry() -> impl Strategy<Value = QScalar> {
    (-2i64..=2, -8i64..=8).prop_map(|(c, e)| QScalar::from_int(c).mul(&QScalar::qpow(QuarterExponent(e))))
}

fn candidate() -> impl Strategy<Value = SpectralVector> {
    // a known solution with some entries replaced, or left intact
    (1u32..=2, 0usize..4, prop::collection::vec(prop::option::of(entry()), 3)).prop_map(|(t, which, repl)| {
        let s = spin(t);
        let mut v = match which {
            0 => SpectralVector::drinfeld(s),
            1 => SpectralVector::inverse_scaled(s),
            2 => SpectralVector::constant(s),
            _ => alternating(s),
        };
        for (k, x) in repl.into_iter().enumerate().skip(1).take(t as usize) {
            if let Some(x) = x {
                v.r[k] = x;
            }
        }
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn reduced_relations_on_all_n_match_the_full_relation(v in candidate()) {
        prop_assert_eq!(reduced_ybe_all(&v).unwrap(), full_ybe_residual(&v.operator()).is_zero());
    }
}
