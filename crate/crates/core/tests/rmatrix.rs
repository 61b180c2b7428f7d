use proptest::prelude::*;
use qybe::matrix::QMatrix;
use qybe::rep::{hw_space, make_rep, Generator, Spin};
use qybe::rmatrix::{
    braid, braid_inverse, invariance_residuals, projectors, q_one_permutation_defect, universal_r, xis,
    BraidOperator, RSign,
};
use qybe::scalars::{QScalar, QuarterExponent};

fn spins(max_twice: u32) -> impl Iterator<Item = Spin> {
    (1..=max_twice).map(|t| Spin::from_twice(t).unwrap())
}

#[test]
fn highest_weight_vectors_are_eigenvectors() {
    for s in spins(3) {
        let rep = make_rep(s);
        let b = braid(s).matrix;
        let ps = projectors(s).unwrap().projectors;
        let x = xis(s);
        let t = s.twice() as i64;
        for k in 0..=s.twice() as usize {
            let hw = hw_space(&rep, 2, 2 * (t - k as i64)).unwrap();
            assert_eq!(hw.len(), 1, "s={t}/2 k={k}");
            let v = &hw[0];
            assert!(rep.coproduct(Generator::XPlus).mul_vec(v).iter().all(QScalar::is_zero));
            let scaled: Vec<QScalar> = v.iter().map(|c| c.mul(&x[k])).collect();
            assert_eq!(b.mul_vec(v), scaled, "s={t}/2 k={k}");
            for (j, p) in ps.iter().enumerate() {
                let img = p.mul_vec(v);
                if j == k {
                    assert_eq!(&img, v);
                } else {
                    assert!(img.iter().all(QScalar::is_zero));
                }
            }
        }
    }
}

#[test]
fn projector_traces_are_multiplet_dimensions() {
    for s in spins(4) {
        let t = s.twice() as i64;
        for (k, p) in projectors(s).unwrap().projectors.iter().enumerate() {
            assert_eq!(p.trace(), QScalar::from_int(2 * (t - k as i64) + 1));
        }
    }
}

#[test]
fn spectral_inverse_matches_the_opposite_series() {
    for s in spins(3) {
        let series = QMatrix::flip(s.dim()).mul(&universal_r(s, RSign::Minus));
        assert_eq!(braid_inverse(s).matrix, series);
        assert_eq!(braid(s).matrix.mul(&series), QMatrix::identity(s.dim() * s.dim()));
    }
}

#[test]
fn braid_operators_commute_with_the_coproduct() {
    for s in spins(3) {
        let rep = make_rep(s);
        for m in [braid(s).matrix, braid_inverse(s).matrix] {
            for (g, r) in invariance_residuals(&rep, &m) {
                assert!(r.is_zero(), "{g:?}");
            }
        }
    }
}

#[test]
fn classical_limit_is_the_flip() {
    for s in spins(4) {
        let (b, bi) = q_one_permutation_defect(s, 8).unwrap();
        assert!(b.to_f64().value() < 1e-6);
        assert!(bi.to_f64().value() < 1e-6);
    }
}

fn coefficient() -> impl Strategy<Value = QScalar> {
    (-3i64..=3, -6i64..=6).prop_map(|(c, e)| QScalar::from_int(c).mul(&QScalar::qpow(QuarterExponent(e))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn decompose_recovers_spectral_coefficients(
        twice in 1u32..=3,
        r in prop::collection::vec(coefficient(), 4),
    ) {
        let s = Spin::from_twice(twice).unwrap();
        let r: Vec<QScalar> = r.into_iter().take(twice as usize + 1).collect();
        let op = BraidOperator::from_spectral(s, r.clone());
        let back = BraidOperator::decompose(s, op.matrix).unwrap().unwrap();
        prop_assert_eq!(back.spectral.unwrap(), r);
    }
}
