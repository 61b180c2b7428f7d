use qybe::check::Mode;
use qybe::matrix::QMatrix;
use qybe::reduction::{
    abg_determinant_formula, abg_system, all_n, braid_triple_check, lemma1_check, lemma2_check,
    lemma2_dependency_defect, lemma2_params, q_one_defect, reduced_ops, reduction_cross_check, theta, wn_ops,
    xixi_exponent, xixi_holds, Orientation, Relation,
};
use qybe::rep::{make_rep, wn_basis, Frame, Spin};
use qybe::rmatrix::family;
use qybe::scalars::{QPoint, QScalar};
use qybe::sixj::a_matrix;

fn spins(max_twice: u32) -> impl Iterator<Item = Spin> {
    (1..=max_twice).map(|t| Spin::from_twice(t).unwrap())
}

#[test]
fn reduced_operators_match_full_space_restrictions() {
    for s in spins(2) {
        for (n, m) in lemma2_params(s) {
            let ops = reduced_ops(s, n, m).unwrap();
            assert!(reduction_cross_check(&ops).unwrap(), "s={s} n={n} m={m}");
        }
    }
}

#[test]
fn full_space_triple_product_reduces_to_theta_a() {
    for s in spins(3) {
        // the coupled basis reduces operators written in the rational frame
        let b = family(s, Frame::Gauge).braid.clone();
        let id = QMatrix::identity(s.dim());
        let (b12, b23) = (b.kron(&id), id.kron(&b));
        let triple = b12.mul(&b23).mul(&b12);
        let rep = make_rep(s);
        for n in all_n(s) {
            let reduced = wn_basis(&rep, n).unwrap().reduce(&triple).unwrap();
            let want = a_matrix(s, n).unwrap().entries.scale(&theta(s, n));
            assert_eq!(reduced, want, "s={s} n={n}");
        }
    }
}

#[test]
fn diagonal_operators_invert() {
    for s in spins(4) {
        for n in all_n(s) {
            let o = wn_ops(s, n).unwrap();
            let id = QMatrix::identity(o.k_range.len());
            assert_eq!(o.d0.mul(&o.d0_inv), id);
            assert_eq!(o.dhat.mul(&o.dhat_inv), id);
            assert!(o.theta.mul(&o.theta_inv).is_one());
        }
    }
}

#[test]
fn exact_relations_on_every_n() {
    for s in spins(3) {
        for n in all_n(s) {
            assert!(lemma1_check(s, n, &Mode::Exact).unwrap().passes(), "s={s} n={n}");
            for ord in Orientation::BOTH {
                assert!(braid_triple_check(s, n, ord, &Mode::Exact).unwrap().passes());
            }
        }
        for (n, m) in lemma2_params(s) {
            for rel in Relation::ALL {
                for ord in Orientation::BOTH {
                    let r = lemma2_check(s, n, m, rel, ord, &Mode::Exact).unwrap();
                    assert!(r.passes(), "s={s} n={n} m={m} {}", rel.id());
                }
            }
        }
    }
}

#[test]
fn derived_relation_follows_from_the_others() {
    let at = QPoint::default_point();
    for s in spins(4) {
        for (n, m) in lemma2_params(s) {
            if let Some(d) = lemma2_dependency_defect(s, n, m, &at).unwrap() {
                assert!(d.to_f64().value() < 1e-30, "s={s} n={n} m={m}");
            }
        }
    }
}

#[test]
fn triple_product_tends_to_signed_a() {
    for s in spins(4) {
        for n in all_n(s) {
            assert!(q_one_defect(s, n, 8).unwrap().to_f64().value() < 1e-6, "s={s} n={n}");
        }
    }
}

#[test]
fn xixi_identity_and_exponent_agree() {
    for s in spins(6) {
        for n in 1..=s.twice() as usize {
            assert_eq!(xixi_holds(s, n), xixi_exponent(s, n) == 0, "s={s} n={n}");
        }
    }
}

fn det3(m: &QMatrix) -> QScalar {
    let mut out = QScalar::zero();
    for (p, neg) in [([0, 1, 2], false), ([1, 2, 0], false), ([2, 0, 1], false), ([0, 2, 1], true), ([2, 1, 0], true), ([1, 0, 2], true)] {
        let t = m.get(0, p[0]).mul(m.get(1, p[1])).mul(m.get(2, p[2]));
        out = if neg { out.sub(&t) } else { out.add(&t) };
    }
    out
}

#[test]
fn abg_determinant_has_the_closed_form() {
    for s in spins(4) {
        for n in 1..=s.twice() as usize {
            assert_eq!(det3(&abg_system(s, n)), abg_determinant_formula(s, n), "s={s} n={n}");
        }
    }
}

#[test]
fn out_of_range_parameters_are_rejected() {
    let s = Spin::from_twice(2).unwrap();
    assert!(reduced_ops(s, 0, 0).is_err());
    assert!(reduced_ops(s, 1, 3).is_err());
    assert!(wn_ops(s, s.max_n() + 1).is_err());
}
