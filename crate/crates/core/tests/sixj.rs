use proptest::prelude::*;
use qybe::rep::Spin;
use qybe::scalars::QPoint;
use qybe::sixj::{a_matrix, a_matrix_from_basis, qsixj, tetrahedral_images, triad, SixJArgs};

fn fact(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Classical Racah formula in `f64`; arguments are twice the spins.
fn classical_sixj(t: [u32; 6]) -> f64 {
    let [a, b, c, d, e, f] = t;
    let delta = |x: u32, y: u32, z: u32| {
        (fact((x + y - z) / 2) * fact((x + z - y) / 2) * fact((y + z - x) / 2) / fact((x + y + z) / 2 + 1)).sqrt()
    };
    let lows = [a + b + c, a + e + f, d + b + f, d + e + c].map(|x| x / 2);
    let highs = [a + b + d + e, b + c + e + f, c + a + f + d].map(|x| x / 2);
    let lo = *lows.iter().max().unwrap();
    let hi = *highs.iter().min().unwrap();
    let mut sum = 0.0;
    for z in lo..=hi {
        let mut den = 1.0;
        for x in lows {
            den *= fact(z - x);
        }
        for x in highs {
            den *= fact(x - z);
        }
        let sign = if z % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * fact(z + 1) / den;
    }
    sum * delta(a, b, c) * delta(a, e, f) * delta(d, b, f) * delta(d, e, c)
}

fn admissible_grid(max_twice: u32) -> Vec<SixJArgs> {
    let r = 0..=max_twice;
    let mut out = Vec::new();
    for a in r.clone() {
        for b in r.clone() {
            for c in r.clone() {
                if !triad(a, b, c) {
                    continue;
                }
                for d in r.clone() {
                    for e in r.clone() {
                        for f in r.clone() {
                            let x = SixJArgs([a, b, c, d, e, f]);
                            if x.admissible() {
                                out.push(x);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

#[test]
fn classical_limit_matches_racah_formula() {
    let at = QPoint::new("1.0000001", 128).unwrap();
    let grid = admissible_grid(3);
    assert!(grid.len() > 100);
    for x in grid {
        let v = at.eval_raw(&qsixj(x)).unwrap().to_f64().value();
        let want = classical_sixj(x.0);
        assert!((v - want).abs() < 1e-5, "{:?}: {v} vs {want}", x.0);
    }
}

#[test]
fn inadmissible_symbols_vanish() {
    assert!(qsixj(SixJArgs([2, 2, 6, 2, 2, 2])).is_zero());
    assert!(qsixj(SixJArgs([1, 1, 1, 1, 1, 1])).is_zero());
}

#[test]
fn a_matrix_is_a_symmetric_self_dual_involution() {
    for t in 1..=4 {
        let s = Spin::from_twice(t).unwrap();
        for n in 0..=s.max_n() {
            let a = a_matrix(s, n).unwrap();
            assert!(a.is_symmetric(), "s={t}/2 n={n}");
            assert!(a.is_involution(), "s={t}/2 n={n}");
            assert!(a.is_self_dual().unwrap(), "s={t}/2 n={n}");
        }
    }
}

#[test]
fn a_matrix_agrees_with_basis_overlap() {
    for t in 1..=3 {
        let s = Spin::from_twice(t).unwrap();
        for n in 0..=s.max_n() {
            assert_eq!(a_matrix(s, n).unwrap().entries, a_matrix_from_basis(s, n).unwrap().entries, "s={t}/2 n={n}");
        }
    }
}

#[test]
fn a_matrix_rejects_large_n() {
    let s = Spin::from_twice(2).unwrap();
    assert!(a_matrix(s, s.max_n() + 1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tetrahedral_images_share_the_value(idx in 0usize..10_000) {
        let grid = admissible_grid(4);
        let x = grid[idx % grid.len()];
        let v = qsixj(x);
        let images = tetrahedral_images(x);
        prop_assert_eq!(images.len(), 24);
        for img in images {
            prop_assert!(img.admissible());
            prop_assert_eq!(qsixj(img), v.clone());
        }
    }
}
