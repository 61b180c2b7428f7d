//! Named groups of checks, as run by `qybe verify`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::check::{CheckOutcome, Mode, Residual};
use crate::matrix::{FMatrix, Matrix, QMatrix, Ring};
use crate::reduction::{
    all_n, braid_triple_check, entrywise_check, lemma1_check, lemma2_check, lemma2_params, lemma3_check,
    render_coefficients, sixth_power_check, tl_bwm_span_check, Orientation, ReductionError, Relation,
};
use crate::rep::{make_rep, Generator, Rep, RepError, Spin};
use crate::rmatrix::{
    braid, braid_inverse, family, universal_r, xis, BraidOperator, RMatrixError, RSign,
};
use crate::scalars::{QScalar, QuarterExponent, ScalarError};
use crate::sixj::{racah_grid, racah_identity_check, RacahForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("n = {n} is not used by suite {suite} at s = {spin}")]
    InvalidN { suite: Suite, spin: Spin, n: usize },
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    RMatrix(#[from] RMatrixError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Lemma1,
    Lemma2,
    Lemma3,
    Racah,
    Ybe,
    Spectral,
    Tlbwm,
    All,
}

impl Suite {
    /// Every suite except `All`, in the order `All` runs them.
    pub const EACH: [Suite; 7] =
        [Suite::Spectral, Suite::Ybe, Suite::Lemma1, Suite::Lemma2, Suite::Tlbwm, Suite::Lemma3, Suite::Racah];

    pub fn id(self) -> &'static str {
        match self {
            Suite::Lemma1 => "lemma1",
            Suite::Lemma2 => "lemma2",
            Suite::Lemma3 => "lemma3",
            Suite::Racah => "racah",
            Suite::Ybe => "ybe",
            Suite::Spectral => "spectral",
            Suite::Tlbwm => "tlbwm",
            Suite::All => "all",
        }
    }

    /// The `n` values the suite iterates over, or `None` if it does not
    /// depend on `n`.
    fn n_domain(self, s: Spin) -> Option<Vec<usize>> {
        let t = s.twice() as usize;
        match self {
            Suite::Lemma1 => Some(all_n(s)),
            Suite::Lemma2 | Suite::Lemma3 => Some((1..=t).collect()),
            Suite::Tlbwm => Some((1..=t.min(3)).collect()),
            _ => None,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Suite {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, VerifyError> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.id() == s)
            .ok_or_else(|| VerifyError::UnknownSuite(s.to_string()))
    }
}

fn base(check: &str, s: Spin, mode: &Mode, r: &Residual) -> CheckOutcome {
    let out = CheckOutcome::from_residual(check, r).param("spin", s.to_string()).param("mode", mode.name());
    match mode {
        Mode::Exact => out,
        Mode::Numeric(at) => out.param("q", at.label()).param("precision", at.precision()),
    }
}

/// Checks that are exact identities regardless of the requested mode.
fn exact_only(check: &str, s: Spin, pass: bool) -> CheckOutcome {
    CheckOutcome::new(check, pass).param("spin", s.to_string()).param("mode", "exact")
}

/// Exact operands, or their values at a point; numeric residuals are
/// computed from the evaluated operands.
enum Operands {
    Exact,
    Numeric(crate::scalars::QPoint),
}

impl Operands {
    fn of(mode: &Mode) -> Self {
        match mode {
            Mode::Exact => Operands::Exact,
            Mode::Numeric(at) => Operands::Numeric(at.clone()),
        }
    }

    fn eval(&self, m: &QMatrix) -> Result<FMatrix, ScalarError> {
        match self {
            Operands::Exact => unreachable!("exact operands are not evaluated"),
            Operands::Numeric(at) => m.evaluate(at),
        }
    }

    /// Applies `f` to the operands in exact or numeric arithmetic.
    fn residual<const K: usize>(
        &self,
        ops: [&QMatrix; K],
        scalars: &[QScalar],
        f: &(dyn Fn(&[Matrix<QScalar>], &[QScalar]) -> QMatrix + Sync),
        g: &(dyn Fn(&[FMatrix], &[crate::scalars::Float]) -> FMatrix + Sync),
    ) -> Result<Residual, ScalarError> {
        Ok(match self {
            Operands::Exact => {
                let ms: Vec<QMatrix> = ops.iter().map(|m| (*m).clone()).collect();
                Residual::Exact(f(&ms, scalars))
            }
            Operands::Numeric(at) => {
                let ms: Vec<FMatrix> = ops.iter().map(|m| self.eval(m)).collect::<Result<_, _>>()?;
                let cs = scalars.iter().map(|c| at.eval_raw(c)).collect::<Result<Vec<_>, _>>()?;
                Residual::Numeric { matrix: g(&ms, &cs), at: at.clone() }
            }
        })
    }
}

/// Writes the same closure body once for both scalar types.
macro_rules! both {
    (|$m:ident, $c:ident| $body:expr) => {
        (
            &|$m: &[QMatrix], $c: &[QScalar]| -> QMatrix { $body },
            &|$m: &[FMatrix], $c: &[crate::scalars::Float]| -> FMatrix { $body },
        )
    };
}

fn uq_relations<T: Ring>(xp: &Matrix<T>, xm: &Matrix<T>, k: &Matrix<T>, kinv: &Matrix<T>, q: &T, qinv: &T) -> Vec<(&'static str, Matrix<T>)> {
    let id = Matrix::<T>::identity(xp.rows());
    let comm = xp.mul(xm).sub(&xm.mul(xp)).scale(&q.sub(qinv));
    let k2 = k.mul(k).sub(&kinv.mul(kinv));
    vec![
        ("commutator", comm.sub(&k2)),
        ("qh_xplus", k.mul(xp).sub(&xp.mul(k).scale(q))),
        ("qh_xminus", k.mul(xm).sub(&xm.mul(k).scale(qinv))),
        ("qh_qh_inv", k.mul(kinv).sub(&id)),
        ("qh_inv_qh", kinv.mul(k).sub(&id)),
    ]
}

fn uq_level(rep: &Rep, level: usize) -> [QMatrix; 4] {
    Generator::ALL.map(|g| match level {
        1 => rep.generator(g).clone(),
        2 => rep.coproduct(g),
        _ => rep.triple_action(g),
    })
}

fn spectral_suite(s: Spin, mode: &Mode) -> Result<Vec<CheckOutcome>, VerifyError> {
    let ops = Operands::of(mode);
    let rep = make_rep(s);
    let mut out = Vec::new();
    let q = QScalar::qpow(QuarterExponent(4));
    let qinv = QScalar::qpow(QuarterExponent(-4));
    for level in 1..=3 {
        let [xp, xm, k, kinv] = uq_level(&rep, level);
        let rels: Vec<(&str, Residual)> = match &ops {
            Operands::Exact => uq_relations(&xp, &xm, &k, &kinv, &q, &qinv)
                .into_iter()
                .map(|(name, m)| (name, Residual::Exact(m)))
                .collect(),
            Operands::Numeric(at) => {
                let ev = |m: &QMatrix| m.evaluate(at);
                uq_relations(&ev(&xp)?, &ev(&xm)?, &ev(&k)?, &ev(&kinv)?, &at.eval_raw(&q)?, &at.eval_raw(&qinv)?)
                    .into_iter()
                    .map(|(name, m)| (name, Residual::Numeric { matrix: m, at: at.clone() }))
                    .collect()
            }
        };
        for (name, r) in rels {
            out.push(base("uq_relation", s, mode, &r).param("relation", name).param("tensor_power", level));
        }
    }

    let fam = family(s, crate::rep::Frame::Omega);
    let ps = &fam.projectors;
    let t = s.twice() as usize;
    for i in 0..=t {
        for j in 0..=t {
            let r = if i == j {
                let (f, g) = both!(|m, _c| m[0].mul(&m[0]).sub(&m[0]));
                ops.residual([&ps[i]], &[], f, g)?
            } else {
                let (f, g) = both!(|m, _c| m[0].mul(&m[1]));
                ops.residual([&ps[i], &ps[j]], &[], f, g)?
            };
            out.push(
                base(if i == j { "projector_idempotent" } else { "projector_orthogonal" }, s, mode, &r)
                    .param("j", (t - i) as u64)
                    .param("j_prime", (t - j) as u64),
            );
        }
    }
    let sum_exact = ps.iter().fold(QMatrix::zeros(ps[0].rows(), ps[0].rows()), |a, p| a.add(p));
    let (f, g) = both!(|m, _c| m[0].sub(&Matrix::identity(m[0].rows())));
    out.push(base("projector_complete", s, mode, &ops.residual([&sum_exact], &[], f, g)?));
    for (k, p) in ps.iter().enumerate() {
        let j = (t - k) as i64;
        let expected = QScalar::from_int(2 * j + 1);
        let (f, g) = both!(|m, c| {
            let tr = m[0].trace().sub(&c[0]);
            Matrix::from_fn(1, 1, |_, _| tr.clone())
        });
        out.push(base("projector_trace", s, mode, &ops.residual([p], &[expected], f, g)?).param("j", j));
    }
    let br = &fam.braid;
    let x = xis(s);
    let resolution = ps.iter().zip(&x).fold(QMatrix::zeros(br.rows(), br.rows()), |a, (p, c)| a.add(&p.scale(c)));
    let (f, g) = both!(|m, _c| m[0].sub(&m[1]));
    out.push(base("spectral_resolution", s, mode, &ops.residual([&resolution, br], &[], f, g)?));

    for (name, m) in std::iter::once(("braid".to_string(), br)).chain(ps.iter().enumerate().map(|(k, p)| (format!("P^{}", t - k), p))) {
        for gen in Generator::ALL {
            let d = rep.coproduct(gen);
            let (f, g) = both!(|m, _c| m[0].mul(&m[1]).sub(&m[1].mul(&m[0])));
            let r = ops.residual([&d, m], &[], f, g)?;
            out.push(base("invariance", s, mode, &r).param("operator", name.clone()).param("generator", format!("{gen:?}")));
        }
    }

    let flip = QMatrix::flip(s.dim());
    let rp = universal_r(s, RSign::Plus);
    let rm = universal_r(s, RSign::Minus);
    let (f, g) = both!(|m, _c| m[0].mul(&m[2]).mul(&m[1]).mul(&m[2]).sub(&Matrix::identity(m[0].rows())));
    out.push(base("r_plus_flip_r_minus_flip", s, mode, &ops.residual([&rp, &rm, &flip], &[], f, g)?));

    if matches!(mode, Mode::Exact) {
        let round_trip = BraidOperator::decompose(s, br.clone())?.and_then(|b| b.spectral) == Some(x);
        out.push(exact_only("decompose_round_trip", s, round_trip));
    }
    Ok(out)
}

fn ybe_suite(s: Spin, mode: &Mode) -> Result<Vec<CheckOutcome>, VerifyError> {
    let ops = Operands::of(mode);
    let t = s.twice() as i64;
    let b = braid(s).matrix;
    let bi = braid_inverse(s).matrix;
    let scaled = bi.scale(&QScalar::qpow(QuarterExponent(4 * t * t)));
    let flip = QMatrix::flip(s.dim());
    let d = s.dim();
    let candidates = [("braid", &b), ("braid_inverse", &bi), ("braid_inverse_scaled", &scaled), ("flip", &flip)];
    let mut out: Vec<CheckOutcome> = candidates
        .par_iter()
        .map(|(name, m)| {
            let (f, g) = both!(|m, _c| {
                let id = Matrix::identity(d);
                let m12 = m[0].kron(&id);
                let m23 = id.kron(&m[0]);
                m12.mul(&m23).mul(&m12).sub(&m23.mul(&m12).mul(&m23))
            });
            Ok(base("braid_relation", s, mode, &ops.residual([*m], &[], f, g)?).param("operator", *name))
        })
        .collect::<Result<_, ScalarError>>()?;
    let (f, g) = both!(|m, _c| m[0].mul(&m[1]).sub(&Matrix::identity(m[0].rows())));
    out.push(base("braid_times_inverse", s, mode, &ops.residual([&b, &bi], &[], f, g)?));
    Ok(out)
}

fn lemma1_suite(s: Spin, ns: &[usize], mode: &Mode) -> Result<Vec<CheckOutcome>, VerifyError> {
    let per_n: Vec<Vec<CheckOutcome>> = ns
        .par_iter()
        .map(|&n| {
            let p = |o: CheckOutcome| o.param("n", n);
            let mut v = vec![p(base("lemma1", s, mode, &lemma1_check(s, n, mode)?))];
            for ord in Orientation::BOTH {
                v.push(p(base("braid_triple", s, mode, &braid_triple_check(s, n, ord, mode)?)).param("orientation", ord.id()));
            }
            for ord in Orientation::BOTH {
                v.push(p(base("sixth_power", s, mode, &sixth_power_check(s, n, ord, mode)?)).param("orientation", ord.id()));
            }
            v.push(p(base("lemma1_entrywise", s, mode, &entrywise_check(s, n, mode)?)));
            Ok(v)
        })
        .collect::<Result<_, ReductionError>>()?;
    Ok(per_n.into_iter().flatten().collect())
}

fn lemma2_suite(s: Spin, ns: &[usize], mode: &Mode) -> Result<Vec<CheckOutcome>, VerifyError> {
    let params: Vec<(usize, usize)> = lemma2_params(s).into_iter().filter(|(n, _)| ns.contains(n)).collect();
    let per: Vec<Vec<CheckOutcome>> = params
        .par_iter()
        .map(|&(n, m)| {
            let mut v = Vec::new();
            for rel in Relation::ALL {
                for ord in Orientation::BOTH {
                    let r = lemma2_check(s, n, m, rel, ord, mode)?;
                    v.push(
                        base("lemma2", s, mode, &r)
                            .param("n", n)
                            .param("m", m)
                            .param("relation", rel.id())
                            .param("orientation", ord.id()),
                    );
                }
            }
            Ok(v)
        })
        .collect::<Result<_, ReductionError>>()?;
    Ok(per.into_iter().flatten().collect())
}

fn tlbwm_suite(s: Spin, ns: &[usize]) -> Result<Vec<CheckOutcome>, VerifyError> {
    let mut out = Vec::new();
    for &n in ns {
        let rep = tl_bwm_span_check(s, n)?;
        let (name, pass) = match n {
            1 => ("temperley_lieb_span", rep.in_span()),
            2 => ("bwm_span", rep.in_span()),
            _ => ("bwm_span_fails", !rep.in_span()),
        };
        let mut o = exact_only(name, s, pass).param("n", n).param("projector_m", rep.m);
        for item in &rep.items {
            let coeffs = render_coefficients(&item.coefficients);
            o = o.param(
                &format!("{}_in_span_of", item.target),
                serde_json::json!({ "spanning": item.spanning, "coefficients": coeffs }),
            );
        }
        out.push(o);
    }
    Ok(out)
}

fn lemma3_suite(s: Spin, ns: &[usize]) -> Result<Vec<CheckOutcome>, VerifyError> {
    let per: Vec<Vec<CheckOutcome>> =
        ns.par_iter().map(|&n| lemma3_check(s, n)).collect::<Result<_, ReductionError>>()?;
    Ok(per.into_iter().flatten().map(|o| o.param("mode", "exact")).collect())
}

/// The Racah identity on every admissible tuple with entries at most `s`,
/// for both signs of `ρ`, and the printed right-hand side on its
/// `r1 = r2 = r3` family.
fn racah_suite(s: Spin) -> Vec<CheckOutcome> {
    let grid = racah_grid(s.twice());
    let mut out = Vec::new();
    let variants = [(RacahForm::General, 1i64), (RacahForm::General, -1), (RacahForm::Printed, 1), (RacahForm::Printed, -1)];
    for (form, sign) in variants {
        let tuples: Vec<_> = grid
            .iter()
            .filter(|(r, _, _)| form == RacahForm::General || (r[0] == r[1] && r[1] == r[2]))
            .collect();
        let failures: Vec<String> = tuples
            .par_iter()
            .filter(|(r, l, lp)| !racah_identity_check(*r, *l, *lp, sign, form).is_some_and(|x| x.is_zero()))
            .map(|(r, l, lp)| format!("twice (r1..r4, l, l') = ({}, {}, {}, {}, {}, {})", r[0], r[1], r[2], r[3], l, lp))
            .collect();
        let name = match form {
            RacahForm::General => "racah",
            RacahForm::Printed => "racah_printed_family",
        };
        let mut o = exact_only(name, s, failures.is_empty())
            .param("rho_sign", sign)
            .param("tuples", tuples.len())
            .param("max_twice_entry", s.twice());
        if let Some(w) = failures.first() {
            o = o.with_witness(w.clone());
        }
        out.push(o);
    }
    out
}

fn domain(suite: Suite, s: Spin, n: Option<usize>) -> Result<Vec<usize>, VerifyError> {
    let all = suite.n_domain(s).unwrap_or_default();
    match n {
        None => Ok(all),
        Some(n) if all.contains(&n) => Ok(vec![n]),
        Some(n) => Err(VerifyError::InvalidN { suite, spin: s, n }),
    }
}

/// Runs one suite. With `n` given, `n`-dependent suites are restricted to
/// it; `All` skips the `n`-dependent suites that do not use that `n`.
pub fn run_suite(suite: Suite, s: Spin, n: Option<usize>, mode: &Mode) -> Result<Vec<CheckOutcome>, VerifyError> {
    if suite == Suite::All {
        let mut out = Vec::new();
        for one in Suite::EACH {
            let used = one.n_domain(s).map_or(true, |d| n.map_or(true, |n| d.contains(&n)));
            if used {
                out.extend(run_suite(one, s, n, mode)?);
            }
        }
        return Ok(out);
    }
    let ns = domain(suite, s, n)?;
    match suite {
        Suite::Spectral => spectral_suite(s, mode),
        Suite::Ybe => ybe_suite(s, mode),
        Suite::Lemma1 => lemma1_suite(s, &ns, mode),
        Suite::Lemma2 => lemma2_suite(s, &ns, mode),
        Suite::Tlbwm => tlbwm_suite(s, &ns),
        Suite::Lemma3 => lemma3_suite(s, &ns),
        Suite::Racah => Ok(racah_suite(s)),
        Suite::All => unreachable!(),
    }
}
