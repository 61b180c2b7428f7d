//! Braid operators and projectors reduced onto `W_n` in the (12)-coupled
//! basis, and the identities they satisfy there.
//!
//! On `W_n` the operator `Ř_12` is `D_0 = diag(ξ_k)`, `Ř_23` is
//! `Dhat = A D_0 A`, `P^m_12` is the elementary matrix `π` at `k = 2s - m`
//! and `P^m_23` is `A π A`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::check::{CheckOutcome, Mode, Residual};
use crate::linalg::{rank, solve_combination};
use crate::matrix::{FMatrix, Matrix, QMatrix, Ring};
use crate::rep::{k_range, make_rep, wn_basis, Frame, RepError, Spin};
use crate::rmatrix::{family, xi};
use crate::scalars::{render_scalar, rho, Float, QPoint, QScalar, QuarterExponent, ScalarError};
use crate::sixj::{a_matrix, entrywise_lemma1};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("need 2s-m <= n <= 2s, got s = {spin}, n = {n}, m = {m}")]
    InvalidRange { spin: Spin, n: usize, m: usize },
    #[error("need 1 <= n <= {max}, got n = {n}")]
    InvalidN { n: usize, max: usize },
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// `θ_n = (-1)^n q^{ρ(3s-n) - 3ρ(s)}`.
pub fn theta(s: Spin, n: usize) -> QScalar {
    let t = s.twice() as i64;
    let e = rho(3 * t - 2 * n as i64) - rho(t) * 3;
    QScalar::signed_qpow(n % 2 == 1, e)
}

fn qp(e: QuarterExponent) -> QScalar {
    QScalar::qpow(e)
}

/// `D_0`, `A`, their products and `θ_n` on `W_n`, over any entry ring.
#[derive(Debug, Clone)]
pub struct WnOps<T> {
    pub spin: Spin,
    pub n: usize,
    pub k_range: Vec<usize>,
    pub d0: Matrix<T>,
    pub d0_inv: Matrix<T>,
    pub a: Matrix<T>,
    pub dhat: Matrix<T>,
    pub dhat_inv: Matrix<T>,
    pub theta: T,
    pub theta_inv: T,
}

pub fn wn_ops(s: Spin, n: usize) -> Result<WnOps<QScalar>, ReductionError> {
    let a = a_matrix(s, n)?;
    let ks = a.k_range.clone();
    let xs: Vec<QScalar> = ks.iter().map(|&k| xi(s, k).expect("k in range")).collect();
    let xs_inv: Vec<QScalar> = xs.iter().map(|x| x.inv().expect("monomial")).collect();
    let d0 = QMatrix::diagonal(&xs);
    let d0_inv = QMatrix::diagonal(&xs_inv);
    let am = a.entries;
    let dhat = am.mul(&d0).mul(&am);
    let dhat_inv = am.mul(&d0_inv).mul(&am);
    let th = theta(s, n);
    let theta_inv = th.inv()?;
    Ok(WnOps { spin: s, n, k_range: ks, d0, d0_inv, a: am, dhat, dhat_inv, theta: th, theta_inv })
}

impl WnOps<QScalar> {
    pub fn evaluate(&self, at: &QPoint) -> Result<WnOps<Float>, ScalarError> {
        Ok(WnOps {
            spin: self.spin,
            n: self.n,
            k_range: self.k_range.clone(),
            d0: self.d0.evaluate(at)?,
            d0_inv: self.d0_inv.evaluate(at)?,
            a: self.a.evaluate(at)?,
            dhat: self.dhat.evaluate(at)?,
            dhat_inv: self.dhat_inv.evaluate(at)?,
            theta: at.eval_raw(&self.theta)?,
            theta_inv: at.eval_raw(&self.theta_inv)?,
        })
    }
}

/// [`WnOps`] together with the projector pair for `P^m`, `m̄ = 2s - m`.
#[derive(Debug, Clone)]
pub struct ReducedOps<T> {
    pub ops: WnOps<T>,
    pub m: usize,
    pub m_bar: usize,
    /// `π^{(m̄)}`, the restriction of `P^m_12`.
    pub pi_m: Matrix<T>,
    /// `A π A`, the restriction of `P^m_23`.
    pub pi_hat: Matrix<T>,
    /// `η = A_{m̄ m̄}`.
    pub eta: T,
    pub xi_m: T,
    pub xi_m_inv: T,
}

pub fn reduced_ops(s: Spin, n: usize, m: usize) -> Result<ReducedOps<QScalar>, ReductionError> {
    let t = s.twice() as usize;
    if m > t || t - m > n || n > t {
        return Err(ReductionError::InvalidRange { spin: s, n, m });
    }
    let m_bar = t - m;
    let ops = wn_ops(s, n)?;
    let dim = ops.k_range.len();
    // first branch: position in k_range equals k
    let pi_m = QMatrix::from_fn(dim, dim, |i, j| {
        if i == m_bar && j == m_bar {
            QScalar::one()
        } else {
            QScalar::zero()
        }
    });
    let pi_hat = ops.a.mul(&pi_m).mul(&ops.a);
    let eta = ops.a.get(m_bar, m_bar).clone();
    let xi_m = xi(s, m_bar).expect("m̄ <= 2s");
    let xi_m_inv = xi_m.inv()?;
    Ok(ReducedOps { ops, m, m_bar, pi_m, pi_hat, eta, xi_m, xi_m_inv })
}

impl ReducedOps<QScalar> {
    pub fn evaluate(&self, at: &QPoint) -> Result<ReducedOps<Float>, ScalarError> {
        Ok(ReducedOps {
            ops: self.ops.evaluate(at)?,
            m: self.m,
            m_bar: self.m_bar,
            pi_m: self.pi_m.evaluate(at)?,
            pi_hat: self.pi_hat.evaluate(at)?,
            eta: at.eval_raw(&self.eta)?,
            xi_m: at.eval_raw(&self.xi_m)?,
            xi_m_inv: at.eval_raw(&self.xi_m_inv)?,
        })
    }
}

/// Restricts the full-space `Ř_12`, `Ř_23`, `P^m_12`, `P^m_23` to `W_n`
/// through the coupled basis and compares with `d0`, `dhat`, `pi_m` and
/// `pi_hat`.
pub fn reduction_cross_check(ops: &ReducedOps<QScalar>) -> Result<bool, ReductionError> {
    let s = ops.ops.spin;
    let basis = wn_basis(&make_rep(s), ops.ops.n)?;
    let fam = family(s, Frame::Gauge);
    let id = QMatrix::identity(s.dim());
    let p = &fam.projectors[ops.m_bar];
    Ok(basis.reduce(&fam.braid.kron(&id))? == ops.ops.d0
        && basis.reduce(&id.kron(&fam.braid))? == ops.ops.dhat
        && basis.reduce(&p.kron(&id))? == ops.pi_m
        && basis.reduce(&id.kron(p))? == ops.pi_hat)
}

fn to_residual(mode: &Mode, exact: impl FnOnce() -> Result<QMatrix, ReductionError>, numeric: impl FnOnce(&QPoint) -> Result<FMatrix, ReductionError>) -> Result<Residual, ReductionError> {
    Ok(match mode {
        Mode::Exact => Residual::Exact(exact()?),
        Mode::Numeric(at) => Residual::Numeric { matrix: numeric(at)?, at: at.clone() },
    })
}

fn lemma1_residual<T: Ring>(o: &WnOps<T>) -> Matrix<T> {
    let lhs = o.a.mul(&o.d0).mul(&o.a);
    let rhs = o.d0_inv.mul(&o.a).mul(&o.d0_inv).scale(&o.theta);
    lhs.sub(&rhs)
}

/// `A D_0 A - θ_n D_0^{-1} A D_0^{-1}` on `W_n`, any `n <= ⌊3s⌋`.
pub fn lemma1_check(s: Spin, n: usize, mode: &Mode) -> Result<Residual, ReductionError> {
    let ops = wn_ops(s, n)?;
    to_residual(mode, || Ok(lemma1_residual(&ops)), |at| Ok(lemma1_residual(&ops.evaluate(at)?)))
}

/// Which adjacent pair comes first: `(l, l') = (12, 23)` or `(23, 12)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Orientation {
    #[serde(rename = "12-23")]
    TwelveFirst,
    #[serde(rename = "23-12")]
    TwentyThreeFirst,
}

impl Orientation {
    pub const BOTH: [Orientation; 2] = [Orientation::TwelveFirst, Orientation::TwentyThreeFirst];

    pub fn id(self) -> &'static str {
        match self {
            Orientation::TwelveFirst => "12-23",
            Orientation::TwentyThreeFirst => "23-12",
        }
    }
}

fn triple_residual<T: Ring>(o: &WnOps<T>, ord: Orientation) -> Matrix<T> {
    let prod = match ord {
        Orientation::TwelveFirst => o.d0.mul(&o.dhat).mul(&o.d0),
        Orientation::TwentyThreeFirst => o.dhat.mul(&o.d0).mul(&o.dhat),
    };
    prod.sub(&o.a.scale(&o.theta))
}

/// `(Ř_12 Ř_23 Ř_12)|_{W_n} - θ_n A`, or the other triple product.
pub fn braid_triple_check(s: Spin, n: usize, ord: Orientation, mode: &Mode) -> Result<Residual, ReductionError> {
    let ops = wn_ops(s, n)?;
    to_residual(mode, || Ok(triple_residual(&ops, ord)), |at| Ok(triple_residual(&ops.evaluate(at)?, ord)))
}

/// `q^{2ρ(3s-n) - 6ρ(s)}`.
pub fn sixth_power_scalar(s: Spin, n: usize) -> QScalar {
    let t = s.twice() as i64;
    qp(rho(3 * t - 2 * n as i64) * 2 - rho(t) * 6)
}

fn sixth_residual<T: Ring>(o: &WnOps<T>, c: &T, ord: Orientation) -> Matrix<T> {
    let pair = match ord {
        Orientation::TwelveFirst => o.d0.mul(&o.dhat),
        Orientation::TwentyThreeFirst => o.dhat.mul(&o.d0),
    };
    let id = Matrix::<T>::identity(pair.rows());
    pair.pow(3).sub(&id.scale(c))
}

/// `(Ř_12 Ř_23)^3|_{W_n} - q^{2ρ(3s-n)-6ρ(s)} I`, or with the factors swapped.
pub fn sixth_power_check(s: Spin, n: usize, ord: Orientation, mode: &Mode) -> Result<Residual, ReductionError> {
    let ops = wn_ops(s, n)?;
    let c = sixth_power_scalar(s, n);
    to_residual(
        mode,
        || Ok(sixth_residual(&ops, &c, ord)),
        |at| Ok(sixth_residual(&ops.evaluate(at)?, &at.eval_raw(&c)?, ord)),
    )
}

/// Signs and powers of `q` in the entrywise form of Lemma 1:
/// `(-1)^{n+k+k'} q^{ρ(3s-n)+ρ(s)-ρ(2s-k)-ρ(2s-k')}`.
fn entrywise_coefficients(s: Spin, n: usize, ks: &[usize]) -> QMatrix {
    let t = s.twice() as i64;
    QMatrix::from_fn(ks.len(), ks.len(), |i, j| {
        let (k, kp) = (ks[i] as i64, ks[j] as i64);
        let e = rho(3 * t - 2 * n as i64) + rho(t) - rho(2 * (t - k)) - rho(2 * (t - kp));
        QScalar::signed_qpow((n as i64 + k + kp) % 2 == 1, e)
    })
}

fn hadamard<T: Ring>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    Matrix::from_fn(a.rows(), a.cols(), |i, j| a.get(i, j).mul(b.get(i, j)))
}

/// `Σ_m A_{km} ξ_m A_{k'm}` against its closed form, entry by entry.
pub fn entrywise_check(s: Spin, n: usize, mode: &Mode) -> Result<Residual, ReductionError> {
    let ops = wn_ops(s, n)?;
    let c = entrywise_coefficients(s, n, &ops.k_range);
    match mode {
        Mode::Exact => {
            let a = a_matrix(s, n)?;
            let ks = &a.k_range;
            let m = QMatrix::from_fn(ks.len(), ks.len(), |i, j| entrywise_lemma1(&a, ks[i], ks[j]));
            Ok(Residual::Exact(m))
        }
        Mode::Numeric(at) => {
            let o = ops.evaluate(at)?;
            let lhs = o.a.mul(&o.d0).mul(&o.a);
            let m = lhs.sub(&hadamard(&c.evaluate(at)?, &o.a));
            Ok(Residual::Numeric { matrix: m, at: at.clone() })
        }
    }
}

/// `max |D_0 A D_0 A D_0 - (-1)^n A|` at `q = 1 + 10^-k`: the triple product
/// tends to the classical `(-1)^n A`.
pub fn q_one_defect(s: Spin, n: usize, k: u32) -> Result<Float, ReductionError> {
    let den = num_bigint::BigInt::from(10).pow(k);
    let at = QPoint::from_ratio(&(&den + 1), &den, 128, format!("1+1e-{k}"))?;
    let o = wn_ops(s, n)?.evaluate(&at)?;
    let triple = o.d0.mul(&o.dhat).mul(&o.d0);
    let sign = if n % 2 == 1 { at.int(-1) } else { at.int(1) };
    Ok(triple.sub(&o.a.scale(&sign)).max_abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PowerSign {
    Plus,
    Minus,
}

/// The relations among the reduced `Ř` and `P^m` operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `Ř Ř' Ř = Ř' Ř Ř'`
    Pp3a,
    /// `P P' P = η^2 P`
    Pp3b,
    /// `P Ř'^{±1} P = (θ ξ^{-2})^{±1} η P`
    Pp4a(PowerSign),
    /// `Ř^{±1} P' Ř^{±1} = (θ ξ^{-1})^{±2} Ř'^{∓1} P Ř'^{∓1}`
    Pp4b(PowerSign),
    /// `P P' Ř^{±1} = (θ ξ^{-1})^{±1} η P Ř'^{∓1}`
    Pp5a(PowerSign),
    /// `Ř^{±1} P' P = (θ ξ^{-1})^{±1} η Ř'^{∓1} P`
    Pp5b(PowerSign),
}

impl Relation {
    pub const ALL: [Relation; 10] = [
        Relation::Pp3a,
        Relation::Pp3b,
        Relation::Pp4a(PowerSign::Plus),
        Relation::Pp4a(PowerSign::Minus),
        Relation::Pp4b(PowerSign::Plus),
        Relation::Pp4b(PowerSign::Minus),
        Relation::Pp5a(PowerSign::Plus),
        Relation::Pp5a(PowerSign::Minus),
        Relation::Pp5b(PowerSign::Plus),
        Relation::Pp5b(PowerSign::Minus),
    ];

    pub fn id(self) -> String {
        let sg = |s: PowerSign| if s == PowerSign::Plus { "+" } else { "-" };
        match self {
            Relation::Pp3a => "pp3a".into(),
            Relation::Pp3b => "pp3b".into(),
            Relation::Pp4a(s) => format!("pp4a{}", sg(s)),
            Relation::Pp4b(s) => format!("pp4b{}", sg(s)),
            Relation::Pp5a(s) => format!("pp5a{}", sg(s)),
            Relation::Pp5b(s) => format!("pp5b{}", sg(s)),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for Relation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Relation::ALL.into_iter().find(|r| r.id() == s).ok_or_else(|| format!("unknown relation {s:?}"))
    }
}

struct Sided<'a, T> {
    r: &'a Matrix<T>,
    r_inv: &'a Matrix<T>,
    p: &'a Matrix<T>,
}

fn lemma2_residual<T: Ring>(o: &ReducedOps<T>, rel: Relation, ord: Orientation) -> Matrix<T> {
    let w = &o.ops;
    let s12 = Sided { r: &w.d0, r_inv: &w.d0_inv, p: &o.pi_m };
    let s23 = Sided { r: &w.dhat, r_inv: &w.dhat_inv, p: &o.pi_hat };
    let (l, lp) = match ord {
        Orientation::TwelveFirst => (s12, s23),
        Orientation::TwentyThreeFirst => (s23, s12),
    };
    let c1 = w.theta.mul(&o.xi_m_inv);
    let c1_inv = w.theta_inv.mul(&o.xi_m);
    let c2 = c1.mul(&o.xi_m_inv);
    let c2_inv = c1_inv.mul(&o.xi_m);
    // (R^{±1}, R'^{∓1}, c1^{±1}, c2^{±1})
    let pick = |sg: PowerSign| match sg {
        PowerSign::Plus => (l.r, lp.r_inv, c1.clone(), c2.clone()),
        PowerSign::Minus => (l.r_inv, lp.r, c1_inv.clone(), c2_inv.clone()),
    };
    match rel {
        Relation::Pp3a => l.r.mul(lp.r).mul(l.r).sub(&lp.r.mul(l.r).mul(lp.r)),
        Relation::Pp3b => l.p.mul(lp.p).mul(l.p).sub(&l.p.scale(&o.eta.mul(&o.eta))),
        Relation::Pp4a(sg) => {
            let (_, _, _, c2) = pick(sg);
            let rp = if sg == PowerSign::Plus { lp.r } else { lp.r_inv };
            l.p.mul(rp).mul(l.p).sub(&l.p.scale(&c2.mul(&o.eta)))
        }
        Relation::Pp4b(sg) => {
            let (r, rp_opp, c1, _) = pick(sg);
            let lhs = r.mul(lp.p).mul(r);
            lhs.sub(&rp_opp.mul(l.p).mul(rp_opp).scale(&c1.mul(&c1)))
        }
        Relation::Pp5a(sg) => {
            let (r, rp_opp, c1, _) = pick(sg);
            l.p.mul(lp.p).mul(r).sub(&l.p.mul(rp_opp).scale(&c1.mul(&o.eta)))
        }
        Relation::Pp5b(sg) => {
            let (r, rp_opp, c1, _) = pick(sg);
            r.mul(lp.p).mul(l.p).sub(&rp_opp.mul(l.p).scale(&c1.mul(&o.eta)))
        }
    }
}

/// Residual of one relation among the reduced `Ř` and `P^m` operators, with
/// `(l, l') = (12, 23)` or `(23, 12)`.
pub fn lemma2_check(
    s: Spin,
    n: usize,
    m: usize,
    rel: Relation,
    ord: Orientation,
    mode: &Mode,
) -> Result<Residual, ReductionError> {
    let ops = reduced_ops(s, n, m)?;
    to_residual(
        mode,
        || Ok(lemma2_residual(&ops, rel, ord)),
        |at| Ok(lemma2_residual(&ops.evaluate(at)?, rel, ord)),
    )
}

/// All `(n, m)` with `2s - m <= n <= 2s`, `n >= 1`.
pub fn lemma2_params(s: Spin) -> Vec<(usize, usize)> {
    let t = s.twice() as usize;
    (1..=t).flat_map(|n| (t - n..=t).map(move |m| (n, m))).collect()
}

/// Derives `P Ř' P = θ ξ^{-2} η P` numerically from the `P P' Ř^{-1}`
/// relation and `P P' P = η^2 P`, on the (12, 23) side. Returns the larger
/// of the two step defects, or `None` when `η = 0`.
pub fn lemma2_dependency_defect(s: Spin, n: usize, m: usize, at: &QPoint) -> Result<Option<Float>, ReductionError> {
    let exact = reduced_ops(s, n, m)?;
    if exact.eta.is_zero() {
        return Ok(None);
    }
    let o = exact.evaluate(at)?;
    let w = &o.ops;
    let c1 = &w.theta * &o.xi_m_inv;
    let eta_inv = at.int(1) / &o.eta;
    // P Ř' = c1 η^{-1} P P' Ř^{-1}
    let via_pp5 = o.pi_m.mul(&o.pi_hat).mul(&w.d0_inv).mul(&o.pi_m).scale(&(&c1 * &eta_inv));
    let lhs = o.pi_m.mul(&w.dhat).mul(&o.pi_m);
    // Ř^{-1} P = ξ^{-1} P, then P P' P = η^2 P
    let via_pp3 = o.pi_m.scale(&(&c1 * &o.xi_m_inv * &o.eta));
    let d1 = lhs.sub(&via_pp5).max_abs();
    let d2 = via_pp5.sub(&via_pp3).max_abs();
    Ok(Some(if d1 > d2 { d1 } else { d2 }))
}

/// Membership of a reduced braid operator in the span of a few others.
#[derive(Debug, Clone)]
pub struct SpanItem {
    pub target: &'static str,
    pub spanning: Vec<&'static str>,
    /// Coefficients on the (12) side, when the target is in the span.
    pub coefficients: Option<Vec<QScalar>>,
    /// Whether the same coefficients work after conjugating by `A`.
    pub conjugate_agrees: bool,
}

#[derive(Debug, Clone)]
pub struct SpanReport {
    pub spin: Spin,
    pub n: usize,
    /// The projector used is `P^m` with `m = 2s - n`.
    pub m: usize,
    pub items: Vec<SpanItem>,
}

impl SpanReport {
    pub fn in_span(&self) -> bool {
        self.items.iter().all(|i| i.coefficients.is_some() && i.conjugate_agrees)
    }
}

fn flat(m: &QMatrix) -> Vec<QScalar> {
    m.entries().to_vec()
}

fn span_item(
    o: &ReducedOps<QScalar>,
    target: (&'static str, &QMatrix, &QMatrix),
    spanning: &[(&'static str, QMatrix, QMatrix)],
) -> Result<SpanItem, ReductionError> {
    let cols: Vec<Vec<QScalar>> = spanning.iter().map(|(_, m12, _)| flat(m12)).collect();
    let coefficients = solve_combination(&cols, &flat(target.1))?;
    let conjugate_agrees = match &coefficients {
        Some(c) => {
            let dim = o.ops.k_range.len();
            let sum = spanning
                .iter()
                .zip(c)
                .fold(QMatrix::zeros(dim, dim), |acc, ((_, _, m23), ci)| acc.add(&m23.scale(ci)));
            sum == *target.2
        }
        None => false,
    };
    Ok(SpanItem {
        target: target.0,
        spanning: spanning.iter().map(|(name, _, _)| *name).collect(),
        coefficients,
        conjugate_agrees,
    })
}

/// `n = 1`: `Ř^{±1} ∈ span{P, I}`. `n = 2, 3`: `Ř^{-1} ∈ span{Ř, P, I}`,
/// which holds at `n = 2` only. `P` is `P^{2s-n}`.
pub fn tl_bwm_span_check(s: Spin, n: usize) -> Result<SpanReport, ReductionError> {
    let t = s.twice() as usize;
    if !(1..=3).contains(&n) || n > t {
        return Err(ReductionError::InvalidN { n, max: t.min(3) });
    }
    let o = reduced_ops(s, n, t - n)?;
    let w = &o.ops;
    let id = QMatrix::identity(w.k_range.len());
    let p = ("P", o.pi_m.clone(), o.pi_hat.clone());
    let e = ("I", id.clone(), id);
    let items = if n == 1 {
        let spanning = [p, e];
        vec![
            span_item(&o, ("R", &w.d0, &w.dhat), &spanning)?,
            span_item(&o, ("R^-1", &w.d0_inv, &w.dhat_inv), &spanning)?,
        ]
    } else {
        let spanning = [("R", w.d0.clone(), w.dhat.clone()), p, e];
        vec![span_item(&o, ("R^-1", &w.d0_inv, &w.dhat_inv), &spanning)?]
    };
    Ok(SpanReport { spin: s, n, m: t - n, items })
}

/// The three matrices of the forcing equation on `W_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gjh<T> {
    pub spin: Spin,
    pub n: usize,
    pub g_mat: Matrix<T>,
    pub j_mat: Matrix<T>,
    pub h_mat: Matrix<T>,
}

fn check_gjh_n(s: Spin, n: usize) -> Result<(), ReductionError> {
    let t = s.twice() as usize;
    if n == 0 || n > t {
        return Err(ReductionError::InvalidN { n, max: t });
    }
    Ok(())
}

/// `G = P_12 - P_23`, `J = Ř_12 P_23 Ř_12 - Ř_23 P_12 Ř_23`,
/// `H = P_12 Ř_23^{-1} + Ř_23^{-1} P_12 - P_23 Ř_12^{-1} - Ř_12^{-1} P_23`,
/// all with `P = P^{2s-n}`, from reduced operators.
pub fn gjh_from_ops<T: Ring>(o: &ReducedOps<T>) -> Gjh<T> {
    let w = &o.ops;
    let (p12, p23) = (&o.pi_m, &o.pi_hat);
    let g_mat = p12.sub(p23);
    let j_mat = w.d0.mul(p23).mul(&w.d0).sub(&w.dhat.mul(p12).mul(&w.dhat));
    let h_mat = p12
        .mul(&w.dhat_inv)
        .add(&w.dhat_inv.mul(p12))
        .sub(&p23.mul(&w.d0_inv))
        .sub(&w.d0_inv.mul(p23));
    Gjh { spin: w.spin, n: w.n, g_mat, j_mat, h_mat }
}

fn gjh_ops(s: Spin, n: usize) -> Result<ReducedOps<QScalar>, ReductionError> {
    check_gjh_n(s, n)?;
    reduced_ops(s, n, s.twice() as usize - n)
}

pub fn gjh(s: Spin, n: usize) -> Result<Gjh<QScalar>, ReductionError> {
    Ok(gjh_from_ops(&gjh_ops(s, n)?))
}

/// The same matrices written with `π`, `A`, `D_0` and no `Dhat`.
pub fn gjh_matrix_form(s: Spin, n: usize) -> Result<Gjh<QScalar>, ReductionError> {
    let o = gjh_ops(s, n)?;
    let w = &o.ops;
    let (a, pi) = (&w.a, &o.pi_m);
    let api_a = a.mul(pi).mul(a);
    let xn = &o.xi_m;
    let xn_inv = &o.xi_m_inv;
    let g_mat = pi.sub(&api_a);
    let c = w.theta.mul(&w.theta).mul(xn_inv).mul(xn_inv);
    let j_mat = w.d0.mul(&api_a).mul(&w.d0).sub(&w.d0_inv.mul(&api_a).mul(&w.d0_inv).scale(&c));
    let h_mat = pi
        .mul(a)
        .mul(&w.d0)
        .add(&w.d0.mul(a).mul(pi))
        .scale(&w.theta_inv.mul(xn))
        .sub(&api_a.mul(&w.d0_inv))
        .sub(&w.d0_inv.mul(&api_a));
    Ok(Gjh { spin: s, n, g_mat, j_mat, h_mat })
}

/// The same matrices entry by entry from `A_{nk}`, `ξ_k` and `θ_n`.
pub fn gjh_entrywise(s: Spin, n: usize) -> Result<Gjh<QScalar>, ReductionError> {
    let o = gjh_ops(s, n)?;
    let w = &o.ops;
    let dim = w.k_range.len();
    let x: Vec<QScalar> = w.k_range.iter().map(|&k| xi(s, k).unwrap()).collect();
    let x_inv: Vec<QScalar> = x.iter().map(|v| v.inv().unwrap()).collect();
    let an = |k: usize| w.a.get(n, k).clone();
    let delta = |k: usize| if k == n { QScalar::one() } else { QScalar::zero() };
    let th2 = w.theta.mul(&w.theta).mul(&o.xi_m_inv).mul(&o.xi_m_inv);
    let th_inv_xn = w.theta_inv.mul(&o.xi_m);
    let g_mat = QMatrix::from_fn(dim, dim, |k, kp| delta(k).mul(&delta(kp)).sub(&an(k).mul(&an(kp))));
    let h_mat = QMatrix::from_fn(dim, dim, |k, kp| {
        let first = delta(k).mul(&x[kp]).mul(&an(kp)).add(&delta(kp).mul(&x[k]).mul(&an(k)));
        first.mul(&th_inv_xn).sub(&x_inv[k].add(&x_inv[kp]).mul(&an(k)).mul(&an(kp)))
    });
    let j_mat = QMatrix::from_fn(dim, dim, |k, kp| {
        let c = x[k].mul(&x[kp]).sub(&th2.mul(&x_inv[k]).mul(&x_inv[kp]));
        c.mul(&an(k)).mul(&an(kp))
    });
    Ok(Gjh { spin: s, n, g_mat, j_mat, h_mat })
}

fn gjh_residual<T: Ring>(x: &Gjh<T>, y: &Gjh<T>) -> Matrix<T> {
    let dim = x.g_mat.rows();
    let mut out = Matrix::zeros(dim, 3 * dim);
    for (b, (p, q)) in [(&x.g_mat, &y.g_mat), (&x.j_mat, &y.j_mat), (&x.h_mat, &y.h_mat)].into_iter().enumerate() {
        let d = p.sub(q);
        for i in 0..dim {
            for j in 0..dim {
                out.set(i, b * dim + j, d.get(i, j).clone());
            }
        }
    }
    out
}

fn stacked(ms: &[&QMatrix]) -> QMatrix {
    QMatrix::from_rows(ms.iter().map(|m| flat(m)).collect())
}

fn xis_of(s: Spin, n: usize) -> (QScalar, QScalar, QScalar) {
    (xi(s, 0).unwrap(), xi(s, 1).unwrap(), xi(s, n).unwrap())
}

/// Coefficient matrix of the 3x3 system in `(α, β, γ)` obtained from the
/// `(0,0)`, `(0,1)`, `(1,1)` entries of `αG + βJ - γH = 0`.
pub fn abg_system(s: Spin, n: usize) -> QMatrix {
    let (x0, x1, xn) = xis_of(s, n);
    let th = theta(s, n);
    let c = th.mul(&th).div(&xn.mul(&xn)).unwrap();
    let row = |a: &QScalar, b: &QScalar| {
        let beta = a.mul(b).sub(&c.div(&a.mul(b)).unwrap());
        let gamma = a.inv().unwrap().add(&b.inv().unwrap());
        vec![QScalar::from_int(-1), beta, gamma]
    };
    QMatrix::from_rows(vec![row(&x0, &x0), row(&x0, &x1), row(&x1, &x1)])
}

fn det3(m: &QMatrix) -> QScalar {
    let e = |i, j| m.get(i, j).clone();
    let minor = |a: usize, b: usize, c: usize, d: usize| e(1, a).mul(&e(2, b)).sub(&e(1, c).mul(&e(2, d)));
    e(0, 0).mul(&minor(1, 2, 2, 1)).sub(&e(0, 1).mul(&minor(0, 2, 2, 0))).add(&e(0, 2).mul(&minor(0, 1, 1, 0)))
}

/// `(ξ_0^{-1} - ξ_1^{-1})^3 (θ_n^2 ξ_n^{-2} - ξ_0^2 ξ_1^2)`.
pub fn abg_determinant_formula(s: Spin, n: usize) -> QScalar {
    let (x0, x1, xn) = xis_of(s, n);
    let th = theta(s, n);
    let a = x0.inv().unwrap().sub(&x1.inv().unwrap());
    let b = th.mul(&th).div(&xn.mul(&xn)).unwrap().sub(&x0.mul(&x0).mul(&x1).mul(&x1));
    a.mul(&a).mul(&a).mul(&b)
}

/// `θ_n^2 = ξ_0^2 ξ_1^2 ξ_n^2`.
pub fn xixi_holds(s: Spin, n: usize) -> bool {
    let (x0, x1, xn) = xis_of(s, n);
    let th = theta(s, n);
    th.mul(&th) == x0.mul(&x1).mul(&xn).pow(2).unwrap()
}

/// `ρ(3s-n) + 3ρ(s) - ρ(2s) - ρ(2s-1) - ρ(2s-n)` in units of `q`.
pub fn xixi_exponent(s: Spin, n: usize) -> i64 {
    let t = s.twice() as i64;
    let n = n as i64;
    let e = rho(3 * t - 2 * n) + rho(t) * 3 - rho(2 * t) - rho(2 * t - 2) - rho(2 * t - 2 * n);
    assert_eq!(e.0 % 4, 0);
    e.0 / 4
}

fn outcome(check: &str, s: Spin, n: usize, pass: bool) -> CheckOutcome {
    CheckOutcome::new(check, pass).param("spin", s.to_string()).param("n", n)
}

/// Every claim about `G`, `J`, `H` at one `(s, n)`, `1 <= n <= 2s`.
pub fn lemma3_check(s: Spin, n: usize) -> Result<Vec<CheckOutcome>, ReductionError> {
    check_gjh_n(s, n)?;
    let t = s.twice() as i64;
    let m = gjh(s, n)?;
    let mut out = Vec::new();
    let routes_agree = gjh_residual(&m, &gjh_matrix_form(s, n)?).is_zero()
        && gjh_residual(&m, &gjh_entrywise(s, n)?).is_zero();
    out.push(outcome("gjh_routes_agree", s, n, routes_agree));
    out.push(outcome("g_traceless", s, n, m.g_mat.trace().is_zero()));
    let (x0, x1, _) = xis_of(s, n);
    let (g, j, h) = (&m.g_mat, &m.j_mat, &m.h_mat);
    match n {
        1 => {
            let th = theta(s, 1);
            let c_j = qp(QuarterExponent(4 * t * (t - 2))).sub(&qp(QuarterExponent(4 * t * t)));
            let c_j_xi = th.mul(&th).div(&x0.mul(&x0).mul(&x1).mul(&x1))?.sub(&x0.mul(&x0));
            let c_h = qp(QuarterExponent(-2 * t * t)).mul(&QScalar::from_int(2));
            let c_h_xi = x0.inv()?.mul(&QScalar::from_int(2));
            out.push(outcome("jgh1_j", s, n, j.sub(&g.scale(&c_j)).is_zero() && c_j == c_j_xi));
            out.push(outcome("jgh1_h", s, n, h.sub(&g.scale(&c_h)).is_zero() && c_h == c_h_xi));
        }
        _ => {
            let sys = abg_system(s, n);
            let det = det3(&sys);
            out.push(outcome("abg_determinant", s, n, det == abg_determinant_formula(s, n)));
            let exp = xixi_exponent(s, n);
            out.push(
                outcome("xixi_exponent", s, n, exp == t * (2 - n as i64))
                    .with_witness(format!("2s(2-n) = {exp}")),
            );
            out.push(outcome("d_zero_iff_n_eq_2", s, n, det.is_zero() == (exp == 0) && det.is_zero() == xixi_holds(s, n)));
            if n == 2 {
                let sum = x0.add(&x1);
                let jgh2 = h.scale(&x0.mul(&x1)).sub(&g.scale(&sum)).sub(&j.scale(&sum.inv()?));
                out.push(outcome("jgh2", s, n, jgh2.is_zero()));
                let abg = [sum.clone(), sum.inv()?, x0.mul(&x1)];
                let solves = sys.mul_vec(&abg).iter().all(QScalar::is_zero);
                out.push(outcome("abg_solution", s, n, solves));
                out.push(outcome("independent_g_j", s, n, rank(&stacked(&[g, j])) == 2));
                let no_gamma = QMatrix::from_fn(3, 2, |i, k| sys.get(i, k).clone());
                out.push(outcome("abg_no_solution_gamma_zero", s, n, rank(&no_gamma) == 2));
            } else {
                out.push(outcome("independent_g_j_h", s, n, rank(&stacked(&[g, j, h])) == 3));
                out.push(outcome("abg_only_zero", s, n, rank(&sys) == 3));
                let j00 = j.get(0, 0);
                let j01 = j.get(0, 1);
                out.push(outcome("j_nonzero", s, n, !(j00.is_zero() && j01.is_zero()) && x0.mul(&x0) != x1.mul(&x1)));
            }
        }
    }
    Ok(out)
}

/// Renders `Some(coefficients)` for reports.
pub fn render_coefficients(c: &Option<Vec<QScalar>>) -> Option<Vec<String>> {
    c.as_ref().map(|v| v.iter().map(render_scalar).collect())
}

/// All `k` labels of `W_n` for `n <= ⌊3s⌋`.
pub fn all_n(s: Spin) -> Vec<usize> {
    (0..=s.max_n()).filter(|&n| !k_range(s, n).is_empty()).collect()
}
