//! Invariant constant braid solutions `Σ_k r_k P^{2s-k}`: exact forcing of
//! the spectral coefficients one subspace `W_n` at a time, and a numeric
//! multistart search.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::check::CheckOutcome;
use crate::matrix::{cabs, CMatrix, Matrix, QMatrix, Ring};
use crate::reduction::{gjh, lemma3_check, theta, xixi_holds, ReductionError};
use crate::rep::{k_range, RepError, Spin};
use crate::rmatrix::{braid_relation_residual, family, xi, xis, BraidOperator};
use crate::scalars::{
    decimal_string, render_scalar, CFloat, Float, QPoint, QScalar, QuarterExponent, RationalFunction, ScalarError,
};
use crate::sixj::a_matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("need 1 <= n <= 2s, got s = {spin}, n = {n}")]
    InvalidRange { spin: Spin, n: usize },
    #[error("expected {expected} spectral coefficients, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("r_0 must be nonzero")]
    ZeroLeading,
    #[error("unexpected structure: {0}")]
    Structure(String),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

fn qp(e: i64) -> QScalar {
    QScalar::qpow(QuarterExponent(e))
}

/// Spectral coefficients `r_0..r_{2s}` of an invariant operator.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVector {
    pub spin: Spin,
    pub r: Vec<QScalar>,
}

impl SpectralVector {
    pub fn new(spin: Spin, r: Vec<QScalar>) -> Result<Self, ClassifyError> {
        if r.len() != spin.dim() {
            return Err(ClassifyError::WrongLength { expected: spin.dim(), got: r.len() });
        }
        if r[0].is_zero() {
            return Err(ClassifyError::ZeroLeading);
        }
        Ok(Self { spin, r })
    }

    /// `r_k = ξ_k`.
    pub fn drinfeld(s: Spin) -> Self {
        Self { spin: s, r: xis(s) }
    }

    /// `r_k = q^{4s^2} ξ_k^{-1}`, which has `r_0 = ξ_0`.
    pub fn inverse_scaled(s: Spin) -> Self {
        let t = s.twice() as i64;
        let c = qp(4 * t * t);
        Self { spin: s, r: xis(s).iter().map(|x| c.mul(&x.inv().unwrap())).collect() }
    }

    pub fn constant(s: Spin) -> Self {
        Self { spin: s, r: vec![QScalar::one(); s.dim()] }
    }

    /// Rescaled so that `r_0 = ξ_0`.
    pub fn normalized(&self) -> Result<Self, ClassifyError> {
        let c = xi(self.spin, 0).unwrap().div(&self.r[0])?;
        Ok(Self { spin: self.spin, r: self.r.iter().map(|x| x.mul(&c)).collect() })
    }

    pub fn operator(&self) -> BraidOperator {
        BraidOperator::from_spectral(self.spin, self.r.clone())
    }
}

/// `(D A)^3 - (A D)^3` for a diagonal `D` given by its entries.
pub fn reduced_ybe_generic<T: Ring>(a: &Matrix<T>, d: &[T]) -> Matrix<T> {
    let dm = Matrix::diagonal(d);
    let da = dm.mul(a);
    let ad = a.mul(&dm);
    da.mul(&da).mul(&da).sub(&ad.mul(&ad).mul(&ad))
}

/// Reduced braid relation on `W_n` for `D_r = diag(r_k)` over `k_range`.
pub fn reduced_ybe_residual(r: &SpectralVector, n: usize) -> Result<QMatrix, ClassifyError> {
    let a = a_matrix(r.spin, n)?;
    let d: Vec<QScalar> = a.k_range.iter().map(|&k| r.r[k].clone()).collect();
    Ok(reduced_ybe_generic(&a.entries, &d))
}

/// True when the reduced relation holds on every `W_n`.
pub fn reduced_ybe_all(r: &SpectralVector) -> Result<bool, ClassifyError> {
    for n in 0..=r.spin.max_n() {
        if !reduced_ybe_residual(r, n)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Ř'_12 Ř'_23 Ř'_12 - Ř'_23 Ř'_12 Ř'_23` on `V_s^{⊗3}`.
pub fn full_ybe_residual(op: &BraidOperator) -> QMatrix {
    braid_relation_residual(op.spin, &op.matrix)
}

/// Univariate polynomial in `g` with rational-function coefficients, lowest
/// degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct GPoly(pub Vec<RationalFunction>);

impl GPoly {
    fn trimmed(mut c: Vec<RationalFunction>) -> Self {
        while c.last().is_some_and(RationalFunction::is_zero) {
            c.pop();
        }
        GPoly(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn monic(&self) -> Self {
        let lead = self.0.last().expect("nonzero").inv().unwrap();
        GPoly(self.0.iter().map(|c| c.mul(&lead)).collect())
    }

    fn rem(&self, d: &GPoly) -> GPoly {
        let dd = d.degree().expect("nonzero divisor");
        let lead_inv = d.0[dd].inv().unwrap();
        let mut r = self.0.clone();
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let c = r[top].mul(&lead_inv);
            for (i, di) in d.0.iter().enumerate() {
                let idx = top - dd + i;
                r[idx] = r[idx].sub(&c.mul(di));
            }
            r = GPoly::trimmed(r).0;
        }
        GPoly::trimmed(r)
    }

    /// Monic gcd; the gcd of zero and zero is zero.
    pub fn gcd(&self, other: &GPoly) -> GPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    pub fn eval(&self, g: &QScalar) -> QScalar {
        self.0.iter().rev().fold(QScalar::zero(), |acc, c| acc.mul(g).add(&QScalar::from_rational(c.clone())))
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(d, c)| {
                let c = render_scalar(&QScalar::from_rational(c.clone()));
                match d {
                    0 => format!("({c})"),
                    1 => format!("({c})*g"),
                    _ => format!("({c})*g^{d}"),
                }
            })
            .collect();
        parts.join(" + ")
    }

    /// Roots of a polynomial of degree at most two, exactly.
    pub fn roots(&self) -> Result<Vec<QScalar>, ClassifyError> {
        let q = |r: &RationalFunction| QScalar::from_rational(r.clone());
        match self.degree() {
            None => Err(ClassifyError::Structure("every g is a root".into())),
            Some(0) => Ok(vec![]),
            Some(1) => Ok(vec![q(&self.0[0].neg().div(&self.0[1])?)]),
            Some(2) => {
                let (c, b, a) = (&self.0[0], &self.0[1], &self.0[2]);
                let disc = b.mul(b).sub(&RationalFunction::from_int(4).mul(a).mul(c));
                let root = QScalar::sqrt_rational(&disc)?;
                let two_a_inv = q(&RationalFunction::from_int(2).mul(a).inv()?);
                let mb = q(&b.neg());
                let r1 = mb.add(&root).mul(&two_a_inv);
                let r2 = mb.sub(&root).mul(&two_a_inv);
                Ok(if r1 == r2 { vec![r1] } else { vec![r1, r2] })
            }
            Some(d) => Err(ClassifyError::Structure(format!("degree {d} factor"))),
        }
    }
}

/// Polynomial in `g` with matrix coefficients.
#[derive(Debug, Clone)]
struct MatPoly(Vec<QMatrix>);

impl MatPoly {
    fn mul(&self, other: &MatPoly) -> MatPoly {
        let dim = self.0[0].rows();
        let mut out = vec![QMatrix::zeros(dim, dim); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        MatPoly(out)
    }

    fn sub(&self, other: &MatPoly) -> MatPoly {
        MatPoly(self.0.iter().zip(&other.0).map(|(a, b)| a.sub(b)).collect())
    }
}

/// Which known solution the correction is measured from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Base {
    Drinfeld,
    Inverse,
}

impl Base {
    pub fn spectral(self, s: Spin) -> SpectralVector {
        match self {
            Base::Drinfeld => SpectralVector::drinfeld(s),
            Base::Inverse => SpectralVector::inverse_scaled(s),
        }
    }
}

/// Outcome of substituting `r_n -> r_n + g` into the braid relation on `W_n`.
#[derive(Debug, Clone)]
pub struct StepForce {
    pub spin: Spin,
    pub n: usize,
    pub base: Base,
    /// Coefficients of `g`, `g^2`, `g^3` in the reduced braid difference.
    pub coefficients: Vec<QMatrix>,
    /// Monic gcd of all entries, each divided by `g`.
    pub common_factor: GPoly,
    /// Every admissible `g`, starting with `0`.
    pub forced: Vec<QScalar>,
    pub substitution_zero: bool,
    /// The coefficients against `g J + (θ ξ_n^{-2} η g^2 + η^2 g^3) G +
    /// θ ξ_n^{-1} η g^2 H`; only for the Drinfeld base.
    pub gjh_agrees: Option<bool>,
}

/// Rational coefficients of an entry `Σ_d c_d g^d` once the common square
/// root is divided out.
fn strip_radical(cs: &[&QScalar]) -> Result<Vec<RationalFunction>, ClassifyError> {
    let mut radicand = None;
    let mut out = Vec::new();
    for c in cs {
        if c.is_zero() {
            out.push(RationalFunction::zero());
            continue;
        }
        let [term] = c.terms() else {
            return Err(ClassifyError::Structure(format!("mixed radicals in {}", render_scalar(c))));
        };
        match &radicand {
            None => radicand = Some(term.radicand().clone()),
            Some(r) if r == term.radicand() => {}
            Some(_) => return Err(ClassifyError::Structure("entry coefficients with different radicals".into())),
        }
        out.push(term.coeff().clone());
    }
    Ok(out)
}

fn braid_difference(a: &QMatrix, d: &QMatrix, pi: &QMatrix) -> MatPoly {
    let x = MatPoly(vec![d.clone(), pi.clone()]);
    let y = MatPoly(vec![a.mul(d).mul(a), a.mul(pi).mul(a)]);
    x.mul(&y).mul(&x).sub(&y.mul(&x).mul(&y))
}

pub fn step_force(s: Spin, n: usize, base: Base) -> Result<StepForce, ClassifyError> {
    let t = s.twice() as usize;
    if n == 0 || n > t {
        return Err(ClassifyError::InvalidRange { spin: s, n });
    }
    let a = a_matrix(s, n)?.entries;
    let r = base.spectral(s).r;
    let dim = n + 1;
    let d = QMatrix::diagonal(&r[..dim]);
    let pi = QMatrix::from_fn(dim, dim, |i, j| if i == n && j == n { QScalar::one() } else { QScalar::zero() });
    let diff = braid_difference(&a, &d, &pi);
    if !diff.0[0].is_zero() {
        return Err(ClassifyError::Structure("base is not a solution".into()));
    }
    let coefficients: Vec<QMatrix> = diff.0[1..].to_vec();
    let mut common = GPoly(vec![]);
    for i in 0..dim {
        for j in 0..dim {
            let cs: Vec<&QScalar> = coefficients.iter().map(|m| m.get(i, j)).collect();
            let p = GPoly::trimmed(strip_radical(&cs)?);
            if !p.is_zero() {
                common = common.gcd(&p);
            }
        }
    }
    let mut forced = vec![QScalar::zero()];
    for g in common.roots()? {
        if !forced.contains(&g) {
            forced.push(g);
        }
    }
    let substitution_zero = forced.iter().all(|g| {
        let dg = d.add(&pi.scale(g));
        let y = a.mul(&dg).mul(&a);
        dg.mul(&y).mul(&dg).sub(&y.mul(&dg).mul(&y)).is_zero()
    });
    let gjh_agrees = match base {
        Base::Drinfeld => Some(gjh_matches(s, n, &a, &coefficients)?),
        Base::Inverse => None,
    };
    Ok(StepForce { spin: s, n, base, coefficients, common_factor: common, forced, substitution_zero, gjh_agrees })
}

fn gjh_matches(s: Spin, n: usize, a: &QMatrix, c: &[QMatrix]) -> Result<bool, ClassifyError> {
    let m = gjh(s, n)?;
    let th = theta(s, n);
    let xn_inv = xi(s, n).unwrap().inv()?;
    let eta = a.get(n, n).clone();
    let c2 = m
        .g_mat
        .scale(&th.mul(&xn_inv).mul(&xn_inv).mul(&eta))
        .add(&m.h_mat.scale(&th.mul(&xn_inv).mul(&eta)));
    Ok(c[0] == m.j_mat && c[1] == c2 && c[2] == m.g_mat.scale(&eta.mul(&eta)))
}

/// The cubic for the correction at `n = 1`, its exact roots and the
/// closed forms they are compared with.
#[derive(Debug, Clone)]
pub struct N1Cubic {
    pub spin: Spin,
    /// Coefficients of `g`, `g^2`, `g^3`.
    pub coefficients: [QScalar; 3],
    pub roots: Vec<QScalar>,
    /// `0`, `q^{2s(s-2)}(1 - q^{8s})`, `q^{2s(s-2)}(1 + q^{4s})`.
    pub closed_form: [QScalar; 3],
    pub roots_match: bool,
    pub substitution_zero: bool,
    /// `q^{4s^2} ξ_1^{-1} - ξ_1` equals the second root.
    pub second_is_inverse: bool,
    /// `ξ_0 - ξ_1` equals the third root.
    pub third_is_r0: bool,
}

pub fn n1_cubic(s: Spin) -> Result<N1Cubic, ClassifyError> {
    let t = s.twice() as i64;
    let x0 = xi(s, 0).unwrap();
    let x1 = xi(s, 1).unwrap();
    let (x0i, x1i) = (x0.inv()?, x1.inv()?);
    let th = theta(s, 1);
    let eta = a_matrix(s, 1)?.entries.get(1, 1).clone();
    let c3 = eta.mul(&eta);
    let c2 = eta.mul(&th).mul(&x1i).mul(&x1i.add(&x0i.mul(&QScalar::from_int(2))));
    let c1 = th.mul(&th).mul(&x0i).mul(&x0i).mul(&x1i).mul(&x1i).sub(&x0.mul(&x0));
    let coefficients = [c1, c2, c3];
    let rational: Result<Vec<RationalFunction>, ClassifyError> = coefficients
        .iter()
        .map(|c| c.as_rational().ok_or_else(|| ClassifyError::Structure("irrational cubic coefficient".into())))
        .collect();
    let quad = GPoly::trimmed(rational?);
    let mut roots = vec![QScalar::zero()];
    roots.extend(quad.roots()?);
    let pre = qp(2 * t * (t - 4));
    let closed_form = [
        QScalar::zero(),
        pre.mul(&QScalar::one().sub(&qp(16 * t))),
        pre.mul(&QScalar::one().add(&qp(8 * t))),
    ];
    let roots_match = roots.len() == 3 && closed_form.iter().all(|g| roots.contains(g));
    let substitution_zero = closed_form.iter().all(|g| {
        let g2 = g.mul(g);
        coefficients[0].mul(g).add(&coefficients[1].mul(&g2)).add(&coefficients[2].mul(&g2.mul(g))).is_zero()
    });
    let second_is_inverse = qp(4 * t * t).mul(&x1i).sub(&x1) == closed_form[1];
    let third_is_r0 = x0.sub(&x1) == closed_form[2];
    Ok(N1Cubic { spin: s, coefficients, roots, closed_form, roots_match, substitution_zero, second_is_inverse, third_is_r0 })
}

/// Verdict for one solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Drinfeld,
    DrinfeldInverseScaled,
    R1EqualsR0Branch,
    Other,
}

#[derive(Debug, Clone, Serialize)]
pub struct N1CubicJson {
    /// Coefficients of `g`, `g^2`, `g^3`.
    pub coefficients: Vec<String>,
    pub roots: Vec<String>,
}

impl N1Cubic {
    pub fn to_json(&self) -> N1CubicJson {
        N1CubicJson {
            coefficients: self.coefficients.iter().map(render_scalar).collect(),
            roots: self.roots.iter().map(render_scalar).collect(),
        }
    }
}

/// One `n` of the proof replay.
#[derive(Debug, Clone, Serialize)]
pub struct PerN {
    pub n: usize,
    pub base: Base,
    pub forced_g_values: Vec<String>,
    pub common_factor: String,
    pub excluded: bool,
    pub details: Vec<CheckOutcome>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BranchReport {
    pub verdict: Verdict,
    pub r1: String,
    pub classified: bool,
    pub conclusion: String,
}

/// Machine-checkable replay of the classification for one spin.
#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub spin: Spin,
    pub n1_cubic: N1CubicJson,
    pub steps: Vec<CheckOutcome>,
    pub per_n: Vec<PerN>,
    pub branches: Vec<BranchReport>,
    pub valid: bool,
}

fn step_check(name: &str, s: Spin, pass: bool) -> CheckOutcome {
    CheckOutcome::new(name, pass).param("spin", s.to_string())
}

/// `η g` from the `G` and `J` coefficients at `n = 2` after eliminating `H`.
pub fn n2_eta_g_expressions(s: Spin) -> Result<(QScalar, QScalar), ClassifyError> {
    let (x0, x1, x2) = (xi(s, 0).unwrap(), xi(s, 1).unwrap(), xi(s, 2).map_err(|_| ClassifyError::InvalidRange { spin: s, n: 2 })?);
    let th = theta(s, 2);
    let prod_inv = x0.mul(&x1).mul(&x2).inv()?;
    let from_g = th.mul(&prod_inv).mul(&x0.mul(&x1).mul(&x2.inv()?).add(&x0).add(&x1)).neg();
    let from_j = th.inv()?.mul(&x0).mul(&x1).mul(&x2).mul(&x0.add(&x1)).neg();
    Ok((from_g, from_j))
}

fn per_n(s: Spin, n: usize, base: Base) -> Result<(PerN, StepForce), ClassifyError> {
    let sf = step_force(s, n, base)?;
    let mut details = vec![
        step_check("substitution_zero", s, sf.substitution_zero).param("n", n),
    ];
    if let Some(ok) = sf.gjh_agrees {
        details.push(step_check("braid_difference_matches_gjh_form", s, ok).param("n", n));
    }
    if base == Base::Drinfeld && n == 2 {
        let (e1, e2) = n2_eta_g_expressions(s)?;
        details.push(
            step_check("n2_eta_g_expressions_incompatible", s, e1 != e2 && xixi_holds(s, 2))
                .param("n", n)
                .with_witness(format!("{} vs {}", render_scalar(&e1), render_scalar(&e2))),
        );
    }
    if base == Base::Drinfeld && n >= 3 {
        let l3 = lemma3_check(s, n)?;
        let ok = l3.iter().filter(|c| c.check == "j_nonzero" || c.check == "independent_g_j_h").all(CheckOutcome::passed);
        details.push(step_check("j_nonzero_and_independent", s, ok).param("n", n));
    }
    let excluded = sf.forced.len() == 1;
    let p = PerN {
        n,
        base,
        forced_g_values: sf.forced.iter().map(render_scalar).collect(),
        common_factor: sf.common_factor.render(),
        excluded,
        details,
    };
    Ok((p, sf))
}

/// Replays the classification: with `r_0 = ξ_0`, `r_1` is one of three
/// values; on the two branches with `r_1 ≠ r_0` every further correction
/// is forced to vanish.
pub fn prove_proposition1(s: Spin) -> Result<Certificate, ClassifyError> {
    let t = s.twice() as usize;
    let mut steps = Vec::new();
    let drin = SpectralVector::drinfeld(s);
    let inv = SpectralVector::inverse_scaled(s);
    steps.push(step_check("normalization_r0", s, drin.r[0] == inv.r[0] && drin.r[0] == xi(s, 0).unwrap()));
    let cubic = n1_cubic(s)?;
    steps.push(step_check("n1_cubic_roots", s, cubic.roots_match && cubic.substitution_zero));
    steps.push(step_check("n1_second_root_is_inverse", s, cubic.second_is_inverse));
    steps.push(step_check("n1_third_root_gives_r1_eq_r0", s, cubic.third_is_r0));

    let mut per = Vec::new();
    let (p1, sf1) = per_n(s, 1, Base::Drinfeld)?;
    let same = sf1.forced.len() == 3 && cubic.roots.iter().all(|g| sf1.forced.contains(g));
    steps.push(step_check("n1_direct_expansion_matches_cubic", s, same));
    per.push(p1);
    let c = qp(4 * (t * t) as i64);
    for n in 2..=t {
        let (pd, sfd) = per_n(s, n, Base::Drinfeld)?;
        let (pi, sfi) = per_n(s, n, Base::Inverse)?;
        let dual: Result<Vec<QScalar>, ScalarError> = sfd.forced.iter().map(|g| Ok(c.mul(&g.q_dual()?))).collect();
        let dual = dual?;
        let mirrored = dual.len() == sfi.forced.len() && dual.iter().all(|g| sfi.forced.contains(g));
        steps.push(step_check("inverse_base_mirrors_drinfeld", s, mirrored).param("n", n));
        steps.push(step_check("drinfeld_branch_forced_zero", s, pd.excluded).param("n", n));
        steps.push(step_check("inverse_branch_forced_zero", s, pi.excluded).param("n", n));
        per.push(pd);
        per.push(pi);
    }
    steps.push(step_check("drinfeld_solves", s, reduced_ybe_all(&drin)?));
    steps.push(step_check("inverse_scaled_solves", s, reduced_ybe_all(&inv)?));
    let valid = steps.iter().all(CheckOutcome::passed) && per.iter().all(|p| p.details.iter().all(CheckOutcome::passed));
    let branches = vec![
        BranchReport {
            verdict: Verdict::Drinfeld,
            r1: render_scalar(&drin.r[1]),
            classified: true,
            conclusion: "r_k = ξ_k for all k".into(),
        },
        BranchReport {
            verdict: Verdict::DrinfeldInverseScaled,
            r1: render_scalar(&inv.r[1]),
            classified: true,
            conclusion: "r_k = q^{4s^2} ξ_k^{-1} for all k".into(),
        },
        BranchReport {
            verdict: Verdict::R1EqualsR0Branch,
            r1: render_scalar(&drin.r[0]),
            classified: false,
            conclusion: "not classified".into(),
        },
    ];
    Ok(Certificate { spin: s, n1_cubic: cubic.to_json(), steps, per_n: per, branches, valid })
}

/// Complex scalars the multistart search runs over.
trait Field: Ring {
    fn conj(&self) -> Self;
    fn recip(&self) -> Self;
    fn modulus(&self) -> f64;
    fn real_like(x: f64, one: &Self) -> Self;
}

impl Field for Complex64 {
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn recip(&self) -> Self {
        self.inv()
    }
    fn modulus(&self) -> f64 {
        self.norm()
    }
    fn real_like(x: f64, _: &Self) -> Self {
        Complex64::new(x, 0.0)
    }
}

impl Field for CFloat {
    fn conj(&self) -> Self {
        CFloat::new(self.re.clone(), -self.im.clone())
    }
    fn recip(&self) -> Self {
        let n2 = &self.re * &self.re + &self.im * &self.im;
        CFloat::new(&self.re / &n2, -(&self.im / &n2))
    }
    fn modulus(&self) -> f64 {
        cabs(self).to_f64().value()
    }
    fn real_like(x: f64, one: &Self) -> Self {
        let v = Float::try_from(x).unwrap().with_precision(one.re.precision()).value();
        CFloat::new(v, Float::ZERO)
    }
}

/// Stacked reduced braid relations over all `W_n` in the unknowns
/// `r_1..r_{2s}`, with `r_0 = 1`.
struct System<T> {
    blocks: Vec<(Matrix<T>, Vec<usize>)>,
    unknowns: usize,
    one: T,
}

impl<T: Field> System<T> {
    fn full(&self, x: &[T]) -> Vec<T> {
        let mut r = vec![self.one.clone()];
        r.extend_from_slice(x);
        r
    }

    fn residual(&self, x: &[T]) -> Vec<T> {
        let r = self.full(x);
        let mut out = Vec::new();
        for (a, ks) in &self.blocks {
            let d: Vec<T> = ks.iter().map(|&k| r[k].clone()).collect();
            out.extend_from_slice(reduced_ybe_generic(a, &d).entries());
        }
        out
    }

    /// Residual and Jacobian columns `∂F/∂r_j`.
    fn linearize(&self, x: &[T]) -> (Vec<T>, Vec<Vec<T>>) {
        let r = self.full(x);
        let mut f = Vec::new();
        let mut cols = vec![Vec::new(); self.unknowns];
        for (a, ks) in &self.blocks {
            let d: Vec<T> = ks.iter().map(|&k| r[k].clone()).collect();
            let dm = Matrix::diagonal(&d);
            let da = dm.mul(a);
            let ad = a.mul(&dm);
            let da2 = da.mul(&da);
            let ad2 = ad.mul(&ad);
            f.extend_from_slice(da2.mul(&da).sub(&ad2.mul(&ad)).entries());
            for (j, col) in cols.iter_mut().enumerate() {
                let e: Vec<T> = ks.iter().map(|&k| if k == j + 1 { T::one() } else { T::zero() }).collect();
                if e.iter().all(Ring::is_zero) {
                    col.extend(std::iter::repeat(T::zero()).take(ks.len() * ks.len()));
                    continue;
                }
                let em = Matrix::diagonal(&e);
                let ea = em.mul(a);
                let ae = a.mul(&em);
                let lhs = ea.mul(&da2).add(&da.mul(&ea).mul(&da)).add(&da2.mul(&ea));
                let rhs = ae.mul(&ad2).add(&ad.mul(&ae).mul(&ad)).add(&ad2.mul(&ae));
                col.extend_from_slice(lhs.sub(&rhs).entries());
            }
        }
        (f, cols)
    }
}

fn norm<T: Field>(v: &[T]) -> f64 {
    v.iter().map(Field::modulus).fold(0.0, f64::max)
}

/// Solves `(J^H J + λ I) δ = -J^H F` by Gaussian elimination with partial
/// pivoting.
fn lm_step<T: Field>(f: &[T], cols: &[Vec<T>], lambda: &T) -> Option<Vec<T>> {
    let u = cols.len();
    let dot = |a: &[T], b: &[T]| a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc.add(&x.conj().mul(y)));
    let mut m: Vec<Vec<T>> = (0..u)
        .map(|i| {
            let mut row: Vec<T> = (0..u).map(|j| dot(&cols[i], &cols[j])).collect();
            row[i] = row[i].add(lambda);
            row.push(dot(&cols[i], f).neg());
            row
        })
        .collect();
    for c in 0..u {
        let p = (c..u).max_by(|&a, &b| m[a][c].modulus().total_cmp(&m[b][c].modulus()))?;
        if m[p][c].modulus() == 0.0 {
            return None;
        }
        m.swap(c, p);
        let inv = m[c][c].recip();
        for i in (0..u).filter(|&i| i != c) {
            let factor = m[i][c].mul(&inv);
            if factor.is_zero() {
                continue;
            }
            for j in c..=u {
                let v = m[c][j].mul(&factor);
                m[i][j] = m[i][j].sub(&v);
            }
        }
    }
    Some((0..u).map(|i| m[i][u].mul(&m[i][i].recip())).collect())
}

/// Damped Gauss-Newton with the usual accept/reject update of `λ`.
fn levenberg_marquardt<T: Field>(sys: &System<T>, mut x: Vec<T>, iters: usize, tol: f64) -> (Vec<T>, f64) {
    let mut fx = sys.residual(&x);
    let mut nf = norm(&fx);
    let mut lambda = 1e-3;
    for _ in 0..iters {
        if nf < tol || !nf.is_finite() {
            break;
        }
        let (f, cols) = sys.linearize(&x);
        fx = f;
        let Some(delta) = lm_step(&fx, &cols, &T::real_like(lambda, &sys.one)) else {
            break;
        };
        let trial: Vec<T> = x.iter().zip(&delta).map(|(a, b)| a.add(b)).collect();
        let nt = norm(&sys.residual(&trial));
        if nt < nf {
            x = trial;
            nf = nt;
            lambda = (lambda / 3.0).max(1e-15);
        } else {
            lambda *= 4.0;
            if lambda > 1e12 {
                break;
            }
        }
        if norm(&x) > 1e6 {
            break;
        }
    }
    (x, nf)
}

/// Newton refinement with damping `λ = |F|`, which keeps quadratic
/// convergence also on solution curves.
fn polish<T: Field>(sys: &System<T>, mut x: Vec<T>, iters: usize, tol: f64) -> (Vec<T>, f64) {
    let mut nf = norm(&sys.residual(&x));
    for _ in 0..iters {
        if nf < tol {
            break;
        }
        let (f, cols) = sys.linearize(&x);
        let Some(delta) = lm_step(&f, &cols, &T::real_like(nf, &sys.one)) else {
            break;
        };
        let trial: Vec<T> = x.iter().zip(&delta).map(|(a, b)| a.add(b)).collect();
        let nt = norm(&sys.residual(&trial));
        if !(nt < nf) {
            break;
        }
        x = trial;
        nf = nt;
    }
    (x, nf)
}

/// Search settings, with the pinned defaults.
#[derive(Debug, Clone)]
pub struct EnumerateOptions {
    pub attempts: usize,
    pub seed: u64,
    pub radius: f64,
    pub dedup_tol: f64,
    pub full_ybe_tol: f64,
    pub verdict_tol: f64,
    pub branch_tol: f64,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        Self {
            attempts: 200,
            seed: 42,
            radius: 3.0,
            dedup_tol: 1e-8,
            full_ybe_tol: 1e-25,
            verdict_tol: 1e-20,
            branch_tol: 1e-10,
        }
    }
}

/// One solution found by the search, normalized to `r_0 = 1`.
#[derive(Debug, Clone)]
pub struct FoundSolution {
    pub r: Vec<CFloat>,
    pub full_residual: Float,
    pub verdict: Verdict,
    /// First start that reached it, and how many did.
    pub first_start: usize,
    pub hits: usize,
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    pub spin: Spin,
    pub at: QPoint,
    pub options: EnumerateOptions,
    pub solutions: Vec<FoundSolution>,
    /// Starts that did not converge, or converged to a point failing the
    /// full relation.
    pub failures: usize,
}

fn start_point(seed: u64, index: usize, unknowns: usize, radius: f64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    (0..unknowns)
        .map(|_| {
            let rad = radius * rng.gen::<f64>().sqrt();
            let ang = std::f64::consts::TAU * rng.gen::<f64>();
            Complex64::from_polar(rad, ang)
        })
        .collect()
}

fn full_ybe_numeric(s: Spin, r: &[CFloat], at: &QPoint) -> Result<Float, ClassifyError> {
    let fam = family(s, crate::rep::Frame::Omega);
    let ps: Vec<CMatrix> = fam.projectors.iter().map(|p| Ok(p.evaluate(at)?.to_complex())).collect::<Result<_, ScalarError>>()?;
    let d = ps[0].rows();
    let op = ps.iter().zip(r).fold(CMatrix::zeros(d, d), |acc, (p, c)| acc.add(&p.scale(c)));
    Ok(braid_relation_residual(s, &op).max_abs())
}

fn classify_point(s: Spin, r: &[CFloat], at: &QPoint, o: &EnumerateOptions) -> Result<Verdict, ScalarError> {
    let x = xis(s);
    let one = CFloat::new(at.int(1), at.int(0));
    let close = |target: &dyn Fn(usize) -> Result<Float, ScalarError>| -> Result<bool, ScalarError> {
        for (k, rk) in r.iter().enumerate() {
            let d = rk.sub(&CFloat::new(target(k)?, at.int(0)));
            if cabs(&d).to_f64().value() > o.verdict_tol {
                return Ok(false);
            }
        }
        Ok(true)
    };
    if close(&|k| at.eval_raw(&x[k].div(&x[0])?))? {
        return Ok(Verdict::Drinfeld);
    }
    if close(&|k| at.eval_raw(&x[0].div(&x[k])?))? {
        return Ok(Verdict::DrinfeldInverseScaled);
    }
    if cabs(&r[1].sub(&one)).to_f64().value() <= o.branch_tol {
        return Ok(Verdict::R1EqualsR0Branch);
    }
    Ok(Verdict::Other)
}

fn system_at<T: Field>(s: Spin, eval: impl Fn(&QMatrix) -> Matrix<T>, one: T) -> Result<System<T>, ClassifyError> {
    let mut blocks = Vec::new();
    for n in 0..=s.max_n() {
        let a = a_matrix(s, n)?;
        blocks.push((eval(&a.entries), k_range(s, n)));
    }
    Ok(System { blocks, unknowns: s.twice() as usize, one })
}

/// Multistart search for `r` with `r_0 = 1` solving every reduced braid
/// relation. Odd-numbered starts report the reciprocal of the point they
/// converge to, which reaches solutions outside the start disk. Each start is seeded independently, so the result does not
/// depend on scheduling. Completeness is not guaranteed.
pub fn enumerate_numeric(s: Spin, at: &QPoint, options: &EnumerateOptions) -> Result<Enumeration, ClassifyError> {
    let hp: System<CFloat> = system_at(
        s,
        |m| m.evaluate(at).expect("real entries").to_complex(),
        CFloat::new(at.int(1), at.int(0)),
    )?;
    let lp: System<Complex64> = system_at(
        s,
        |m| {
            let f = m.evaluate(at).expect("real entries");
            Matrix::from_fn(f.rows(), f.cols(), |i, j| Complex64::new(f.get(i, j).to_f64().value(), 0.0))
        },
        Complex64::new(1.0, 0.0),
    )?;
    let to_hp = |z: &Complex64| {
        CFloat::new(
            Float::try_from(z.re).unwrap().with_precision(at.working_precision()).value(),
            Float::try_from(z.im).unwrap().with_precision(at.working_precision()).value(),
        )
    };
    let results: Vec<Option<Vec<CFloat>>> = (0..options.attempts)
        .into_par_iter()
        .map(|i| {
            let x0 = start_point(options.seed, i, hp.unknowns, options.radius);
            let (x, nf) = levenberg_marquardt(&lp, x0, 300, 1e-11);
            if !(nf < 1e-8) {
                return None;
            }
            let (x, nf) = polish(&hp, x.iter().map(to_hp).collect(), 40, 1e-45);
            if !(nf < 1e-30) {
                return None;
            }
            // Odd starts read the point in the reciprocal chart; the solution
            // set is closed under r -> 1/r because (D A)^{-1} = A D^{-1}.
            Some(if i % 2 == 1 { x.iter().map(Field::recip).collect() } else { x })
        })
        .collect();
    let mut solutions: Vec<FoundSolution> = Vec::new();
    let mut failures = 0;
    for (i, res) in results.into_iter().enumerate() {
        let Some(x) = res else {
            failures += 1;
            continue;
        };
        let r = hp.full(&x);
        if let Some(existing) = solutions.iter_mut().find(|sol| {
            sol.r.iter().zip(&r).all(|(a, b)| cabs(&a.sub(b)).to_f64().value() < options.dedup_tol)
        }) {
            existing.hits += 1;
            continue;
        }
        let full = full_ybe_numeric(s, &r, at)?;
        if !(full.to_f64().value() < options.full_ybe_tol) {
            failures += 1;
            continue;
        }
        let verdict = classify_point(s, &r, at, options)?;
        solutions.push(FoundSolution { r, full_residual: full, verdict, first_start: i, hits: 1 });
    }
    Ok(Enumeration { spin: s, at: at.clone(), options: options.clone(), solutions, failures })
}

/// `a`, or `a+bi` / `a-bi` when the imaginary part is visible.
pub fn render_complex(z: &CFloat, bits: usize) -> String {
    let tiny = |x: &Float| x.to_f64().value().abs() < 1e-30;
    let re = if tiny(&z.re) { "0".to_string() } else { decimal_string(&z.re, bits) };
    if tiny(&z.im) {
        return re;
    }
    let im = decimal_string(&z.im, bits);
    match im.strip_prefix('-') {
        Some(rest) => format!("{re}-{rest}i"),
        None => format!("{re}+{im}i"),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolutionJson {
    pub r: Vec<String>,
    pub residual: String,
    pub verdict: Verdict,
    pub first_start: usize,
    pub hits: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BranchCount {
    pub verdict: Verdict,
    pub count: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub spin: Spin,
    pub q: String,
    pub precision: usize,
    pub seed: u64,
    pub attempts: usize,
    pub failures: usize,
    pub branches: Vec<BranchCount>,
    pub solutions: Vec<SolutionJson>,
    /// Every solution with `r_1 ≠ r_0` is one of the two known ones.
    pub consistent: bool,
}

impl Enumeration {
    pub fn has(&self, v: Verdict) -> bool {
        self.solutions.iter().any(|s| s.verdict == v)
    }

    pub fn has_identity(&self) -> bool {
        self.solutions.iter().any(|s| s.r.iter().all(|x| cabs(&x.sub(&CFloat::new(self.at.int(1), self.at.int(0)))).to_f64().value() < 1e-20))
    }

    pub fn consistent(&self) -> bool {
        self.solutions.iter().all(|s| s.verdict != Verdict::Other)
    }

    pub fn report(&self) -> ClassificationReport {
        let verdicts = [Verdict::Drinfeld, Verdict::DrinfeldInverseScaled, Verdict::R1EqualsR0Branch, Verdict::Other];
        ClassificationReport {
            spin: self.spin,
            q: self.at.label().to_string(),
            precision: self.at.precision(),
            seed: self.options.seed,
            attempts: self.options.attempts,
            failures: self.failures,
            branches: verdicts
                .iter()
                .map(|&v| BranchCount { verdict: v, count: self.solutions.iter().filter(|s| s.verdict == v).count() })
                .collect(),
            solutions: self
                .solutions
                .iter()
                .map(|s| SolutionJson {
                    r: s.r.iter().map(|z| render_complex(z, 64)).collect(),
                    residual: decimal_string(&s.full_residual, 16),
                    verdict: s.verdict,
                    first_start: s.first_start,
                    hits: s.hits,
                })
                .collect(),
            consistent: self.consistent(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spin(s: &str) -> Spin {
        s.parse().unwrap()
    }

    #[test]
    fn gpoly_gcd() {
        let c = |n: i64| RationalFunction::from_int(n);
        // (g - 1)(g - 2) and (g - 1)(g + 3)
        let a = GPoly(vec![c(2), c(-3), c(1)]);
        let b = GPoly(vec![c(-3), c(2), c(1)]);
        let g = a.gcd(&b);
        assert_eq!(g, GPoly(vec![c(-1), c(1)]));
        assert_eq!(g.roots().unwrap(), vec![QScalar::one()]);
        assert_eq!(a.roots().unwrap().len(), 2);
    }

    #[test]
    fn known_solutions() {
        for t in 1..=3 {
            let s = Spin::from_twice(t).unwrap();
            for r in [SpectralVector::drinfeld(s), SpectralVector::inverse_scaled(s), SpectralVector::constant(s)] {
                assert!(reduced_ybe_all(&r).unwrap());
            }
        }
    }

    #[test]
    fn cubic_at_one() {
        let c = n1_cubic(spin("1")).unwrap();
        assert!(c.roots_match && c.substitution_zero && c.second_is_inverse && c.third_is_r0);
        let q = |e: i64| QScalar::qpow(QuarterExponent(e));
        // q^{-2}(1 - q^8), q^{-2}(1 + q^4)
        assert_eq!(c.closed_form[1], q(-8).sub(&q(24)));
        assert_eq!(c.closed_form[2], q(-8).add(&q(8)));
    }

    #[test]
    fn forcing_small() {
        let s = spin("1");
        let one = step_force(s, 1, Base::Drinfeld).unwrap();
        assert_eq!(one.forced.len(), 3);
        assert_eq!(one.gjh_agrees, Some(true));
        let two = step_force(s, 2, Base::Drinfeld).unwrap();
        assert_eq!(two.forced, vec![QScalar::zero()]);
        assert!(step_force(s, 3, Base::Drinfeld).is_err());
    }

    #[test]
    fn certificate_half_and_one() {
        for s in ["1/2", "1"] {
            let c = prove_proposition1(spin(s)).unwrap();
            assert!(c.valid, "{s}: {:?}", c.steps.iter().filter(|x| !x.passed()).collect::<Vec<_>>());
        }
    }
}
