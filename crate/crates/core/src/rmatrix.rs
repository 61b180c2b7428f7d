//! Drinfeld R-matrices in `V_s ⊗ V_s`, the braid operator and its spectral
//! projectors.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::matrix::{Matrix, MatrixJson, QMatrix, Ring};
use crate::rep::{gauge_rep, make_rep, Frame, Generator, Rep, Spin};
use crate::scalars::{render_scalar, rho, Float, QPoint, QScalar, QuarterExponent, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RMatrixError {
    #[error("eigenvalues xi_{0} and xi_{1} coincide")]
    DegenerateEigenvalues(usize, usize),
    #[error("k = {k} out of range for spin {spin}")]
    InvalidK { spin: Spin, k: usize },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RSign {
    Plus,
    Minus,
}

/// `q^{±H⊗H}` as a diagonal matrix.
fn q_hh(s: Spin, sign: i64) -> QMatrix {
    let d = s.dim();
    let diag: Vec<QScalar> = (0..d * d)
        .map(|idx| {
            let (a, b) = (idx / d, idx % d);
            // q^{k1 k2} = u^{(2k1)(2k2)}
            QScalar::qpow(QuarterExponent(sign * s.twice_weight(a) * s.twice_weight(b)))
        })
        .collect();
    QMatrix::diagonal(&diag)
}

/// `π⊗π(R^±)` in the frame of `rep`, the series stopping at `n = 2s`.
pub fn r_series(rep: &Rep, sign: RSign) -> QMatrix {
    let s = rep.spin;
    let sg = match sign {
        RSign::Plus => 1,
        RSign::Minus => -1,
    };
    let q = QScalar::qpow(QuarterExponent(4));
    let q_minus_qinv = q.sub(&QScalar::qpow(QuarterExponent(-4)));
    let step = match sign {
        RSign::Plus => rep.xminus.kron(&rep.xplus).scale(&q_minus_qinv),
        RSign::Minus => rep.xplus.kron(&rep.xminus).scale(&q_minus_qinv.neg()),
    };
    let d2 = s.dim() * s.dim();
    let mut power = QMatrix::identity(d2);
    let mut sum = QMatrix::identity(d2);
    for n in 1..=s.twice() as i64 {
        power = power.mul(&step);
        // q^{±(n^2-n)/2} / [n]!
        let c = QScalar::qpow(QuarterExponent(sg * 2 * (n * n - n)))
            .div(&QScalar::qfactorial(n))
            .expect("nonzero q-factorial");
        sum = sum.add(&power.scale(&c));
    }
    let h = q_hh(s, sg);
    h.mul(&sum).mul(&h)
}

pub fn universal_r(s: Spin, sign: RSign) -> QMatrix {
    r_series(&make_rep(s), sign)
}

/// `(negative, exponent)` of `ξ_k = (-1)^k q^{ρ(2s-k) - 2ρ(s)}`.
pub fn xi_parts(s: Spin, k: usize) -> (bool, QuarterExponent) {
    let t = s.twice() as i64;
    let e = rho(2 * (t - k as i64)) - rho(t) * 2;
    (k % 2 == 1, e)
}

pub fn xi(s: Spin, k: usize) -> Result<QScalar, RMatrixError> {
    if k > s.twice() as usize {
        return Err(RMatrixError::InvalidK { spin: s, k });
    }
    let (neg, e) = xi_parts(s, k);
    Ok(QScalar::signed_qpow(neg, e))
}

/// All `ξ_0..ξ_{2s}`.
pub fn xis(s: Spin) -> Vec<QScalar> {
    (0..=s.twice() as usize).map(|k| xi(s, k).unwrap()).collect()
}

/// Braid operator and projectors of one spin in one frame.
#[derive(Debug)]
pub struct Family {
    pub spin: Spin,
    pub frame: Frame,
    pub rep: Rep,
    pub braid: QMatrix,
    /// `projectors[k] = P^{2s-k}`.
    pub projectors: Vec<QMatrix>,
}

fn build_family(s: Spin, frame: Frame) -> Result<Family, RMatrixError> {
    let rep = match frame {
        Frame::Omega => make_rep(s),
        Frame::Gauge => gauge_rep(s),
    };
    let braid = QMatrix::flip(s.dim()).mul(&r_series(&rep, RSign::Plus));
    let projectors = lagrange_projectors(s, &braid)?;
    Ok(Family { spin: s, frame, rep, braid, projectors })
}

/// `P^{2s-k} = Π_{j≠k} (Ř - ξ_j) / (ξ_k - ξ_j)`.
fn lagrange_projectors(s: Spin, braid: &QMatrix) -> Result<Vec<QMatrix>, RMatrixError> {
    let x = xis(s);
    let n = braid.rows();
    let id = QMatrix::identity(n);
    let shifted: Vec<QMatrix> = x.iter().map(|xj| braid.sub(&id.scale(xj))).collect();
    (0..x.len())
        .into_par_iter()
        .map(|k| {
            let mut num = QMatrix::identity(n);
            let mut den = QScalar::one();
            for j in (0..x.len()).filter(|&j| j != k) {
                num = num.mul(&shifted[j]);
                let diff = x[k].sub(&x[j]);
                if diff.is_zero() {
                    return Err(RMatrixError::DegenerateEigenvalues(k, j));
                }
                den = den.mul(&diff);
            }
            Ok(num.scale(&den.inv()?))
        })
        .collect()
}

type FamilyCache = RwLock<HashMap<(Spin, Frame), Arc<Family>>>;

/// Cached braid operator and projectors for `s` in the given frame.
pub fn family(s: Spin, frame: Frame) -> Arc<Family> {
    static CACHE: OnceLock<FamilyCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(f) = cache.read().unwrap().get(&(s, frame)) {
        return f.clone();
    }
    let built = Arc::new(build_family(s, frame).expect("generic q keeps the spectrum simple"));
    cache.write().unwrap().entry((s, frame)).or_insert(built).clone()
}

/// `Σ_k c_k P^{2s-k}`.
pub fn spectral_sum(projectors: &[QMatrix], coeffs: &[QScalar]) -> QMatrix {
    assert_eq!(projectors.len(), coeffs.len());
    let n = projectors[0].rows();
    projectors
        .iter()
        .zip(coeffs)
        .fold(QMatrix::zeros(n, n), |acc, (p, c)| if c.is_zero() { acc } else { acc.add(&p.scale(c)) })
}

/// An operator on `V_s ⊗ V_s` with its optional spectral coefficients
/// `r_k` against `P^{2s-k}`.
#[derive(Debug, Clone)]
pub struct BraidOperator {
    pub spin: Spin,
    pub matrix: QMatrix,
    pub spectral: Option<Vec<QScalar>>,
}

impl BraidOperator {
    /// `Σ_k r_k P^{2s-k}` in the `ω` frame.
    pub fn from_spectral(s: Spin, r: Vec<QScalar>) -> Self {
        let fam = family(s, Frame::Omega);
        Self { spin: s, matrix: spectral_sum(&fam.projectors, &r), spectral: Some(r) }
    }

    /// Recovers `r_k = tr(M P^{2s-k}) / (2(2s-k)+1)` and checks that the
    /// reconstruction is exact; `None` if `M` is not a combination of the
    /// projectors.
    pub fn decompose(s: Spin, matrix: QMatrix) -> Result<Option<Self>, RMatrixError> {
        let fam = family(s, Frame::Omega);
        let t = s.twice() as i64;
        let mut r = Vec::new();
        for (k, p) in fam.projectors.iter().enumerate() {
            let tr = matrix.mul(p).trace();
            r.push(tr.div(&QScalar::from_int(2 * (t - k as i64) + 1))?);
        }
        if spectral_sum(&fam.projectors, &r) != matrix {
            return Ok(None);
        }
        Ok(Some(Self { spin: s, matrix, spectral: Some(r) }))
    }

    pub fn to_json(&self) -> BraidOperatorJson {
        BraidOperatorJson {
            spin: self.spin,
            matrix: self.matrix.to_json(),
            spectral: self.spectral.as_ref().map(|r| {
                r.iter()
                    .enumerate()
                    .map(|(k, c)| SpectralEntry { k, coefficient: render_scalar(c) })
                    .collect()
            }),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralEntry {
    pub k: usize,
    pub coefficient: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct BraidOperatorJson {
    pub spin: Spin,
    pub matrix: MatrixJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectral: Option<Vec<SpectralEntry>>,
}

/// `Ř = P π⊗π(R^+)` with `r_k = ξ_k`.
pub fn braid(s: Spin) -> BraidOperator {
    let fam = family(s, Frame::Omega);
    BraidOperator { spin: s, matrix: fam.braid.clone(), spectral: Some(xis(s)) }
}

/// `Ř^{-1} = Σ_k ξ_k^{-1} P^{2s-k}`.
pub fn braid_inverse(s: Spin) -> BraidOperator {
    let r: Vec<QScalar> = xis(s).iter().map(|x| x.inv().unwrap()).collect();
    BraidOperator::from_spectral(s, r)
}

#[derive(Debug, Clone)]
pub struct ProjectorFamily {
    pub spin: Spin,
    /// `projectors[k] = P^{2s-k}`.
    pub projectors: Vec<QMatrix>,
}

pub fn projectors(s: Spin) -> Result<ProjectorFamily, RMatrixError> {
    let fam = family(s, Frame::Omega);
    Ok(ProjectorFamily { spin: s, projectors: fam.projectors.clone() })
}

/// Invariance defects `[Δ(g), M]` for the four generators.
pub fn invariance_residuals(rep: &Rep, m: &QMatrix) -> Vec<(Generator, QMatrix)> {
    Generator::ALL
        .iter()
        .map(|&g| {
            let d = rep.coproduct(g);
            (g, d.mul(m).sub(&m.mul(&d)))
        })
        .collect()
}

/// `X_{12} X_{23} X_{12} - X_{23} X_{12} X_{23}` on `V_s^{⊗3}`.
pub fn braid_relation_residual<T: Ring>(s: Spin, m: &Matrix<T>) -> Matrix<T> {
    let id = Matrix::<T>::identity(s.dim());
    let m12 = m.kron(&id);
    let m23 = id.kron(m);
    m12.mul(&m23).mul(&m12).sub(&m23.mul(&m12).mul(&m23))
}

/// `(|Ř - P|_∞, |Ř^{-1} - P|_∞)` at `q = 1 + 10^{-k}`, 128 bits.
pub fn q_one_permutation_defect(s: Spin, k: u32) -> Result<(Float, Float), RMatrixError> {
    let den = num_bigint::BigInt::from(10).pow(k);
    let at = QPoint::from_ratio(&(&den + 1), &den, 128, format!("1+1e-{k}"))?;
    let flip = QMatrix::flip(s.dim()).evaluate(&at)?;
    let b = braid(s).matrix.evaluate(&at)?.sub(&flip).max_abs();
    let bi = braid_inverse(s).matrix.evaluate(&at)?.sub(&flip).max_abs();
    Ok((b, bi))
}
