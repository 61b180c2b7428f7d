//! Spin-s representations of U_q(sl_2), coproducts on tensor powers and
//! highest-weight vectors.
//!
//! Basis vectors of `V_s` are ordered `ω_{-s}, ..., ω_s`; tensor bases are
//! lexicographic with the leftmost factor most significant.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::linalg;
use crate::matrix::QMatrix;
use crate::rmatrix;
use crate::scalars::{QPoint, QScalar, QuarterExponent, RationalFunction, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("invalid spin {0:?}")]
    InvalidSpin(String),
    #[error("n = {n} is out of range for spin {spin}")]
    InvalidN { spin: Spin, n: usize },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A spin `s` stored as `2s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Spin(u32);

impl Spin {
    pub fn from_twice(twice: u32) -> Result<Self, RepError> {
        if twice == 0 {
            return Err(RepError::InvalidSpin("0".into()));
        }
        Ok(Self(twice))
    }

    pub fn twice(self) -> u32 {
        self.0
    }

    pub fn dim(self) -> usize {
        self.0 as usize + 1
    }

    /// `⌊3s⌋`, the largest `n` with `W_n` defined.
    pub fn max_n(self) -> usize {
        (3 * self.0 as usize) / 2
    }

    /// Twice the weight of basis vector `i`.
    pub fn twice_weight(self, i: usize) -> i64 {
        2 * i as i64 - self.0 as i64
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for Spin {
    type Err = RepError;

    /// Accepts `"1/2"`, `"3/2"`, `"2"`, ...
    fn from_str(s: &str) -> Result<Self, RepError> {
        let bad = || RepError::InvalidSpin(s.to_string());
        let twice = match s.trim().split_once('/') {
            Some((a, "2")) => a.trim().parse::<u32>().map_err(|_| bad())?,
            Some(_) => return Err(bad()),
            None => 2 * s.trim().parse::<u32>().map_err(|_| bad())?,
        };
        Self::from_twice(twice).map_err(|_| bad())
    }
}

impl Serialize for Spin {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    XPlus,
    XMinus,
    QH,
    QHInv,
}

impl Generator {
    pub const ALL: [Generator; 4] = [Generator::XPlus, Generator::XMinus, Generator::QH, Generator::QHInv];
}

/// Which basis of `V_s` the matrices are written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Frame {
    /// The orthonormal basis `ω_k`; entries carry square roots.
    Omega,
    /// `e_j = N_j ω_j` with `e_{j+1} = X^+ e_j`; all entries are rational.
    Gauge,
}

#[derive(Debug, Clone)]
pub struct Rep {
    pub spin: Spin,
    pub frame: Frame,
    pub xplus: QMatrix,
    pub xminus: QMatrix,
    pub qh: QMatrix,
    pub qh_inv: QMatrix,
}

pub fn make_rep(s: Spin) -> Rep {
    build_rep(s, Frame::Omega)
}

/// The same representation in the rational frame `e_j`.
pub fn gauge_rep(s: Spin) -> Rep {
    build_rep(s, Frame::Gauge)
}

fn build_rep(s: Spin, frame: Frame) -> Rep {
    let d = s.dim();
    let t = s.twice() as i64;
    let mut xplus = QMatrix::zeros(d, d);
    let mut xminus = QMatrix::zeros(d, d);
    for i in 0..d - 1 {
        // X^+ ω_i = sqrt([2s - i][i + 1]) ω_{i+1}, X^- ω_{i+1} = the same factor ω_i
        let sq = QScalar::qint(t - i as i64).mul(&QScalar::qint(i as i64 + 1));
        match frame {
            Frame::Omega => {
                let r = sq.sqrt().expect("q-integers have a root");
                xplus.set(i + 1, i, r.clone());
                xminus.set(i, i + 1, r);
            }
            Frame::Gauge => {
                xplus.set(i + 1, i, QScalar::one());
                xminus.set(i, i + 1, sq);
            }
        }
    }
    let qh = QMatrix::diagonal(
        &(0..d).map(|i| QScalar::qpow(QuarterExponent(2 * s.twice_weight(i)))).collect::<Vec<_>>(),
    );
    let qh_inv = QMatrix::diagonal(
        &(0..d).map(|i| QScalar::qpow(QuarterExponent(-2 * s.twice_weight(i)))).collect::<Vec<_>>(),
    );
    Rep { spin: s, frame, xplus, xminus, qh, qh_inv }
}

impl Rep {
    pub fn generator(&self, g: Generator) -> &QMatrix {
        match g {
            Generator::XPlus => &self.xplus,
            Generator::XMinus => &self.xminus,
            Generator::QH => &self.qh,
            Generator::QHInv => &self.qh_inv,
        }
    }

    /// `π⊗π(Δ(g))`: `Δ(X) = X ⊗ q^-H + q^H ⊗ X`, `q^±H` group-like.
    pub fn coproduct(&self, g: Generator) -> QMatrix {
        match g {
            Generator::XPlus | Generator::XMinus => {
                let x = self.generator(g);
                x.kron(&self.qh_inv).add(&self.qh.kron(x))
            }
            Generator::QH | Generator::QHInv => {
                let k = self.generator(g);
                k.kron(k)
            }
        }
    }

    /// `π^⊗3((Δ ⊗ id)Δ(g))`.
    pub fn triple_action(&self, g: Generator) -> QMatrix {
        match g {
            Generator::XPlus | Generator::XMinus => {
                let x = self.generator(g);
                let dk = self.qh.kron(&self.qh);
                self.coproduct(g).kron(&self.qh_inv).add(&dk.kron(x))
            }
            Generator::QH | Generator::QHInv => {
                let k = self.generator(g);
                k.kron(k).kron(k)
            }
        }
    }

    /// `π^⊗3((id ⊗ Δ)Δ(g))`, for the coassociativity check.
    pub fn triple_action_right(&self, g: Generator) -> QMatrix {
        match g {
            Generator::XPlus | Generator::XMinus => {
                let x = self.generator(g);
                let dkinv = self.qh_inv.kron(&self.qh_inv);
                x.kron(&dkinv).add(&self.qh.kron(&self.coproduct(g)))
            }
            Generator::QH | Generator::QHInv => {
                let k = self.generator(g);
                k.kron(k).kron(k)
            }
        }
    }
}

/// Residuals of the defining relations for the given images of
/// `X^+, X^-, q^H, q^-H`; all must vanish.
pub fn uq_relation_residuals(
    xp: &QMatrix,
    xm: &QMatrix,
    k: &QMatrix,
    kinv: &QMatrix,
) -> Vec<(&'static str, QMatrix)> {
    let n = xp.rows();
    let id = QMatrix::identity(n);
    let q = QScalar::qpow(QuarterExponent(4));
    let qinv = QScalar::qpow(QuarterExponent(-4));
    // [X+, X-] (q - q^-1) = q^2H - q^-2H
    let comm = xp.mul(xm).sub(&xm.mul(xp)).scale(&q.sub(&qinv));
    let k2 = k.mul(k).sub(&kinv.mul(kinv));
    vec![
        ("commutator", comm.sub(&k2)),
        ("qh_xplus", k.mul(xp).sub(&xp.mul(k).scale(&q))),
        ("qh_xminus", k.mul(xm).sub(&xm.mul(k).scale(&qinv))),
        ("qh_qh_inv", k.mul(kinv).sub(&id)),
        ("qh_inv_qh", kinv.mul(k).sub(&id)),
    ]
}

/// `N_j^2` for the frame change `e_j = N_j ω_j`.
pub fn gauge_norms(s: Spin) -> Vec<RationalFunction> {
    let t = s.twice() as i64;
    let mut out = vec![RationalFunction::one()];
    for i in 0..s.dim() - 1 {
        let f = QScalar::qint(t - i as i64).mul(&QScalar::qint(i as i64 + 1));
        let next = out[i].mul(&f.as_rational().unwrap());
        out.push(next);
    }
    out
}

/// Multi-indices of `V_s^{⊗fold}` in lexicographic order.
fn digits(s: Spin, fold: usize, idx: usize) -> Vec<usize> {
    let d = s.dim();
    let mut out = vec![0; fold];
    let mut r = idx;
    for f in (0..fold).rev() {
        out[f] = r % d;
        r /= d;
    }
    out
}

/// Twice the total weight of a tensor basis vector.
pub fn tensor_twice_weight(s: Spin, fold: usize, idx: usize) -> i64 {
    digits(s, fold, idx).into_iter().map(|i| s.twice_weight(i)).sum()
}

/// `N^2` of a tensor basis vector (product over factors).
pub fn tensor_gauge_norm(norms: &[RationalFunction], s: Spin, fold: usize, idx: usize) -> RationalFunction {
    digits(s, fold, idx).into_iter().fold(RationalFunction::one(), |acc, i| acc.mul(&norms[i]))
}

/// Weight-space indices of `V_s^{⊗fold}` with the given twice-weight.
pub fn weight_indices(s: Spin, fold: usize, twice_weight: i64) -> Vec<usize> {
    let total = s.dim().pow(fold as u32);
    (0..total).filter(|&i| tensor_twice_weight(s, fold, i) == twice_weight).collect()
}

/// Kernel of the total `X^+` on a weight space, in the rational frame.
/// Vectors are full-length coordinate lists.
fn hw_kernel_gauge(s: Spin, fold: usize, twice_weight: i64) -> Result<Vec<Vec<QScalar>>, RepError> {
    let g = gauge_rep(s);
    let xp = match fold {
        2 => g.coproduct(Generator::XPlus),
        3 => g.triple_action(Generator::XPlus),
        _ => panic!("fold must be 2 or 3"),
    };
    let cols = weight_indices(s, fold, twice_weight);
    if cols.is_empty() {
        return Ok(Vec::new());
    }
    let rows = weight_indices(s, fold, twice_weight + 2);
    let total = xp.rows();
    if rows.is_empty() {
        return Ok(cols
            .iter()
            .map(|&c| {
                let mut v = vec![QScalar::zero(); total];
                v[c] = QScalar::one();
                v
            })
            .collect());
    }
    let block = xp.select(&rows, &cols);
    let ker = linalg::kernel(&block)?;
    Ok(ker
        .into_iter()
        .map(|kv| {
            let mut v = vec![QScalar::zero(); total];
            for (c, x) in cols.iter().zip(kv) {
                v[*c] = x;
            }
            v
        })
        .collect())
}

/// Converts rational-frame coordinates to `ω` coordinates.
fn gauge_to_omega(s: Spin, fold: usize, v: &[QScalar]) -> Result<Vec<QScalar>, RepError> {
    let norms = gauge_norms(s);
    v.iter()
        .enumerate()
        .map(|(i, x)| {
            if x.is_zero() {
                return Ok(QScalar::zero());
            }
            let n = QScalar::sqrt_rational(&tensor_gauge_norm(&norms, s, fold, i))?;
            Ok(x.mul(&n))
        })
        .collect()
}

/// Highest-weight vectors of `V_s^{⊗fold}` of weight `twice_weight / 2`, in
/// `ω` coordinates. Empty when there are none.
pub fn hw_space(rep: &Rep, fold: usize, twice_weight: i64) -> Result<Vec<Vec<QScalar>>, RepError> {
    assert!(fold == 2 || fold == 3, "fold must be 2 or 3");
    let s = rep.spin;
    if twice_weight > fold as i64 * s.twice() as i64 {
        return Ok(Vec::new());
    }
    hw_kernel_gauge(s, fold, twice_weight)?
        .iter()
        .map(|v| match rep.frame {
            Frame::Omega => gauge_to_omega(s, fold, v),
            Frame::Gauge => Ok(v.clone()),
        })
        .collect()
}

/// Which adjacent pair of tensor factors a projector acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coupling {
    Left,
    Right,
}

/// Ordered orthonormal basis `ψ_k` of `W_n` (hw vectors of weight `3s - n`),
/// `ψ_k` in the image of `P^{2s-k}` on the coupled pair.
///
/// Stored in the rational frame: `ψ_k = D e_k / sqrt(norms[k])` where `D`
/// is the diagonal frame change and `norms[k] = Σ_i N_i^2 e_k[i]^2`.
#[derive(Debug, Clone)]
pub struct HWBasis {
    pub spin: Spin,
    pub n: usize,
    pub coupling: Coupling,
    pub k_range: Vec<usize>,
    gauge_vectors: Vec<Vec<QScalar>>,
    norms: Vec<RationalFunction>,
    weights: Vec<RationalFunction>,
}

/// `k` values labelling `W_n`: `0..=n` up to `n = 2s`, then `n-2s ..= 4s-n`.
pub fn k_range(s: Spin, n: usize) -> Vec<usize> {
    let t = s.twice() as usize;
    if n <= t {
        (0..=n).collect()
    } else {
        (n - t..=2 * t - n).collect()
    }
}

pub fn wn_basis(rep: &Rep, n: usize) -> Result<HWBasis, RepError> {
    coupled_basis(rep.spin, n, Coupling::Left)
}

/// `W_n` basis adapted to `P_{23}` instead of `P_{12}`.
pub fn wn_basis_right(s: Spin, n: usize) -> Result<HWBasis, RepError> {
    coupled_basis(s, n, Coupling::Right)
}

fn coupled_basis(s: Spin, n: usize, coupling: Coupling) -> Result<HWBasis, RepError> {
    if n > s.max_n() {
        return Err(RepError::InvalidN { spin: s, n });
    }
    let tw = 3 * s.twice() as i64 - 2 * n as i64;
    let kernel = hw_kernel_gauge(s, 3, tw)?;
    let fam = rmatrix::family(s, Frame::Gauge);
    let id = QMatrix::identity(s.dim());
    let norms1 = gauge_norms(s);
    let total = s.dim().pow(3);
    let weights: Vec<RationalFunction> =
        (0..total).map(|i| tensor_gauge_norm(&norms1, s, 3, i)).collect();
    let at = QPoint::default_point();
    let ks = k_range(s, n);
    let mut gauge_vectors = Vec::new();
    let mut norms = Vec::new();
    for &k in &ks {
        let p = &fam.projectors[k];
        let p3 = match coupling {
            Coupling::Left => p.kron(&id),
            Coupling::Right => id.kron(p),
        };
        let image = kernel
            .iter()
            .map(|v| p3.mul_vec(v))
            .find(|w| w.iter().any(|x| !x.is_zero()))
            .expect("every k in range has a hw vector");
        // sign rule: first nonzero coordinate positive at the default point
        let first = image.iter().find(|x| !x.is_zero()).unwrap();
        let positive = at.eval_raw(first)? > crate::scalars::Float::ZERO;
        let image: Vec<QScalar> =
            if positive { image } else { image.iter().map(QScalar::neg).collect() };
        let norm = image
            .iter()
            .zip(&weights)
            .filter(|(x, _)| !x.is_zero())
            .fold(QScalar::zero(), |acc, (x, w)| acc.add(&x.mul(x).scale(w)));
        norms.push(norm.as_rational().expect("rational norm"));
        gauge_vectors.push(image);
    }
    Ok(HWBasis { spin: s, n, coupling, k_range: ks, gauge_vectors, norms, weights })
}

impl HWBasis {
    pub fn len(&self) -> usize {
        self.k_range.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k_range.is_empty()
    }

    /// Unit vectors `ψ_k` in `ω` coordinates, ordered by `k`.
    pub fn vectors(&self) -> Result<Vec<Vec<QScalar>>, RepError> {
        self.gauge_vectors
            .iter()
            .zip(&self.norms)
            .map(|(v, nrm)| {
                let inv_root = QScalar::sqrt_rational(nrm)?.inv()?;
                let w = gauge_to_omega(self.spin, 3, v)?;
                Ok(w.iter().map(|x| x.mul(&inv_root)).collect())
            })
            .collect()
    }

    /// Bilinear pairing `<ψ_a, M φ_b>` in `ω` coordinates for a
    /// rational-frame operator `m` on `V_s^{⊗3}`.
    fn pairing(&self, other: &HWBasis, m: Option<&QMatrix>) -> Result<QMatrix, RepError> {
        let mut out = QMatrix::zeros(self.len(), other.len());
        for (b, w) in other.gauge_vectors.iter().enumerate() {
            let mw = match m {
                Some(m) => m.mul_vec(w),
                None => w.clone(),
            };
            for (a, v) in self.gauge_vectors.iter().enumerate() {
                let mut acc = QScalar::zero();
                for i in 0..v.len() {
                    if v[i].is_zero() || mw[i].is_zero() {
                        continue;
                    }
                    acc = acc.add(&v[i].mul(&mw[i]).scale(&self.weights[i]));
                }
                if acc.is_zero() {
                    continue;
                }
                let scale = {
                    let prod = self.norms[a].mul(&other.norms[b]);
                    QScalar::sqrt_rational(&prod)?.inv()?
                };
                out.set(a, b, acc.mul(&scale));
            }
        }
        Ok(out)
    }

    /// Matrix of a rational-frame operator restricted to `W_n` in this basis.
    pub fn reduce(&self, m_gauge: &QMatrix) -> Result<QMatrix, RepError> {
        self.pairing(self, Some(m_gauge))
    }

    /// Gram matrix `<ψ_a, ψ_b>`.
    pub fn gram(&self) -> Result<QMatrix, RepError> {
        self.pairing(self, None)
    }

    /// Overlaps `<ψ_a, φ_b>` with another basis of the same `W_n`.
    pub fn overlap(&self, other: &HWBasis) -> Result<QMatrix, RepError> {
        self.pairing(other, None)
    }
}

/// Multiplicity of the irreducible of highest weight `w` in `V_s^{⊗fold}`
/// by character counting: `mult(w) - mult(w+1)`.
pub fn cg_multiplicity(s: Spin, fold: usize, twice_weight: i64) -> usize {
    let d = s.dim() as i64;
    let mut counts = std::collections::HashMap::new();
    let mut cur: Vec<i64> = vec![0];
    for _ in 0..fold {
        cur = cur.iter().flat_map(|&w| (0..d).map(move |i| w + 2 * i - (d - 1))).collect();
    }
    for w in cur {
        *counts.entry(w).or_insert(0usize) += 1;
    }
    let at = |w: i64| counts.get(&w).copied().unwrap_or(0);
    at(twice_weight) - at(twice_weight + 2)
}
