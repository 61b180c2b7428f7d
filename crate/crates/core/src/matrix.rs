//! Dense matrices over exact or numeric scalars.

use serde::Serialize;

use crate::scalars::{
    decimal_string, evaluate, render_scalar, CFloat, Float, QPoint, QScalar, ScalarError,
};

/// Ring operations a matrix entry needs.
pub trait Ring: Clone + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl Ring for QScalar {
    fn zero() -> Self {
        QScalar::zero()
    }
    fn one() -> Self {
        QScalar::one()
    }
    fn is_zero(&self) -> bool {
        QScalar::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        QScalar::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        QScalar::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        QScalar::mul(self, other)
    }
    fn neg(&self) -> Self {
        QScalar::neg(self)
    }
}

impl Ring for Float {
    fn zero() -> Self {
        Float::ZERO
    }
    fn one() -> Self {
        Float::ONE
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
}

impl Ring for CFloat {
    fn zero() -> Self {
        CFloat::new(Float::ZERO, Float::ZERO)
    }
    fn one() -> Self {
        CFloat::new(Float::ONE, Float::ZERO)
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(&self.re) && num_traits::Zero::is_zero(&self.im)
    }
    fn add(&self, other: &Self) -> Self {
        CFloat::new(&self.re + &other.re, &self.im + &other.im)
    }
    fn sub(&self, other: &Self) -> Self {
        CFloat::new(&self.re - &other.re, &self.im - &other.im)
    }
    fn mul(&self, other: &Self) -> Self {
        CFloat::new(
            &self.re * &other.re - &self.im * &other.im,
            &self.re * &other.im + &self.im * &other.re,
        )
    }
    fn neg(&self) -> Self {
        CFloat::new(-self.re.clone(), -self.im.clone())
    }
}

impl Ring for num_complex::Complex64 {
    fn zero() -> Self {
        Self::new(0.0, 0.0)
    }
    fn one() -> Self {
        Self::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

pub type QMatrix = Matrix<QScalar>;
pub type FMatrix = Matrix<Float>;
pub type CMatrix = Matrix<CFloat>;

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    pub fn diagonal(d: &[T]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (i, x) in d.iter().enumerate() {
            m.entries[i * n + i] = x.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: T) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn try_map<U: Ring, E>(&self, f: impl Fn(&T) -> Result<U, E>) -> Result<Matrix<U>, E> {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>, E>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Ring::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b)).collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    pub fn neg(&self) -> Self {
        self.map(Ring::neg)
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| if x.is_zero() { T::zero() } else { c.mul(x) })
    }

    /// Product that skips zero entries of the left factor.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.entries[idx] = out.entries[idx].add(&a.mul(b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                acc
            })
            .collect()
    }

    /// Kronecker product, left factor most significant.
    pub fn kron(&self, other: &Self) -> Self {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Self::zeros(r, c);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.get(i1, j1);
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        let b = other.get(i2, j2);
                        if b.is_zero() {
                            continue;
                        }
                        out.set(i1 * other.rows + i2, j1 * other.cols + j2, a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> T {
        assert!(self.is_square());
        (0..self.rows).fold(T::zero(), |acc, i| acc.add(self.get(i, i)))
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// `(self)^e` for a square matrix.
    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// The flip `P(x ⊗ y) = y ⊗ x` on a `d^2`-dimensional space.
    pub fn flip(d: usize) -> Self {
        let mut m = Self::zeros(d * d, d * d);
        for a in 0..d {
            for b in 0..d {
                m.set(b * d + a, a * d + b, T::one());
            }
        }
        m
    }
}

impl QMatrix {
    pub fn evaluate(&self, at: &QPoint) -> Result<FMatrix, ScalarError> {
        self.try_map(|x| at.eval_raw(x))
    }

    pub fn q_dual(&self) -> Result<Self, ScalarError> {
        self.try_map(QScalar::q_dual)
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: (0..self.rows)
                .map(|i| self.row(i).iter().map(render_scalar).collect())
                .collect(),
            precision_bits: None,
        }
    }
}

impl FMatrix {
    /// Largest entry modulus.
    pub fn max_abs(&self) -> Float {
        self.entries.iter().map(|x| num_traits::Signed::abs(x)).fold(Float::ZERO, |a, b| if b > a { b } else { a })
    }

    pub fn to_json(&self, precision: usize) -> MatrixJson {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: (0..self.rows)
                .map(|i| self.row(i).iter().map(|x| decimal_string(x, precision)).collect())
                .collect(),
            precision_bits: Some(precision),
        }
    }

    pub fn to_complex(&self) -> CMatrix {
        self.map(|x| CFloat::new(x.clone(), Float::ZERO))
    }
}

impl CMatrix {
    /// Largest entry modulus.
    pub fn max_abs(&self) -> Float {
        self.entries.iter().map(cabs).fold(Float::ZERO, |a, b| if b > a { b } else { a })
    }
}

pub fn cabs(z: &CFloat) -> Float {
    (&z.re * &z.re + &z.im * &z.im).sqrt()
}

/// Serialized layout: entries are exact strings, or decimal strings tagged
/// with their precision in numeric mode.
#[derive(Clone, Debug, Serialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<usize>,
}

/// Evaluates and reports the largest entry of an exact residual.
pub fn residual_norm(m: &QMatrix, at: &QPoint) -> Result<Float, ScalarError> {
    Ok(m.evaluate(at)?.max_abs())
}

pub fn evaluate_entry(x: &QScalar, at: &QPoint) -> Result<Float, ScalarError> {
    Ok(evaluate(x, at)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> QMatrix {
        Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| QScalar::from_int(x)).collect()).collect(),
        )
    }

    #[test]
    fn product_and_kron() {
        let a = m(&[&[1, 2], &[0, 1]]);
        let b = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b), m(&[&[2, 1], &[1, 0]]));
        let k = a.kron(&b);
        assert_eq!(k.get(0, 1), &QScalar::from_int(1));
        assert_eq!(k.get(1, 2), &QScalar::from_int(2));
        assert_eq!(k.get(3, 2), &QScalar::from_int(1));
    }

    #[test]
    fn flip_squares_to_identity() {
        let p = QMatrix::flip(3);
        assert_eq!(p.mul(&p), QMatrix::identity(9));
    }
}
