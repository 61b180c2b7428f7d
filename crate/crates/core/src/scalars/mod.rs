//! Exact scalars in `u = q^(1/4)` and their numeric evaluation.
//!
//! Every `q`-dependent quantity lives in [`QScalar`]: a sum of rational
//! functions in `u` times square roots of squarefree Laurent polynomials.

mod laurent;
mod numeric;
mod parse;
mod qscalar;
mod ratfunc;
mod render;

pub use laurent::LaurentPoly;
pub use numeric::{decimal_string, evaluate, CFloat, Float, NumericValue, QPoint};
pub use parse::parse_scalar;
pub use qscalar::{QScalar, RadicalTerm};
pub use ratfunc::RationalFunction;
pub use render::{render_poly, render_scalar};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("inverse of a sum of distinct radicals")]
    NonInvertibleRadicalSum,
    #[error("radicand is negative")]
    NegativeRadicand,
    #[error("square root not representable: {0}")]
    UnrepresentableSqrt(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid evaluation point: {0}")]
    InvalidQPoint(String),
}

/// Exponent of `u`, so `QuarterExponent(e)` stands for `q^(e/4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuarterExponent(pub i64);

impl QuarterExponent {
    pub fn from_q_exponent(e: i64) -> Self {
        Self(4 * e)
    }
}

impl std::ops::Add for QuarterExponent {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self(self.0 + o.0)
    }
}

impl std::ops::Sub for QuarterExponent {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self(self.0 - o.0)
    }
}

impl std::ops::Neg for QuarterExponent {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl std::ops::Mul<i64> for QuarterExponent {
    type Output = Self;
    fn mul(self, k: i64) -> Self {
        Self(self.0 * k)
    }
}

/// `t(t+1)` for `t = twice_t / 2`, as a power of `u`.
pub fn rho(twice_t: i64) -> QuarterExponent {
    // (m/2)(m/2 + 1) = m(m + 2)/4
    QuarterExponent(twice_t * (twice_t + 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_values() {
        assert_eq!(rho(1), QuarterExponent(3));
        assert_eq!(rho(0), QuarterExponent(0));
        assert_eq!(rho(4), QuarterExponent(24));
    }
}
