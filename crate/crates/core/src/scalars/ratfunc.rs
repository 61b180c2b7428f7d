//! Reduced quotients of integer Laurent polynomials.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::laurent::LaurentPoly;
use super::ScalarError;

/// `num / den` with `gcd(num, den) = 1` in `Z[u]`, `den` at minimal exponent 0
/// with positive leading coefficient. Zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalFunction {
    pub fn zero() -> Self {
        Self { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(LaurentPoly::constant(BigInt::from(n)))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Self { num: p, den: LaurentPoly::one() }
    }

    /// `u^e`.
    pub fn monomial(e: i64) -> Self {
        Self::from_poly(LaurentPoly::monomial(BigInt::one(), e))
    }

    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        Self::normalize_den(num, den)
    }

    /// Moves the unit of `den` into `num`; assumes the pair is coprime.
    fn normalize_den(num: LaurentPoly, den: LaurentPoly) -> Self {
        let (sign, shift, den) = den.split_unit();
        let mut num = num.shift(-shift);
        if sign < 0 {
            num = num.neg();
        }
        Self { num, den }
    }

    pub fn numer(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denom(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn neg(&self) -> Self {
        Self { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let num = self.num.add(&other.num);
            if self.den.is_one() {
                return Self::from_poly(num);
            }
            return Self::reduce(num, self.den.clone());
        }
        // a/b + c/d with g = gcd(b, d): gcd(num, den) divides g.
        let g = self.den.gcd(&other.den);
        if g.is_one() {
            let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
            let den = self.den.mul(&other.den);
            return Self::normalize_den(num, den);
        }
        let b1 = self.den.exact_div(&g).unwrap();
        let d1 = other.den.exact_div(&g).unwrap();
        let num = self.num.mul(&d1).add(&other.num.mul(&b1));
        if num.is_zero() {
            return Self::zero();
        }
        let den = self.den.mul(&d1);
        let h = num.gcd(&g);
        if h.is_one() {
            Self::normalize_den(num, den)
        } else {
            Self::normalize_den(num.exact_div(&h).unwrap(), den.exact_div(&h).unwrap())
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(self.num.mul(&other.num));
        }
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let a = if g1.is_one() { self.num.clone() } else { self.num.exact_div(&g1).unwrap() };
        let d = if g1.is_one() { other.den.clone() } else { other.den.exact_div(&g1).unwrap() };
        let c = if g2.is_one() { other.num.clone() } else { other.num.exact_div(&g2).unwrap() };
        let b = if g2.is_one() { self.den.clone() } else { self.den.exact_div(&g2).unwrap() };
        Self::normalize_den(a.mul(&c), b.mul(&d))
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::normalize_den(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self, ScalarError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i32) -> Result<Self, ScalarError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs();
        Ok(Self { num: base.num.pow(e), den: base.den.pow(e) })
    }

    /// `u -> u^-1`.
    pub fn invert_variable(&self) -> Self {
        Self::normalize_den(self.num.invert_variable(), self.den.invert_variable())
    }

    /// Sign of the leading behaviour as `u -> infinity`.
    pub fn leading_sign(&self) -> i8 {
        if self.is_zero() {
            0
        } else if self.num.leading().is_negative() {
            -1
        } else {
            1
        }
    }

    /// The constant `c` if this is `c * u^0` with integer `c`.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if self.den.is_one() && self.num.is_monomial() && self.num.low() == 0 {
            Some(self.num.leading().clone())
        } else {
            None
        }
    }
}
