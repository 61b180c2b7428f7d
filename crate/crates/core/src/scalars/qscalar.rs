use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::laurent::LaurentPoly;
use super::ratfunc::RationalFunction;
use super::{QuarterExponent, ScalarError};

/// `coeff * sqrt(radicand)`.
///
/// The radicand is squarefree in `Z[u]` (squarefree integer content times a
/// squarefree primitive part), has minimal exponent 0 and a positive leading
/// coefficient. A radicand of 1 marks a purely rational term.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RadicalTerm {
    coeff: RationalFunction,
    radicand: LaurentPoly,
}

impl RadicalTerm {
    pub fn coeff(&self) -> &RationalFunction {
        &self.coeff
    }

    pub fn radicand(&self) -> &LaurentPoly {
        &self.radicand
    }

    fn mul(&self, other: &Self) -> Self {
        if self.radicand.is_one() || other.radicand.is_one() {
            let radicand =
                if self.radicand.is_one() { other.radicand.clone() } else { self.radicand.clone() };
            return Self { coeff: self.coeff.mul(&other.coeff), radicand };
        }
        if self.radicand == other.radicand {
            let coeff = self
                .coeff
                .mul(&other.coeff)
                .mul(&RationalFunction::from_poly(self.radicand.clone()));
            return Self { coeff, radicand: LaurentPoly::one() };
        }
        // sqrt(r1) sqrt(r2) = g sqrt((r1/g)(r2/g)), the cofactors being coprime
        let g = self.radicand.gcd(&other.radicand);
        let (r1, r2) = if g.is_one() {
            (self.radicand.clone(), other.radicand.clone())
        } else {
            (self.radicand.exact_div(&g).unwrap(), other.radicand.exact_div(&g).unwrap())
        };
        let mut coeff = self.coeff.mul(&other.coeff);
        if !g.is_one() {
            coeff = coeff.mul(&RationalFunction::from_poly(g));
        }
        Self { coeff, radicand: r1.mul(&r2) }
    }
}

/// Exact element of `Q(q^(1/4))` extended by square roots: a sum of
/// [`RadicalTerm`]s with pairwise distinct radicands, sorted by radicand,
/// none with zero coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QScalar {
    terms: Vec<RadicalTerm>,
}

impl QScalar {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_rational(RationalFunction::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(RationalFunction::from_int(n))
    }

    pub fn from_rational(r: RationalFunction) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Self { terms: vec![RadicalTerm { coeff: r, radicand: LaurentPoly::one() }] }
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Self::from_rational(RationalFunction::from_poly(p))
    }

    /// `u^e = q^(e/4)`.
    pub fn qpow(e: QuarterExponent) -> Self {
        Self::from_rational(RationalFunction::monomial(e.0))
    }

    /// `±q^(e/4)` with the sign given by `negative`.
    pub fn signed_qpow(negative: bool, e: QuarterExponent) -> Self {
        let m = Self::qpow(e);
        if negative {
            m.neg()
        } else {
            m
        }
    }

    /// The q-integer `[t] = (q^t - q^-t) / (q - q^-1)`.
    pub fn qint(t: i64) -> Self {
        if t == 0 {
            return Self::zero();
        }
        if t < 0 {
            return Self::qint(-t).neg();
        }
        // [t] = sum_{j=0}^{t-1} q^{t-1-2j}, exponents in u = q^(1/4)
        let p = LaurentPoly::from_terms((0..t).map(|j| (4 * (t - 1 - 2 * j), BigInt::one())));
        Self::from_poly(p)
    }

    /// `[t]! = [1][2]...[t]`; `[0]! = 1`.
    pub fn qfactorial(t: i64) -> Self {
        assert!(t >= 0, "q-factorial of negative argument");
        (1..=t).fold(Self::one(), |acc, k| acc.mul(&Self::qint(k)))
    }

    /// Builds `coeff * sqrt(radicand)` from an arbitrary nonzero radicand
    /// polynomial, canonicalizing it.
    pub fn sqrt_rational(x: &RationalFunction) -> Result<Self, ScalarError> {
        if x.is_zero() {
            return Ok(Self::zero());
        }
        // sqrt(n/d) = sqrt(n d) / d
        let nd = x.numer().mul(x.denom());
        let (sign, shift, rest) = nd.split_unit();
        if sign < 0 {
            return Err(ScalarError::NegativeRadicand);
        }
        if shift.is_odd() {
            return Err(ScalarError::UnrepresentableSqrt(
                "odd power of q^(1/4) under the root".into(),
            ));
        }
        let content = rest.content();
        let prim = rest.exact_div(&LaurentPoly::constant(content.clone())).unwrap();
        let (csq, cfree) = integer_square_split(&content);
        let mut square = LaurentPoly::monomial(csq, shift / 2);
        let mut radicand = LaurentPoly::constant(cfree);
        for (i, f) in prim.squarefree_decomposition().iter().enumerate() {
            let mult = i as u32 + 1;
            if mult / 2 > 0 {
                square = square.mul(&f.pow(mult / 2));
            }
            if mult % 2 == 1 {
                radicand = radicand.mul(f);
            }
        }
        let coeff = RationalFunction::new(square, x.denom().clone())?;
        Ok(Self { terms: vec![RadicalTerm { coeff, radicand }] })
    }

    /// Square root of a purely rational scalar, on the branch that is positive
    /// as `q -> infinity`.
    pub fn sqrt(&self) -> Result<Self, ScalarError> {
        match self.as_rational() {
            Some(r) => Self::sqrt_rational(&r),
            None => Err(ScalarError::UnrepresentableSqrt(
                "square root of an irrational scalar".into(),
            )),
        }
    }

    pub fn terms(&self) -> &[RadicalTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].radicand.is_one() && self.terms[0].coeff.is_one()
    }

    pub fn is_single_term(&self) -> bool {
        self.terms.len() == 1
    }

    /// The rational part if no radical is present.
    pub fn as_rational(&self) -> Option<RationalFunction> {
        match self.terms.as_slice() {
            [] => Some(RationalFunction::zero()),
            [t] if t.radicand.is_one() => Some(t.coeff.clone()),
            _ => None,
        }
    }

    /// `±q^(e/4)` decomposition when this scalar is a signed monomial.
    pub fn as_signed_qpow(&self) -> Option<(bool, QuarterExponent)> {
        let r = self.as_rational()?;
        if !r.is_poly() || !r.numer().is_monomial() {
            return None;
        }
        let c = r.numer().leading();
        if c.abs().is_one() {
            Some((c.is_negative(), QuarterExponent(r.numer().low())))
        } else {
            None
        }
    }

    fn from_sorted_terms(mut terms: Vec<RadicalTerm>) -> Self {
        terms.sort_by(|a, b| a.radicand.cmp(&b.radicand));
        let mut out: Vec<RadicalTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.radicand == t.radicand => {
                    last.coeff = last.coeff.add(&t.coeff);
                }
                _ => out.push(t),
            }
        }
        out.retain(|t| !t.coeff.is_zero());
        Self { terms: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (a, b) = (&self.terms[i], &other.terms[j]);
            match a.radicand.cmp(&b.radicand) {
                Ordering::Less => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b.clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = a.coeff.add(&b.coeff);
                    if !c.is_zero() {
                        out.push(RadicalTerm { coeff: c, radicand: a.radicand.clone() });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Self { terms: out }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| RadicalTerm { coeff: t.coeff.neg(), radicand: t.radicand.clone() })
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.terms.len() == 1 && other.terms.len() == 1 {
            let t = self.terms[0].mul(&other.terms[0]);
            return Self { terms: vec![t] };
        }
        let mut prods = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                prods.push(a.mul(b));
            }
        }
        Self::from_sorted_terms(prods)
    }

    /// Multiplies by a rational function without touching radicands.
    pub fn scale(&self, r: &RationalFunction) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| RadicalTerm { coeff: t.coeff.mul(r), radicand: t.radicand.clone() })
                .collect(),
        }
    }

    /// Inverse of a single-term scalar: `(c sqrt r)^-1 = sqrt(r) / (c r)`.
    pub fn inv(&self) -> Result<Self, ScalarError> {
        match self.terms.as_slice() {
            [] => Err(ScalarError::DivisionByZero),
            [t] => {
                let denom = t.coeff.mul(&RationalFunction::from_poly(t.radicand.clone()));
                Ok(Self {
                    terms: vec![RadicalTerm { coeff: denom.inv()?, radicand: t.radicand.clone() }],
                })
            }
            _ => Err(ScalarError::NonInvertibleRadicalSum),
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self, ScalarError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i32) -> Result<Self, ScalarError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut b = base;
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// Substitutes `q -> q^-1` (`u -> u^-1`) everywhere and re-canonicalizes.
    ///
    /// `sqrt(r(u))` maps to `u^(-deg r / 2) sqrt(r*(u))` with `r*` the reversed
    /// radicand, which agrees with evaluating the original at `1/q`.
    pub fn q_dual(&self) -> Result<Self, ScalarError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let coeff = t.coeff.invert_variable();
            if t.radicand.is_one() {
                terms.push(RadicalTerm { coeff, radicand: LaurentPoly::one() });
                continue;
            }
            let rev = t.radicand.invert_variable();
            let (sign, shift, rest) = rev.split_unit();
            if sign < 0 {
                return Err(ScalarError::NegativeRadicand);
            }
            if shift.is_odd() {
                return Err(ScalarError::UnrepresentableSqrt(
                    "odd-degree radicand under q -> 1/q".into(),
                ));
            }
            let coeff = coeff.mul(&RationalFunction::monomial(shift / 2));
            terms.push(RadicalTerm { coeff, radicand: rest });
        }
        Ok(Self::from_sorted_terms(terms))
    }

    /// Sign of the scalar as `q -> infinity`, when it has a single term.
    pub fn leading_sign(&self) -> Option<i8> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] => Some(t.coeff.leading_sign()),
            _ => None,
        }
    }
}

/// `c = s^2 * f` with `f` squarefree; trial division is enough for the small
/// contents that occur here.
fn integer_square_split(c: &BigInt) -> (BigInt, BigInt) {
    let mut rest = c.clone();
    let mut square = BigInt::one();
    let mut free = BigInt::one();
    if rest.is_zero() {
        return (BigInt::zero(), BigInt::one());
    }
    let mut p = 2u64;
    while let Some(r) = rest.to_u128() {
        if (p as u128) * (p as u128) > r {
            break;
        }
        let bp = BigInt::from(p);
        let mut count = 0;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            count += 1;
        }
        for _ in 0..count / 2 {
            square *= &bp;
        }
        if count % 2 == 1 {
            free *= &bp;
        }
        p += if p == 2 { 1 } else { 2 };
        if p > 1_000_000 {
            break;
        }
    }
    if !rest.is_one() {
        let r = rest.sqrt();
        if &r * &r == rest {
            square *= r;
        } else {
            free *= rest;
        }
    }
    (square, free)
}

impl fmt::Debug for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QScalar({})", self)
    }
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::render::render_scalar(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(e4: i64) -> QScalar {
        QScalar::qpow(QuarterExponent(e4))
    }

    #[test]
    fn qint_small_values() {
        assert!(QScalar::qint(0).is_zero());
        assert!(QScalar::qint(1).is_one());
        assert_eq!(QScalar::qint(2), q(4).add(&q(-4)));
        assert_eq!(QScalar::qint(-3), QScalar::qint(3).neg());
    }

    #[test]
    fn radical_collapses_on_square() {
        let r = QScalar::qint(2).sqrt().unwrap();
        assert!(!r.terms()[0].radicand().is_one());
        assert_eq!(r.mul(&r), QScalar::qint(2));
    }

    #[test]
    fn distinct_radicals_stay_separate() {
        let a = QScalar::qint(2).sqrt().unwrap();
        let b = QScalar::qint(3).sqrt().unwrap();
        let s = a.add(&b);
        assert_eq!(s.terms().len(), 2);
        assert_eq!(s.sub(&b), a);
        assert_eq!(s.inv(), Err(ScalarError::NonInvertibleRadicalSum));
    }

    #[test]
    fn product_radical_extracts_common_factor() {
        // sqrt([2][3]) * sqrt([3][4]) = [3] sqrt([2][4])
        let s23 = QScalar::qint(2).mul(&QScalar::qint(3)).sqrt().unwrap();
        let s34 = QScalar::qint(3).mul(&QScalar::qint(4)).sqrt().unwrap();
        let s24 = QScalar::qint(2).mul(&QScalar::qint(4)).sqrt().unwrap();
        assert_eq!(s23.mul(&s34), QScalar::qint(3).mul(&s24));
    }

    #[test]
    fn monomial_inverse() {
        let m = q(-6).neg();
        assert_eq!(m.inv().unwrap(), q(6).neg());
    }

    #[test]
    fn sqrt_of_perfect_square_is_rational() {
        let x = QScalar::qint(3).mul(&QScalar::qint(3)).mul(&q(4));
        let r = x.sqrt().unwrap();
        assert_eq!(r, QScalar::qint(3).mul(&q(2)));
        assert_eq!(
            QScalar::from_int(-2).sqrt(),
            Err(ScalarError::NegativeRadicand)
        );
        assert!(matches!(q(1).sqrt(), Err(ScalarError::UnrepresentableSqrt(_))));
    }

    #[test]
    fn content_square_extraction() {
        let x = QScalar::from_int(12).sqrt().unwrap();
        assert_eq!(x.mul(&x), QScalar::from_int(12));
        assert_eq!(x.terms()[0].radicand(), &LaurentPoly::constant(BigInt::from(3)));
    }

    #[test]
    fn q_dual_of_radical() {
        let s = QScalar::qint(2).mul(&QScalar::qint(3)).sqrt().unwrap();
        assert_eq!(s.q_dual().unwrap(), s);
        assert_eq!(q(6).q_dual().unwrap(), q(-6));
    }
}
