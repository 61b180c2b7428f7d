//! Multiprecision evaluation of exact scalars at a fixed real `q > 0`.

use std::fmt;

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::IBig;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::laurent::LaurentPoly;
use super::qscalar::QScalar;
use super::ScalarError;

pub type Float = FBig<HalfEven, 2>;
pub type CFloat = num_complex::Complex<Float>;

const GUARD_BITS: usize = 32;

/// A real evaluation point `q`, with `u = q^(1/4)` precomputed.
#[derive(Clone)]
pub struct QPoint {
    label: String,
    precision: usize,
    q: Float,
    u: Float,
    u_inv: Float,
}

impl QPoint {
    /// `q` given as a decimal (`1.3`) or a ratio (`13/10`).
    pub fn new(q: &str, precision: usize) -> Result<Self, ScalarError> {
        let (num, den) = parse_ratio(q)
            .ok_or_else(|| ScalarError::InvalidQPoint(format!("cannot parse {q:?}")))?;
        Self::from_ratio(&num, &den, precision, q.trim().to_string())
    }

    pub fn from_ratio(
        num: &BigInt,
        den: &BigInt,
        precision: usize,
        label: String,
    ) -> Result<Self, ScalarError> {
        if precision < 16 {
            return Err(ScalarError::InvalidQPoint("precision below 16 bits".into()));
        }
        if den.is_zero() || (num.sign() != den.sign()) || num.is_zero() {
            return Err(ScalarError::InvalidQPoint(format!("{label} is not positive")));
        }
        if num == den {
            return Err(ScalarError::InvalidQPoint("q = 1 is excluded".into()));
        }
        let work = precision + GUARD_BITS;
        let q = to_float(num, work) / to_float(den, work);
        let u = q.sqrt().sqrt();
        let u_inv = to_float(&BigInt::from(1), work) / &u;
        Ok(Self { label, precision, q, u, u_inv })
    }

    /// `q = 13/10` at 128 bits.
    pub fn default_point() -> Self {
        Self::new("13/10", 128).expect("default point")
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn working_precision(&self) -> usize {
        self.precision + GUARD_BITS
    }

    pub fn q(&self) -> &Float {
        &self.q
    }

    pub fn u(&self) -> &Float {
        &self.u
    }

    /// An integer at the working precision.
    pub fn int(&self, n: i64) -> Float {
        Float::from(n).with_precision(self.working_precision()).value()
    }

    /// `2^-bits`, handy for tolerances.
    pub fn pow2(&self, bits: isize) -> Float {
        Float::from_parts(IBig::from(1), bits).with_precision(self.working_precision()).value()
    }

    fn eval_poly(&self, p: &LaurentPoly) -> Float {
        let work = self.working_precision();
        p.eval_with(&self.u, &self.u_inv, |c| to_float(c, work))
    }

    /// Evaluates at the working precision without rounding back down.
    pub fn eval_raw(&self, x: &QScalar) -> Result<Float, ScalarError> {
        let mut acc = self.int(0);
        for t in x.terms() {
            let c = t.coeff();
            let mut v = self.eval_poly(c.numer()) / self.eval_poly(c.denom());
            if !t.radicand().is_one() {
                let r = self.eval_poly(t.radicand());
                if r < Float::ZERO {
                    return Err(ScalarError::NegativeRadicand);
                }
                v *= r.sqrt();
            }
            acc += v;
        }
        Ok(acc)
    }
}

impl fmt::Debug for QPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoint(q={}, {} bits)", self.label, self.precision)
    }
}

/// A real number together with the point and precision it was computed at.
#[derive(Clone, Debug)]
pub struct NumericValue {
    pub value: Float,
    pub q_point: String,
    pub precision: usize,
}

impl NumericValue {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().value()
    }

    /// Decimal rendering with as many digits as the precision supports.
    pub fn to_decimal(&self) -> String {
        decimal_string(&self.value, self.precision)
    }
}

impl fmt::Display for NumericValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal())
    }
}

pub fn evaluate(x: &QScalar, at: &QPoint) -> Result<NumericValue, ScalarError> {
    let v = at.eval_raw(x)?;
    Ok(NumericValue {
        value: v.with_precision(at.precision).value(),
        q_point: at.label.clone(),
        precision: at.precision,
    })
}

/// Decimal digits for `bits` of binary precision, in scientific notation.
pub fn decimal_string(x: &Float, bits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let digits = (bits as f64 * std::f64::consts::LOG10_2).floor() as usize;
    let d = x.clone().with_base_and_precision::<10>(digits).value();
    let (sig, exp) = d.into_repr().into_parts();
    let text = sig.to_string();
    let (neg, mut s) = match text.strip_prefix('-') {
        Some(rest) => (true, rest.to_string()),
        None => (false, text.clone()),
    };
    let trimmed = s.trim_end_matches('0').len().max(1);
    let exp = exp + (s.len() - trimmed) as isize;
    s.truncate(trimmed);
    let e10 = exp + s.len() as isize - 1;
    let mantissa = if s.len() > 1 { format!("{}.{}", &s[..1], &s[1..]) } else { s };
    format!("{}{}e{}", if neg { "-" } else { "" }, mantissa, e10)
}

pub(crate) fn to_float(c: &BigInt, precision: usize) -> Float {
    let v = match c.to_i64() {
        Some(small) => Float::from(small),
        None => Float::from(IBig::from_str_radix(&c.to_str_radix(16), 16).unwrap()),
    };
    v.with_precision(precision).value()
}

/// `a/b`, `-a/b`, `d.ddd` or an integer.
fn parse_ratio(s: &str) -> Option<(BigInt, BigInt)> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        return Some((a.trim().parse().ok()?, b.trim().parse().ok()?));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    Some((if neg { -digits } else { digits }, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Float, b: f64, tol: f64) -> bool {
        (a.to_f64().value() - b).abs() < tol
    }

    #[test]
    fn qint_at_two() {
        let at = QPoint::new("2", 128).unwrap();
        let v = evaluate(&QScalar::qint(2), &at).unwrap();
        assert!(close(&v.value, 2.5, 1e-15));
        assert_eq!(v.to_decimal(), "2.5e0");
    }

    #[test]
    fn radical_at_two() {
        let at = QPoint::new("2", 128).unwrap();
        let x = QScalar::qint(2).mul(&QScalar::qint(3)).sqrt().unwrap();
        let v = evaluate(&x, &at).unwrap();
        assert!(close(&v.value, (2.5f64 * 5.25).sqrt(), 1e-14));
    }

    #[test]
    fn rejects_bad_points() {
        assert!(QPoint::new("1", 128).is_err());
        assert!(QPoint::new("-2", 128).is_err());
        assert!(QPoint::new("0", 128).is_err());
        assert!(QPoint::new("abc", 128).is_err());
        assert!(QPoint::new("1.3", 128).is_ok());
    }

    #[test]
    fn zero_evaluates_to_zero() {
        let v = evaluate(&QScalar::zero(), &QPoint::default_point()).unwrap();
        assert_eq!(v.to_decimal(), "0");
    }
}
