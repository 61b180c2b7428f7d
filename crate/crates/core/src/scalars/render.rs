//! Text form of scalars: polynomials in `q` with fractional exponents,
//! `(num)/(den)` quotients and `coeff*sqrt(radicand)` terms, e.g.
//! `-q^(-3/2)` or `(q + q^(-1))*sqrt(q^2 + 1 + q^(-2))`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::laurent::LaurentPoly;
use super::qscalar::{QScalar, RadicalTerm};
use super::ratfunc::RationalFunction;

fn q_power(e: i64) -> String {
    let g = e.gcd(&4);
    let (n, d) = (e / g, 4 / g);
    match (n, d) {
        (1, 1) => "q".to_string(),
        (n, 1) if n > 0 => format!("q^{n}"),
        (n, 1) => format!("q^({n})"),
        (n, d) => format!("q^({n}/{d})"),
    }
}

fn monomial(c: &BigInt, e: i64) -> String {
    if e == 0 {
        return c.to_string();
    }
    let qp = q_power(e);
    if c.is_one() {
        qp
    } else if (-c).is_one() {
        format!("-{qp}")
    } else {
        format!("{c}*{qp}")
    }
}

/// Highest power first.
pub fn render_poly(p: &LaurentPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (e, c)) in p.terms().rev().enumerate() {
        if i == 0 {
            out.push_str(&monomial(c, e));
        } else if c.is_negative() {
            out.push_str(" - ");
            out.push_str(&monomial(&-c, e));
        } else {
            out.push_str(" + ");
            out.push_str(&monomial(c, e));
        }
    }
    out
}

fn render_rational(r: &RationalFunction) -> String {
    if r.is_poly() {
        render_poly(r.numer())
    } else {
        format!("({})/({})", render_poly(r.numer()), render_poly(r.denom()))
    }
}

fn render_term(t: &RadicalTerm) -> String {
    if t.radicand().is_one() {
        return render_rational(t.coeff());
    }
    let root = format!("sqrt({})", render_poly(t.radicand()));
    let c = t.coeff();
    if c.is_one() {
        return root;
    }
    if c.neg().is_one() {
        return format!("-{root}");
    }
    if c.is_poly() && c.numer().is_monomial() {
        return format!("{}*{root}", render_poly(c.numer()));
    }
    if c.is_poly() {
        return format!("({})*{root}", render_poly(c.numer()));
    }
    format!("{}*{root}", render_rational(c))
}

pub fn render_scalar(x: &QScalar) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, t) in x.terms().iter().enumerate() {
        let s = render_term(t);
        if i == 0 {
            out.push_str(&s);
        } else if let Some(rest) = s.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&s);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::QuarterExponent;

    #[test]
    fn fractional_exponents() {
        assert_eq!(render_scalar(&QScalar::qpow(QuarterExponent(-6)).neg()), "-q^(-3/2)");
        assert_eq!(render_scalar(&QScalar::qpow(QuarterExponent(4))), "q");
        assert_eq!(render_scalar(&QScalar::qpow(QuarterExponent(1))), "q^(1/4)");
        assert_eq!(render_scalar(&QScalar::qint(2)), "q + q^(-1)");
        assert_eq!(render_scalar(&QScalar::zero()), "0");
    }

    #[test]
    fn radical_form() {
        let s = QScalar::qint(2).sqrt().unwrap();
        assert_eq!(render_scalar(&s), "q^(-1/2)*sqrt(q^2 + 1)");
    }
}
