//! Parser for the text form produced by [`super::render`]. Accepts general
//! arithmetic expressions over integers, `q`, `sqrt(..)`, `+ - * /`,
//! parentheses and `^` (rational exponents on `q`, integer ones elsewhere).

use num_bigint::BigInt;

use super::{QScalar, QuarterExponent, ScalarError};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Q,
    Sqrt,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<Tok>, ScalarError> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Tok::Int(text.parse().unwrap()));
            }
            'q' => {
                out.push(Tok::Q);
                i += 1;
            }
            's' if chars[i..].iter().take(4).collect::<String>() == "sqrt" => {
                out.push(Tok::Sqrt);
                i += 4;
            }
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            other => return Err(ScalarError::Parse(format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<(), ScalarError> {
        match self.next() {
            Some(ref got) if *got == t => Ok(()),
            got => Err(ScalarError::Parse(format!("expected {t:?}, found {got:?}"))),
        }
    }

    fn expr(&mut self) -> Result<QScalar, ScalarError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<QScalar, ScalarError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    acc = acc.div(&self.unary()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<QScalar, ScalarError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    /// `n`, `-n`, `(n)`, `(-n)`, `(n/d)` or `(-n/d)`.
    fn exponent(&mut self) -> Result<(i64, i64), ScalarError> {
        let paren = self.peek() == Some(&Tok::LParen);
        if paren {
            self.pos += 1;
        }
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let num = self.int()?;
        let den = if paren && self.peek() == Some(&Tok::Slash) {
            self.pos += 1;
            self.int()?
        } else {
            1
        };
        if paren {
            self.expect(Tok::RParen)?;
        }
        if den == 0 {
            return Err(ScalarError::Parse("zero exponent denominator".into()));
        }
        Ok((if neg { -num } else { num }, den))
    }

    fn int(&mut self) -> Result<i64, ScalarError> {
        match self.next() {
            Some(Tok::Int(n)) => {
                i64::try_from(n).map_err(|_| ScalarError::Parse("exponent too large".into()))
            }
            got => Err(ScalarError::Parse(format!("expected integer, found {got:?}"))),
        }
    }

    fn power(&mut self) -> Result<QScalar, ScalarError> {
        if self.peek() == Some(&Tok::Q) {
            self.pos += 1;
            if self.peek() == Some(&Tok::Caret) {
                self.pos += 1;
                let (n, d) = self.exponent()?;
                if (4 * n) % d != 0 {
                    return Err(ScalarError::Parse(format!(
                        "q^({n}/{d}) is not a power of q^(1/4)"
                    )));
                }
                return Ok(QScalar::qpow(QuarterExponent(4 * n / d)));
            }
            return Ok(QScalar::qpow(QuarterExponent(4)));
        }
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let (n, d) = self.exponent()?;
            if d != 1 {
                return Err(ScalarError::Parse("fractional power of a non-q base".into()));
            }
            let e = i32::try_from(n).map_err(|_| ScalarError::Parse("exponent too large".into()))?;
            return base.pow(e);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<QScalar, ScalarError> {
        match self.next() {
            Some(Tok::Int(n)) => {
                let p = super::LaurentPoly::constant(n);
                Ok(QScalar::from_poly(p))
            }
            Some(Tok::Sqrt) => {
                self.expect(Tok::LParen)?;
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                inner.sqrt()
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            got => Err(ScalarError::Parse(format!("unexpected token {got:?}"))),
        }
    }
}

pub fn parse_scalar(s: &str) -> Result<QScalar, ScalarError> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(ScalarError::Parse("empty input".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(ScalarError::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rendered_forms() {
        let x = parse_scalar("-q^(-3/2)").unwrap();
        assert_eq!(x, QScalar::qpow(QuarterExponent(-6)).neg());
        assert_eq!(parse_scalar("q + q^(-1)").unwrap(), QScalar::qint(2));
        assert_eq!(parse_scalar("(q^2 - q^(-2))/(q - q^(-1))").unwrap(), QScalar::qint(2));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_scalar("q^(1/3)").is_err());
        assert!(parse_scalar("x").is_err());
        assert!(parse_scalar("(q").is_err());
        assert!(parse_scalar("").is_err());
    }
}
