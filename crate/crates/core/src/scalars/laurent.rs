//! Laurent polynomials in the internal variable `u = q^(1/4)` with integer
//! coefficients, plus the gcd and squarefree machinery the rational-function
//! and radical layers are built on.
//!
//! Units of `Z[u, u^-1]` are `±u^k`; every gcd returned here is normalized to
//! minimal exponent 0 and a positive leading coefficient, and carries the
//! integer content gcd.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Mersenne prime used for modular gcd probes.
const PRIME: u64 = (1 << 61) - 1;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    /// Exponent of `coeffs[0]`.
    low: i64,
    /// Dense coefficients; empty for zero, otherwise first and last nonzero.
    coeffs: Vec<BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self { low: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: BigInt, exp: i64) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { low: exp, coeffs: vec![c] }
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<I: IntoIterator<Item = (i64, BigInt)>>(terms: I) -> Self {
        let terms: Vec<(i64, BigInt)> = terms.into_iter().collect();
        if terms.is_empty() {
            return Self::zero();
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] += c;
        }
        Self::from_dense(lo, coeffs)
    }

    pub(crate) fn from_dense(low: i64, mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead_zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros == coeffs.len() {
            return Self::zero();
        }
        coeffs.drain(..lead_zeros);
        Self { low: low + lead_zeros as i64, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// True for `c * u^k`.
    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    /// `high - low`; zero for monomials and for the zero polynomial.
    pub fn span(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("leading coefficient of zero polynomial")
    }

    pub fn trailing(&self) -> &BigInt {
        &self.coeffs[0]
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        let i = exp - self.low;
        if i < 0 || i as usize >= self.coeffs.len() {
            BigInt::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    /// Nonzero `(exponent, coefficient)` pairs in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self { low: self.low + k, coeffs: self.coeffs.clone() }
    }

    pub fn neg(&self) -> Self {
        Self { low: self.low, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.low.min(other.low);
        let hi = self.high().max(other.high());
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.low - lo) as usize + i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[(other.low - lo) as usize + i] += c;
        }
        Self::from_dense(lo, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.is_monomial() {
            let c = &self.coeffs[0];
            return Self {
                low: self.low + other.low,
                coeffs: other.coeffs.iter().map(|x| x * c).collect(),
            };
        }
        if other.is_monomial() {
            return other.mul(self);
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Self::from_dense(self.low + other.low, coeffs)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { low: self.low, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Substitutes `u -> u^-1`.
    pub fn invert_variable(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self { low: -self.high(), coeffs }
    }

    /// Gcd of the coefficients (nonnegative).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Splits `self = unit * rest` where `unit = ±u^k` and `rest` has minimal
    /// exponent 0 and a positive leading coefficient. Returns `(sign, k, rest)`.
    pub fn split_unit(&self) -> (i8, i64, Self) {
        assert!(!self.is_zero(), "split_unit of zero polynomial");
        let sign = if self.leading().is_negative() { -1 } else { 1 };
        let rest = Self {
            low: 0,
            coeffs: if sign < 0 { self.neg().coeffs } else { self.coeffs.clone() },
        };
        (sign, self.low, rest)
    }

    /// `self` scaled to minimal exponent 0, positive leading coefficient and
    /// unit content.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let (_, _, rest) = self.split_unit();
        let c = rest.content();
        if c.is_one() {
            rest
        } else {
            Self { low: 0, coeffs: rest.coeffs.iter().map(|x| x / &c).collect() }
        }
    }

    /// d/du of the ordinary polynomial obtained by shifting to minimal
    /// exponent 0. Only meaningful for polynomials already at exponent 0.
    fn derivative(&self) -> Self {
        debug_assert!(self.is_zero() || self.low == 0);
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, c)| c * BigInt::from(i + 1))
            .collect();
        Self::from_dense(0, coeffs)
    }

    /// Exact quotient in `Z[u, u^-1]`, or `None` if `divisor` does not divide.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if divisor.is_monomial() {
            let d = &divisor.coeffs[0];
            let mut coeffs = Vec::with_capacity(self.coeffs.len());
            for c in &self.coeffs {
                let (qt, r) = c.div_rem(d);
                if !r.is_zero() {
                    return None;
                }
                coeffs.push(qt);
            }
            return Some(Self { low: self.low - divisor.low, coeffs });
        }
        if self.coeffs.len() < divisor.coeffs.len() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let dl = divisor.coeffs.len();
        let ql = rem.len() - dl + 1;
        let mut quot = vec![BigInt::zero(); ql];
        let lead = divisor.leading();
        for i in (0..ql).rev() {
            let top = &rem[i + dl - 1];
            if top.is_zero() {
                continue;
            }
            let (qt, r) = top.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                if !d.is_zero() {
                    rem[i + j] -= &qt * d;
                }
            }
            quot[i] = qt;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::from_dense(self.low - divisor.low, quot))
    }

    /// Greatest common divisor, normalized to minimal exponent 0, positive
    /// leading coefficient; includes the gcd of the integer contents.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return if other.is_zero() { Self::one() } else { normalize_gcd(other) };
        }
        if other.is_zero() {
            return normalize_gcd(self);
        }
        let ca = self.content();
        let cb = other.content();
        let c = ca.gcd(&cb);
        let a = self.primitive_part();
        let b = other.primitive_part();
        let g = if a.coeffs.len() == 1 || b.coeffs.len() == 1 {
            Self::one()
        } else if a == b {
            a
        } else {
            gcd_primitive(&a, &b)
        };
        g.scale(&c)
    }

    /// Yun squarefree decomposition of a primitive polynomial with minimal
    /// exponent 0 and positive leading coefficient: returns `f_1, f_2, ...`
    /// with `self = prod f_i^i`, each `f_i` squarefree and pairwise coprime.
    pub fn squarefree_decomposition(&self) -> Vec<Self> {
        assert!(self.low == 0 && !self.is_zero() && self.leading().is_positive());
        if self.coeffs.len() == 1 {
            return vec![self.clone()];
        }
        let df = self.derivative();
        let a0 = self.gcd(&df);
        let mut b = self.exact_div(&a0).expect("gcd divides f");
        let c = df.exact_div(&a0).expect("gcd divides f'");
        let mut d = c.sub(&b.derivative());
        let mut out = Vec::new();
        loop {
            let a = b.gcd(&d);
            out.push(a.clone());
            b = b.exact_div(&a).expect("yun: a divides b");
            if b.coeffs.len() == 1 {
                break;
            }
            let c = d.exact_div(&a).expect("yun: a divides d");
            d = c.sub(&b.derivative());
        }
        while out.last().is_some_and(|p| p.is_one()) && out.len() > 1 {
            out.pop();
        }
        out
    }

    /// Evaluates with the supplied coefficient embedding and value of `u`.
    pub fn eval_with<T, F>(&self, u: &T, u_inv: &T, embed: F) -> T
    where
        T: Clone + std::ops::Add<Output = T> + std::ops::Mul<Output = T>,
        F: Fn(&BigInt) -> T,
    {
        // Horner in u starting from the top coefficient, then multiply by u^low.
        let mut acc = embed(&BigInt::zero());
        for c in self.coeffs.iter().rev() {
            acc = acc * u.clone() + embed(c);
        }
        let (base, n) = if self.low >= 0 { (u, self.low) } else { (u_inv, -self.low) };
        let mut p = embed(&BigInt::one());
        let mut b = base.clone();
        let mut n = n as u64;
        while n > 0 {
            if n & 1 == 1 {
                p = p * b.clone();
            }
            n >>= 1;
            if n > 0 {
                b = b.clone() * b.clone();
            }
        }
        acc * p
    }
}

impl Ord for LaurentPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then(self.low.cmp(&other.low))
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for LaurentPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({})", crate::scalars::render::render_poly(self))
    }
}

fn normalize_gcd(p: &LaurentPoly) -> LaurentPoly {
    let (_, _, rest) = p.split_unit();
    rest
}

/// Common stride of all exponents (relative to exponent 0); polynomials here
/// are often polynomials in `u^4` or `u^8`.
fn stride(p: &LaurentPoly) -> i64 {
    let mut g = 0i64;
    for (e, _) in p.terms() {
        g = g.gcd(&e);
        if g == 1 {
            break;
        }
    }
    g.max(1)
}

fn deflate(p: &LaurentPoly, s: i64) -> LaurentPoly {
    if s == 1 {
        return p.clone();
    }
    LaurentPoly::from_terms(p.terms().map(|(e, c)| (e / s, c.clone())))
}

fn inflate(p: &LaurentPoly, s: i64) -> LaurentPoly {
    if s == 1 {
        return p.clone();
    }
    LaurentPoly::from_terms(p.terms().map(|(e, c)| (e * s, c.clone())))
}

/// Gcd of two primitive polynomials with minimal exponent 0, positive leading
/// coefficient and degree >= 1.
fn gcd_primitive(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let s = stride(a).gcd(&stride(b));
    let (a, b) = (deflate(a, s), deflate(b, s));
    let (a, b) = if a.coeffs.len() >= b.coeffs.len() { (a, b) } else { (b, a) };
    if let Some(g) = modular_gcd(&a, &b) {
        return inflate(&g, s);
    }
    inflate(&prs_gcd(a, b), s)
}

fn to_mod(c: &BigInt) -> u64 {
    let m = c.mod_floor(&BigInt::from(PRIME));
    m.to_u64().unwrap()
}

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn invmod(a: u64) -> u64 {
    powmod(a, PRIME - 2)
}

fn trim_mod(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Monic gcd over `F_p` of dense coefficient vectors (ascending).
fn gcd_mod(mut a: Vec<u64>, mut b: Vec<u64>) -> Vec<u64> {
    trim_mod(&mut a);
    trim_mod(&mut b);
    while !b.is_empty() {
        // a <- a mod b
        let inv = invmod(*b.last().unwrap());
        while a.len() >= b.len() && !a.is_empty() {
            let f = mulmod(*a.last().unwrap(), inv);
            let off = a.len() - b.len();
            for (j, bj) in b.iter().enumerate() {
                let t = mulmod(f, *bj);
                a[off + j] = (a[off + j] + PRIME - t) % PRIME;
            }
            trim_mod(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(&l) = a.last() {
        let inv = invmod(l);
        for x in a.iter_mut() {
            *x = mulmod(*x, inv);
        }
    }
    a
}

fn modular_gcd(a: &LaurentPoly, b: &LaurentPoly) -> Option<LaurentPoly> {
    let (la, lb) = (to_mod(a.leading()), to_mod(b.leading()));
    if la == 0 || lb == 0 {
        return None;
    }
    let am: Vec<u64> = a.coeffs.iter().map(to_mod).collect();
    let bm: Vec<u64> = b.coeffs.iter().map(to_mod).collect();
    let g = gcd_mod(am, bm);
    if g.len() <= 1 {
        return Some(LaurentPoly::one());
    }
    if g.len() == b.coeffs.len() && a.exact_div(b).is_some() {
        return Some(b.clone());
    }
    // Lift lc * g with symmetric representatives and verify by division.
    let lc = a.leading().gcd(b.leading());
    let lcm = to_mod(&lc);
    let half = PRIME / 2;
    let lifted: Vec<BigInt> = g
        .iter()
        .map(|&x| {
            let v = mulmod(x, lcm);
            if v > half {
                BigInt::from(v) - BigInt::from(PRIME)
            } else {
                BigInt::from(v)
            }
        })
        .collect();
    let cand = LaurentPoly::from_dense(0, lifted).primitive_part();
    if a.exact_div(&cand).is_some() && b.exact_div(&cand).is_some() {
        Some(cand)
    } else {
        None
    }
}

fn pseudo_rem(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let mut r = a.coeffs.clone();
    let bl = b.coeffs.len();
    let lead = b.leading().clone();
    while r.len() >= bl {
        let top = r.last().unwrap().clone();
        let off = r.len() - bl;
        for x in r.iter_mut() {
            *x *= &lead;
        }
        for (j, d) in b.coeffs.iter().enumerate() {
            r[off + j] -= &top * d;
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
        // keep coefficients small
        let mut c = BigInt::zero();
        for x in &r {
            c = c.gcd(x);
        }
        if !c.is_zero() && !c.is_one() {
            for x in r.iter_mut() {
                *x /= &c;
            }
        }
    }
    LaurentPoly::from_dense(0, r)
}

fn prs_gcd(mut a: LaurentPoly, mut b: LaurentPoly) -> LaurentPoly {
    loop {
        let r = pseudo_rem(&a, &b);
        if r.is_zero() {
            return b.primitive_part();
        }
        if r.coeffs.len() == 1 && r.low == 0 {
            return LaurentPoly::one();
        }
        a = b;
        // low > 0 remainders keep their u-power: u is coprime to both inputs
        b = LaurentPoly::from_dense(0, r.coeffs.clone()).primitive_part();
        if b.coeffs.len() == 1 {
            return LaurentPoly::one();
        }
    }
}
