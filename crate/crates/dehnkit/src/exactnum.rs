//! Arbitrary-precision rationals and the imaginary quadratic field Q(sqrt(D)).
//!
//! A [`QuadNum`] is `a + b*sqrt(D)` with `a, b` rational and `D` a square-free
//! negative integer. A value with `b = 0` is a plain rational and coerces into
//! any field; mixing two genuinely different fields is a caller bug and panics.

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses "p/q" or "p". Rejects empty input, zero denominators and junk.
pub fn parse_rational(s: &str) -> Result<Rat, ParseNumError> {
    let s = s.trim();
    let bad = || ParseNumError::MalformedRational(s.to_string());
    let parse_int = |t: &str| -> Result<BigInt, ParseNumError> {
        let t = t.trim();
        if t.is_empty() || t.len() > 10_000 {
            return Err(bad());
        }
        BigInt::from_str(t).map_err(|_| bad())
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(parse_int(p)?, den))
        }
    }
}

/// Canonical display: "p/q", or "p" for integers.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseNumError {
    #[error("malformed rational: {0:?}")]
    MalformedRational(String),
    #[error("malformed quadratic expression: {0:?}")]
    MalformedQuad(String),
    #[error("sqrt argument must be a negative integer, got {0:?}")]
    NonNegativeRadicand(String),
    #[error("mixed quadratic fields in one expression")]
    MixedFields,
}

/// Splits n = s^2 * d with d square-free (up to the trial-division bound;
/// any leftover cofactor gets a final perfect-square extraction).
fn squarefree_decompose(n: &BigInt) -> (BigInt, BigInt) {
    let mut square = BigInt::one();
    let mut rest = n.abs();
    let mut p = BigInt::from(2);
    let bound = BigInt::from(1_000_000u32);
    while &p * &p <= rest && p <= bound {
        let p2 = &p * &p;
        while (&rest % &p2).is_zero() {
            rest /= &p2;
            square *= &p;
        }
        p += 1;
    }
    let root = rest.sqrt();
    if &root * &root == rest {
        square *= &root;
        rest = BigInt::one();
    }
    if n.sign() == Sign::Minus {
        rest = -rest;
    }
    (square, rest)
}

/// Square-free part of a nonzero rational (the D with Q(sqrt(r)) = Q(sqrt(D))).
pub fn squarefree_part(r: &Rat) -> BigInt {
    assert!(!r.is_zero());
    squarefree_decompose(&(r.numer() * r.denom())).1
}

/// Exact square root of a rational, if it is a square.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let np = r.numer().sqrt();
    let dp = r.denom().sqrt();
    if &np * &np == *r.numer() && &dp * &dp == *r.denom() {
        Some(Rat::new(np, dp))
    } else {
        None
    }
}

/// An element a + b*sqrt(D) of an imaginary quadratic field.
///
/// `d = 0` marks a plain rational (`b` is zero); such values embed into any
/// field. Two values with different nonzero `d` cannot be combined.
#[derive(Debug, Clone)]
pub struct QuadNum {
    pub a: Rat,
    pub b: Rat,
    pub d: i64,
}

impl PartialEq for QuadNum {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a
            && self.b == other.b
            && (self.b.is_zero() || self.d == other.d || self.d == 0 || other.d == 0)
    }
}
impl Eq for QuadNum {}

impl QuadNum {
    /// a + b*sqrt(d); requires d square-free and negative (or zero with b = 0).
    pub fn new(a: Rat, b: Rat, d: i64) -> Self {
        if b.is_zero() {
            return Self { a, b, d: 0 };
        }
        assert!(d < 0, "quadratic field must be imaginary");
        let (s, rest) = squarefree_decompose(&BigInt::from(d));
        assert!(s.is_one(), "field index must be square-free, got {d}");
        let _ = rest;
        Self { a, b, d }
    }

    /// b*sqrt(n) for any negative integer n, reducing the square part,
    /// e.g. sqrt(-8) = 2*sqrt(-2).
    pub fn sqrt_of(n: i64, coeff: Rat) -> Self {
        assert!(n < 0);
        let (s, d) = squarefree_decompose(&BigInt::from(n));
        let d = i64::try_from(&d).expect("square-free part fits i64");
        QuadNum::new(Rat::zero(), coeff * Rat::from_integer(s), d)
    }

    pub fn from_rat(a: Rat) -> Self {
        Self { a, b: Rat::zero(), d: 0 }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(rat_int(n))
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Field index shared by two operands; panics on a genuine mismatch.
    fn join_d(&self, other: &Self) -> i64 {
        match (self.d, other.d) {
            (0, d) | (d, 0) => d,
            (d1, d2) if d1 == d2 => d1,
            (d1, d2) => panic!("mixed quadratic fields sqrt({d1}) and sqrt({d2})"),
        }
    }

    /// Entrywise field conjugation a + b*sqrt(D) -> a - b*sqrt(D).
    pub fn conj(&self) -> Self {
        Self { a: self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    /// x * conj(x) = a^2 - b^2 D, a nonnegative rational for D < 0.
    pub fn norm(&self) -> Rat {
        &self.a * &self.a - &self.b * &self.b * rat_int(self.d)
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero");
        let n = self.norm();
        Self { a: &self.a / &n, b: -&self.b / &n, d: self.d }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        Self { a: &self.a * r, b: &self.b * r, d: self.d }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = QuadNum::from_int(1);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// The square root inside the same field, when one exists. The returned
    /// root has b > 0, or b = 0 and a >= 0.
    pub fn sqrt_in_field(&self, field_d: i64) -> Option<QuadNum> {
        let d = if self.d != 0 { self.d } else { field_d };
        let dr = rat_int(d);
        if self.b.is_zero() {
            // v = 0: u^2 = a, or u = 0: v^2 d = a.
            if let Some(u) = rat_sqrt(&self.a) {
                return Some(QuadNum::from_rat(u));
            }
            if d != 0 {
                if let Some(v) = rat_sqrt(&(&self.a / &dr)) {
                    if !v.is_zero() {
                        return Some(QuadNum::new(Rat::zero(), v, d));
                    }
                }
            }
            return None;
        }
        // (u + v sqrt(d))^2 = a + b sqrt(d): u^2 + v^2 d = a, 2uv = b.
        // Eliminating v: u^2 = (a ± sqrt(a^2 - b^2 d)) / 2 with rational sqrt.
        let s = rat_sqrt(&self.norm())?;
        for sign in [Rat::one(), -Rat::one()] {
            let u2 = (&self.a + &s * &sign) / rat_int(2);
            if let Some(u) = rat_sqrt(&u2) {
                if u.is_zero() {
                    continue;
                }
                let v = &self.b / (rat_int(2) * &u);
                let cand = QuadNum::new(u, v, d);
                if &cand * &cand == *self {
                    // canonical sign: b > 0, or b = 0 and a >= 0
                    return Some(if cand.b.is_negative() { -&cand } else { cand });
                }
            }
        }
        None
    }
}

impl Add for &QuadNum {
    type Output = QuadNum;
    fn add(self, rhs: &QuadNum) -> QuadNum {
        let d = self.join_d(rhs);
        let b = &self.b + &rhs.b;
        QuadNum { a: &self.a + &rhs.a, d: if b.is_zero() { 0 } else { d }, b }
    }
}

impl Sub for &QuadNum {
    type Output = QuadNum;
    fn sub(self, rhs: &QuadNum) -> QuadNum {
        self + &(-rhs)
    }
}

impl Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum { a: -self.a.clone(), b: -self.b.clone(), d: self.d }
    }
}

impl Mul for &QuadNum {
    type Output = QuadNum;
    fn mul(self, rhs: &QuadNum) -> QuadNum {
        let d = self.join_d(rhs);
        let a = &self.a * &rhs.a + &self.b * &rhs.b * rat_int(d);
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        QuadNum { a, d: if b.is_zero() { 0 } else { d }, b }
    }
}

impl Div for &QuadNum {
    type Output = QuadNum;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &QuadNum) -> QuadNum {
        self * &rhs.inv()
    }
}

macro_rules! forward_owned {
    ($trait:ident, $fn:ident) => {
        impl $trait for QuadNum {
            type Output = QuadNum;
            fn $fn(self, rhs: QuadNum) -> QuadNum {
                $trait::$fn(&self, &rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        -&self
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", fmt_rat(&self.a));
        }
        let root = format!("sqrt({})", self.d);
        let bpart = if self.b.is_one() {
            root
        } else if self.b == -Rat::one() {
            format!("-{root}")
        } else {
            format!("{}*{}", fmt_rat(&self.b), root)
        };
        if self.a.is_zero() {
            write!(f, "{bpart}")
        } else if bpart.starts_with('-') {
            write!(f, "{}{}", fmt_rat(&self.a), bpart)
        } else {
            write!(f, "{}+{}", fmt_rat(&self.a), bpart)
        }
    }
}

/// Parses expressions like "sqrt(-2)", "1/2+3/4*sqrt(-3)", "-1-sqrt(-1)", "5".
pub fn parse_quad(s: &str) -> Result<QuadNum, ParseNumError> {
    let s = s.trim();
    if s.is_empty() || s.len() > 10_000 {
        return Err(ParseNumError::MalformedQuad(s.to_string()));
    }
    // split on top-level +/- (not inside parens, not a leading sign)
    let mut terms: Vec<(bool, &str)> = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    let mut neg = false;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.checked_sub(1).ok_or_else(|| ParseNumError::MalformedQuad(s.into()))?,
            '+' | '-' if depth == 0 && i > start => {
                terms.push((neg, &s[start..i]));
                neg = c == '-';
                start = i + 1;
            }
            '-' if depth == 0 && i == start => {
                neg = !neg;
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 || start > s.len() {
        return Err(ParseNumError::MalformedQuad(s.into()));
    }
    terms.push((neg, &s[start..]));

    let mut acc = QuadNum::from_int(0);
    for (negate, raw) in terms {
        let raw = raw.trim();
        if raw.is_empty() {
            return Err(ParseNumError::MalformedQuad(s.into()));
        }
        let term = parse_term(raw)?;
        let term = if negate { -&term } else { term };
        if !acc.is_rational() && !term.is_rational() && acc.d != term.d {
            return Err(ParseNumError::MixedFields);
        }
        acc = &acc + &term;
    }
    Ok(acc)
}

fn parse_term(t: &str) -> Result<QuadNum, ParseNumError> {
    if let Some(pos) = t.find("sqrt(") {
        let coeff = t[..pos].trim().trim_end_matches('*').trim();
        let rest = &t[pos + 5..];
        let close = rest.find(')').ok_or_else(|| ParseNumError::MalformedQuad(t.into()))?;
        if !rest[close + 1..].trim().is_empty() {
            return Err(ParseNumError::MalformedQuad(t.into()));
        }
        let arg = rest[..close].trim();
        let n: i64 = arg.parse().map_err(|_| ParseNumError::MalformedQuad(t.into()))?;
        if n >= 0 {
            return Err(ParseNumError::NonNegativeRadicand(arg.to_string()));
        }
        let c = if coeff.is_empty() { Rat::one() } else { parse_rational(coeff)? };
        Ok(QuadNum::sqrt_of(n, c))
    } else {
        Ok(QuadNum::from_rat(parse_rational(t)?))
    }
}

/// The roots of unity lying in Q(sqrt(D)), each with its multiplicative order.
///
/// Always {1, -1}; four more sixth/third roots for D = -3 and the fourth
/// roots for D = -1.
pub fn roots_of_unity_in_field(d: i64) -> Vec<(QuadNum, u32)> {
    let one = QuadNum::from_int(1);
    let mut out = vec![(one.clone(), 1), (-&one, 2)];
    match d {
        -1 => {
            let i = QuadNum::new(Rat::zero(), Rat::one(), -1);
            out.push((i.clone(), 4));
            out.push((-&i, 4));
        }
        -3 => {
            let h = rat(1, 2);
            out.push((QuadNum::new(h.clone(), h.clone(), -3), 6));
            out.push((QuadNum::new(h.clone(), -h.clone(), -3), 6));
            out.push((QuadNum::new(-h.clone(), h.clone(), -3), 3));
            out.push((QuadNum::new(-h.clone(), h, -3).conj(), 3));
        }
        _ => {}
    }
    out
}

/// Order of x as a root of unity in its field, if it is one.
pub fn unity_order(x: &QuadNum, field_d: i64) -> Option<u32> {
    let d = if x.d != 0 { x.d } else { field_d };
    roots_of_unity_in_field(d)
        .into_iter()
        .find(|(u, _)| u == x)
        .map(|(_, o)| o)
}
