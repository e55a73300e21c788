//! Exact arithmetic in Q and quadratic fields Q(sqrt d).
//!
//! Elements are kept as `a + b*sqrt(d)` with rational coordinates, also when
//! the ring of integers is `Z[(1+sqrt d)/2]`. `d = 1` stands for Q itself.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, fmt_rational, ln_add_exp, parse_rational, rational_ln, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadraticField {
    d: i64,
}

impl QuadraticField {
    pub fn new(d: i64) -> Result<Self> {
        if d != 1 && !arith::is_squarefree(d) {
            return Err(Error::InvalidField(d));
        }
        Ok(QuadraticField { d })
    }

    pub fn rationals() -> Self {
        QuadraticField { d: 1 }
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.d == 1
    }

    pub fn is_real_quadratic(&self) -> bool {
        self.d > 1
    }

    pub fn is_imaginary(&self) -> bool {
        self.d < 0
    }

    /// [K:Q]
    pub fn degree(&self) -> i64 {
        if self.is_rational() {
            1
        } else {
            2
        }
    }

    /// Ring of integers is Z[(1+sqrt d)/2]; false for Q.
    pub fn half_integer_basis(&self) -> bool {
        self.d != 1 && self.d.rem_euclid(4) == 1
    }

    pub fn disc(&self) -> i64 {
        if self.d.rem_euclid(4) == 1 {
            self.d
        } else {
            4 * self.d
        }
    }

    /// Number of real embeddings.
    pub fn signature(&self) -> u32 {
        match self.d {
            1 => 1,
            d if d > 1 => 2,
            _ => 0,
        }
    }

    /// Rank of the unit group.
    pub fn unit_rank(&self) -> usize {
        usize::from(self.is_real_quadratic())
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::from_rational(*self, Rational::zero())
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::from_rational(*self, Rational::one())
    }

    pub fn int(&self, n: i64) -> FieldElement {
        FieldElement::from_rational(*self, arith::int(n))
    }

    /// `a + b*sqrt(d)` with integer coordinates.
    pub fn elem(&self, a: i64, b: i64) -> FieldElement {
        FieldElement::new(*self, arith::int(a), arith::int(b)).expect("b must be 0 over Q")
    }

    /// The generator of the ring of integers over Z: sqrt(d) or (1+sqrt d)/2.
    /// Over Q this is 1.
    pub fn omega(&self) -> FieldElement {
        if self.is_rational() {
            self.one()
        } else if self.half_integer_basis() {
            FieldElement::new(*self, arith::rat(1, 2), arith::rat(1, 2)).unwrap()
        } else {
            self.elem(0, 1)
        }
    }

    /// `(trace, norm)` of omega, so that omega^2 = trace*omega - norm.
    pub(crate) fn omega_poly(&self) -> (i64, i64) {
        if self.half_integer_basis() {
            (1, (1 - self.d) / 4)
        } else {
            (0, -self.d)
        }
    }
}

impl fmt::Display for QuadraticField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.d {
            1 => write!(f, "Q"),
            -1 => write!(f, "Q(i)"),
            d => write!(f, "Q(sqrt({d}))"),
        }
    }
}

/// Accepts `Q`, `Q(i)`, `Q(sqrt(d))`, `Q(sqrtd)`, `Q(√d)` or a bare integer d.
pub fn parse_field(s: &str) -> Result<QuadraticField> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if let Ok(d) = t.parse::<i64>() {
        return QuadraticField::new(d);
    }
    if t == "Q" {
        return Ok(QuadraticField::rationals());
    }
    let inner = t
        .strip_prefix("Q(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("unrecognized field {s:?}")))?;
    if inner == "i" {
        return QuadraticField::new(-1);
    }
    let radicand = parse_radical(inner)
        .ok_or_else(|| Error::Parse(format!("unrecognized field {s:?}")))?;
    QuadraticField::new(radicand)
}

fn parse_radical(s: &str) -> Option<i64> {
    let rest = s.strip_prefix("sqrt").or_else(|| s.strip_prefix('√'))?;
    let rest = rest
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .unwrap_or(rest);
    rest.parse().ok()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: QuadraticField,
    a: Rational,
    b: Rational,
}

impl FieldElement {
    pub fn new(field: QuadraticField, a: Rational, b: Rational) -> Result<Self> {
        if field.is_rational() && !b.is_zero() {
            return Err(Error::Arithmetic("irrational part over Q".into()));
        }
        Ok(FieldElement { field, a, b })
    }

    pub fn from_rational(field: QuadraticField, a: Rational) -> Self {
        FieldElement { field, a, b: Rational::zero() }
    }

    pub fn field(&self) -> QuadraticField {
        self.field
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Moves the element into another field; only rationals can move.
    pub fn embed(&self, field: QuadraticField) -> Result<Self> {
        if field == self.field {
            return Ok(self.clone());
        }
        if !self.is_rational() {
            return Err(Error::UnsupportedTower(format!(
                "{self} is not rational and cannot be moved to {field}"
            )));
        }
        Ok(FieldElement::from_rational(field, self.a.clone()))
    }

    pub fn conj(&self) -> Self {
        FieldElement { field: self.field, a: self.a.clone(), b: -&self.b }
    }

    pub fn norm(&self) -> Rational {
        if self.field.is_rational() {
            return self.a.clone();
        }
        &self.a * &self.a - &self.b * &self.b * arith::int(self.field.d)
    }

    pub fn trace(&self) -> Rational {
        if self.field.is_rational() {
            return self.a.clone();
        }
        &self.a * arith::int(2)
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        if self.field.is_rational() {
            return Ok(FieldElement::from_rational(self.field, self.a.recip()));
        }
        let n = self.norm();
        let c = self.conj();
        Ok(FieldElement { field: self.field, a: &c.a / &n, b: &c.b / &n })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = self.field.one();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &sq;
            }
            k >>= 1;
            if k > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Coordinates (x, y) with self = x + y*omega, rational.
    pub fn omega_coords(&self) -> (Rational, Rational) {
        if self.field.half_integer_basis() {
            (&self.a - &self.b, &self.b * arith::int(2))
        } else {
            (self.a.clone(), self.b.clone())
        }
    }

    pub fn from_omega_coords(field: QuadraticField, x: Rational, y: Rational) -> Self {
        if field.is_rational() {
            assert!(y.is_zero());
            return FieldElement::from_rational(field, x);
        }
        if field.half_integer_basis() {
            let half = &y / arith::int(2);
            FieldElement { field, a: x + &half, b: half }
        } else {
            FieldElement { field, a: x, b: y }
        }
    }

    /// Integer omega-coordinates when the element is an algebraic integer.
    pub fn integral_coords(&self) -> Option<(BigInt, BigInt)> {
        let (x, y) = self.omega_coords();
        (x.is_integer() && y.is_integer()).then(|| (x.to_integer(), y.to_integer()))
    }

    pub fn is_integral(&self) -> bool {
        self.integral_coords().is_some()
    }

    /// Writes self = (x + y*omega)/m with integers and minimal m > 0.
    pub fn split_denominator(&self) -> (BigInt, BigInt, BigInt) {
        let (x, y) = self.omega_coords();
        let m = x.denom().lcm(y.denom());
        let xs = (x * Rational::from_integer(m.clone())).to_integer();
        let ys = (y * Rational::from_integer(m.clone())).to_integer();
        (xs, ys, m)
    }

    /// True iff the element is a root of unity: it and its inverse are
    /// integral and every archimedean absolute value equals 1.
    pub fn is_root_of_unity(&self) -> bool {
        if self.is_zero() || !self.is_integral() {
            return false;
        }
        let Ok(inv) = self.recip() else { return false };
        if !inv.is_integral() {
            return false;
        }
        if self.field.is_imaginary() {
            // |sigma(x)|^2 = N(x) at the single complex place.
            self.norm().is_one()
        } else {
            // both real conjugates have modulus 1 and multiply to +-1
            self.b.is_zero() && self.a.abs().is_one()
        }
    }

    /// log |sigma_idx(self)| at a real embedding (idx 0: sqrt d -> +sqrt d).
    /// Cancellation-free: the conjugate with the small modulus goes through
    /// the exact norm.
    pub fn ln_abs_real(&self, idx: usize) -> f64 {
        assert!(!self.field.is_imaginary(), "no real embedding of {}", self.field);
        assert!(!self.is_zero());
        if self.b.is_zero() {
            return rational_ln(&self.a);
        }
        if self.a.is_zero() {
            return rational_ln(&self.b) + 0.5 * (self.field.d as f64).ln();
        }
        let s_b = if idx == 0 { self.b.signum() } else { -self.b.signum() };
        let same_sign = self.a.signum() == s_b;
        let big = ln_add_exp(
            rational_ln(&self.a),
            rational_ln(&self.b) + 0.5 * (self.field.d as f64).ln(),
        );
        if same_sign {
            big
        } else {
            rational_ln(&self.norm()) - big
        }
    }

    /// log |sigma(self)| at the complex place, i.e. half the log norm.
    pub fn ln_abs_complex(&self) -> f64 {
        assert!(self.field.is_imaginary());
        0.5 * rational_ln(&self.norm())
    }

    /// Numerical value of the real embedding (may lose precision).
    pub fn real_embedding(&self, idx: usize) -> f64 {
        let s = if idx == 0 { 1.0 } else { -1.0 };
        arith::rational_to_f64(&self.a)
            + s * arith::rational_to_f64(&self.b) * (self.field.d.abs() as f64).sqrt()
    }

    /// (re, im) of the embedding sqrt(d) -> i*sqrt(|d|).
    pub fn complex_embedding(&self) -> (f64, f64) {
        (
            arith::rational_to_f64(&self.a),
            arith::rational_to_f64(&self.b) * (self.field.d.abs() as f64).sqrt(),
        )
    }

    /// Ordering key for picking canonical generators among unit multiples:
    /// smallest |b|, then smallest |a|, then a >= 0, then b >= 0.
    pub(crate) fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.b
            .abs()
            .cmp(&other.b.abs())
            .then_with(|| self.a.abs().cmp(&other.a.abs()))
            .then_with(|| self.a.is_negative().cmp(&other.a.is_negative()))
            .then_with(|| self.b.is_negative().cmp(&other.b.is_negative()))
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field
            .cmp(&other.field)
            .then_with(|| self.a.cmp(&other.a))
            .then_with(|| self.b.cmp(&other.b))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let radical = match self.field.d {
            -1 => "i".to_string(),
            d => format!("sqrt({d})"),
        };
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*{}", self.b, radical),
            (false, false) => {
                let sign = if self.b.is_negative() { '-' } else { '+' };
                write!(f, "{}{}{}*{}", self.a, sign, self.b.abs(), radical)
            }
        }
    }
}

fn check_same(x: &FieldElement, y: &FieldElement) {
    assert_eq!(x.field, y.field, "arithmetic across different fields");
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        check_same(self, rhs);
        FieldElement { field: self.field, a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        check_same(self, rhs);
        FieldElement { field: self.field, a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        check_same(self, rhs);
        let d = arith::int(self.field.d);
        FieldElement {
            field: self.field,
            a: &self.a * &rhs.a + &self.b * &rhs.b * d,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl<'a> Div<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    /// Panics on division by zero.
    fn div(self, rhs: &FieldElement) -> FieldElement {
        self * &rhs.recip().expect("division by zero")
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { field: self.field, a: -&self.a, b: -&self.b }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                (&self).$m(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

/// Parses sums of terms like `2-i`, `1/2+3/2*sqrt(5)`, `-sqrt(2)`, `3`.
pub fn parse_element(field: QuadraticField, s: &str) -> Result<FieldElement> {
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(Error::Parse("empty element".into()));
    }
    let mut p = ElementParser { field, text: s, chars, pos: 0 };
    let x = p.expr()?;
    if p.pos < p.chars.len() {
        return Err(p.error());
    }
    Ok(x)
}

// expr = term (('+' | '-') term)*
// term = unary (('*' | '/') unary)*
// unary = ('+' | '-') unary | atom
// atom = integer | 'i' | ('sqrt' | '√') ['('] integer [')'] | '(' expr ')'
struct ElementParser<'a> {
    field: QuadraticField,
    text: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl ElementParser<'_> {
    fn error(&self) -> Error {
        Error::Parse(format!("cannot parse {:?} as an element of {} (at position {})", self.text, self.field, self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<FieldElement> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<FieldElement> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                if d.is_zero() {
                    return Err(Error::ZeroElement);
                }
                acc = &acc * &d.recip()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<FieldElement> {
        if self.eat('-') {
            return Ok(-&self.unary()?);
        }
        self.eat('+');
        self.atom()
    }

    fn integer(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        let n: i64 = digits.parse().map_err(|_| self.error())?;
        Ok(if neg { -n } else { n })
    }

    fn atom(&mut self) -> Result<FieldElement> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let x = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error());
                }
                Ok(x)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(self.field.int(n))
            }
            Some('i') if self.field.d == -1 => {
                self.pos += 1;
                Ok(self.field.elem(0, 1))
            }
            Some('√') => {
                self.pos += 1;
                self.radical_arg()
            }
            Some('s') if self.chars[self.pos..].starts_with(&['s', 'q', 'r', 't']) => {
                self.pos += 4;
                self.radical_arg()
            }
            _ => Err(self.error()),
        }
    }

    fn radical_arg(&mut self) -> Result<FieldElement> {
        let paren = self.eat('(');
        let n = self.integer()?;
        if paren && !self.eat(')') {
            return Err(self.error());
        }
        self.radical(n)
    }

    /// sqrt(n) for n = m^2 or n = d m^2.
    fn radical(&self, n: i64) -> Result<FieldElement> {
        let square_root = |x: i64| -> Option<i64> {
            if x < 0 {
                return None;
            }
            let r = (x as f64).sqrt().round() as i64;
            (r - 1..=r + 1).find(|&t| t >= 0 && t * t == x)
        };
        if let Some(m) = square_root(n) {
            return Ok(self.field.int(m));
        }
        let d = self.field.d;
        if !self.field.is_rational() && n % d == 0 {
            if let Some(m) = square_root(n / d) {
                return Ok(self.field.elem(0, m));
            }
        }
        Err(Error::Parse(format!("sqrt({n}) is not in {}", self.field)))
    }
}

#[derive(Serialize, Deserialize)]
pub(crate) struct ElementWire {
    d: i64,
    a: String,
    b: String,
}

impl Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementWire { d: self.field.d, a: fmt_rational(&self.a), b: fmt_rational(&self.b) }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = ElementWire::deserialize(de)?;
        let field = QuadraticField::new(w.d).map_err(D::Error::custom)?;
        let a = parse_rational(&w.a).map_err(D::Error::custom)?;
        let b = parse_rational(&w.b).map_err(D::Error::custom)?;
        FieldElement::new(field, a, b).map_err(D::Error::custom)
    }
}

/// A field serializes as its parameter d.
impl Serialize for QuadraticField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.d)
    }
}

impl<'de> Deserialize<'de> for QuadraticField {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        QuadraticField::new(i64::deserialize(de)?).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn k(d: i64) -> QuadraticField {
        QuadraticField::new(d).unwrap()
    }

    #[test]
    fn make_field_examples() {
        let q = k(1);
        assert!(q.is_rational());
        assert_eq!(q.signature(), 1);
        let gi = k(-1);
        assert_eq!(gi.disc(), -4);
        assert_eq!(gi.signature(), 0);
        let k5 = k(5);
        assert_eq!(k5.disc(), 5);
        assert!(k5.half_integer_basis());
        assert_eq!(k(2).signature(), 2);
        assert_eq!(QuadraticField::new(12), Err(Error::InvalidField(12)));
        assert_eq!(QuadraticField::new(0), Err(Error::InvalidField(0)));
        assert_eq!(QuadraticField::new(-4), Err(Error::InvalidField(-4)));
    }

    #[test]
    fn parse_fields() {
        assert_eq!(parse_field("Q").unwrap(), k(1));
        assert_eq!(parse_field("Q(i)").unwrap(), k(-1));
        assert_eq!(parse_field("Q(sqrt(-5))").unwrap(), k(-5));
        assert_eq!(parse_field("Q(sqrt2)").unwrap(), k(2));
        assert_eq!(parse_field("Q(√5)").unwrap(), k(5));
        assert_eq!(parse_field("-2").unwrap(), k(-2));
        assert!(parse_field("Q(sqrt(8))").is_err());
    }

    #[test]
    fn parse_elements() {
        let gi = k(-1);
        assert_eq!(parse_element(gi, "2-i").unwrap(), gi.elem(2, -1));
        assert_eq!(parse_element(gi, "(2+i)").unwrap(), gi.elem(2, 1));
        assert_eq!(parse_element(gi, "-3*i").unwrap(), gi.elem(0, -3));
        let k5 = k(5);
        let w = parse_element(k5, "1/2+1/2*sqrt(5)").unwrap();
        assert_eq!(w, k5.omega());
        assert_eq!(parse_element(k(-2), "1-sqrt(-2)").unwrap(), k(-2).elem(1, -1));
        assert_eq!(parse_element(k(1), "-7/3").unwrap().a(), &rat(-7, 3));
        assert!(parse_element(k(1), "1+i").is_err());
        assert_eq!(parse_element(gi, "(3+4*i)/10").unwrap(), FieldElement::new(gi, rat(3, 10), rat(2, 5)).unwrap());
        assert_eq!(parse_element(k(2), "sqrt(8)/(1-sqrt2)").unwrap(), k(2).elem(-4, -2));
        assert_eq!(parse_element(gi, "sqrt(-1)*-2").unwrap(), gi.elem(0, -2));
        assert_eq!(parse_element(k(1), "sqrt(9)").unwrap(), k(1).int(3));
        assert!(parse_element(k(1), "sqrt(2)").is_err());
        assert!(parse_element(gi, "2+").is_err());
        assert!(parse_element(gi, "(2").is_err());
        assert!(parse_element(gi, "1/0").is_err());
        for x in [gi.elem(2, -1), FieldElement::new(k5, rat(-1, 2), rat(3, 7)).unwrap()] {
            assert_eq!(parse_element(x.field(), &x.to_string()).unwrap(), x);
        }
    }

    #[test]
    fn norm_and_inverse() {
        let gi = k(-1);
        let x = gi.elem(2, -1);
        assert_eq!(x.norm(), arith::int(5));
        let y = &x / &gi.elem(2, 1);
        assert_eq!(y, FieldElement::new(gi, rat(3, 5), rat(-4, 5)).unwrap());
        assert_eq!(y.norm(), arith::int(1));
        assert_eq!(&x * &x.recip().unwrap(), gi.one());
        assert_eq!(x.pow(-2).unwrap(), x.pow(2).unwrap().recip().unwrap());
    }

    #[test]
    fn integrality_with_half_integer_basis() {
        let k5 = k(5);
        assert!(k5.omega().is_integral());
        assert_eq!(k5.omega().integral_coords(), Some((0.into(), 1.into())));
        let half = FieldElement::new(k5, rat(1, 2), Rational::zero()).unwrap();
        assert!(!half.is_integral());
        let k3 = k(3);
        assert!(!FieldElement::new(k3, rat(1, 2), rat(1, 2)).unwrap().is_integral());
        let (x, y, m) = FieldElement::new(k3, rat(1, 2), rat(1, 3)).unwrap().split_denominator();
        assert_eq!((x, y, m), (3.into(), 2.into(), 6.into()));
    }

    #[test]
    fn roots_of_unity() {
        let gi = k(-1);
        assert!(gi.elem(0, 1).is_root_of_unity());
        assert!(gi.elem(-1, 0).is_root_of_unity());
        assert!(!(&gi.elem(2, -1) / &gi.elem(2, 1)).is_root_of_unity());
        let k3 = k(-3);
        let zeta = FieldElement::new(k3, rat(1, 2), rat(1, 2)).unwrap();
        assert!(zeta.is_root_of_unity());
        assert!(!k(2).elem(1, 1).is_root_of_unity());
        assert!(k(2).elem(-1, 0).is_root_of_unity());
    }

    #[test]
    fn real_logs_are_cancellation_free() {
        let k2 = k(2);
        let eps = k2.elem(1, 1).pow(40).unwrap();
        let l0 = eps.ln_abs_real(0);
        let l1 = eps.ln_abs_real(1);
        let expected = 40.0 * (1.0 + 2f64.sqrt()).ln();
        assert!((l0 - expected).abs() < 1e-12 * expected);
        assert!((l0 + l1).abs() < 1e-12);
    }

    #[test]
    fn json_shape() {
        let x = k(-1).elem(2, -1);
        let v = serde_json::to_value(&x).unwrap();
        assert_eq!(v, serde_json::json!({"d": -1, "a": "2/1", "b": "-1/1"}));
        let back: FieldElement = serde_json::from_value(v).unwrap();
        assert_eq!(back, x);
        let bad = serde_json::json!({"d": 1, "a": "1/1", "b": "1/1"});
        assert!(serde_json::from_value::<FieldElement>(bad).is_err());
    }
}
