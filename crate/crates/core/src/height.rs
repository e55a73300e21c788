//! Step functions on places and the map x -> f_x, f_x(v) = log ||x||_v.
//!
//! Values are doubles. Wherever possible they also carry an exact form: a
//! rational combination of 1 and of logs of primes ([`LogValue`]). Every
//! finite-place value of f_x is exact, as is the complex-place value
//! (half the log of the norm) and the real-place value of a rational x.
//! Only real embeddings of irrational elements are approximate.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, fmt_rational, parse_rational, Rational};
use crate::error::{Error, Result};
use crate::field::{FieldElement, QuadraticField};
use crate::place_set::CompactOpenSet;
use crate::places::{archimedean_places, places_above, Place, PlaceKind, RationalPlace};

/// Tolerance used when comparing double values that have no exact form.
pub const TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    One,
    Log(u64),
}

impl Atom {
    fn eval(&self) -> f64 {
        match self {
            Atom::One => 1.0,
            Atom::Log(p) => (*p as f64).ln(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::One => write!(f, "1"),
            Atom::Log(p) => write!(f, "log{p}"),
        }
    }
}

/// A finite sum `c_0 + sum c_p log p` with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LogValue {
    terms: BTreeMap<Atom, Rational>,
}

impl LogValue {
    pub fn zero() -> Self {
        LogValue::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut v = LogValue::zero();
        v.add_term(Atom::One, c);
        v
    }

    /// c * log p
    pub fn log_prime(p: u64, c: Rational) -> Self {
        let mut v = LogValue::zero();
        v.add_term(Atom::Log(p), c);
        v
    }

    /// log |q| for a nonzero rational, exactly.
    pub fn log_abs(q: &Rational) -> Result<Self> {
        let mut v = LogValue::zero();
        for (p, e) in arith::factor(q.numer())? {
            v.add_term(Atom::Log(p), arith::int(e as i64));
        }
        for (p, e) in arith::factor(q.denom())? {
            v.add_term(Atom::Log(p), arith::int(-(e as i64)));
        }
        Ok(v)
    }

    fn add_term(&mut self, atom: Atom, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(atom).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&atom);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Atom, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self) -> f64 {
        self.terms.iter().map(|(a, c)| a.eval() * arith::rational_to_f64(c)).sum()
    }

    pub fn add(&self, other: &LogValue) -> LogValue {
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(*a, c.clone());
        }
        out
    }

    pub fn scale(&self, q: &Rational) -> LogValue {
        if q.is_zero() {
            return LogValue::zero();
        }
        LogValue { terms: self.terms.iter().map(|(a, c)| (*a, c * q)).collect() }
    }

    /// `(p, c)` when the value is exactly `c * log p`.
    pub fn single_log(&self) -> Option<(u64, &Rational)> {
        match self.terms.iter().collect::<Vec<_>>().as_slice() {
            [(Atom::Log(p), c)] => Some((*p, c)),
            _ => None,
        }
    }

    /// Sign of the value; exact when there is a single term, otherwise
    /// decided numerically.
    fn abs_value(&self) -> f64 {
        self.eval().abs()
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(a, c)| format!("({c})*{a}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub value: f64,
    pub exact: Option<LogValue>,
}

impl Entry {
    pub fn exact(v: LogValue) -> Entry {
        Entry { value: v.eval(), exact: Some(v) }
    }

    pub fn approx(value: f64) -> Entry {
        Entry { value, exact: None }
    }

    fn is_zero(&self) -> bool {
        match &self.exact {
            Some(v) => v.is_zero(),
            None => self.value == 0.0,
        }
    }
}

/// Real-valued function on the places of one field; absent places are 0.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaceFunction {
    field: QuadraticField,
    entries: BTreeMap<Place, Entry>,
}

/// Coefficient for [`lincomb`]: rational coefficients keep exact forms.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Rational(Rational),
    Real(f64),
}

impl From<Rational> for Scalar {
    fn from(q: Rational) -> Self {
        Scalar::Rational(q)
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Real(x)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::Rational(arith::int(n))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Norm {
    #[serde(rename = "1")]
    L1,
    #[serde(rename = "2")]
    L2,
    #[serde(rename = "inf")]
    LInf,
}

impl Norm {
    pub const ALL: [Norm; 3] = [Norm::L1, Norm::L2, Norm::LInf];

    /// The exponent 1/p (0 for p = infinity).
    pub fn inverse_exponent(&self) -> f64 {
        match self {
            Norm::L1 => 1.0,
            Norm::L2 => 0.5,
            Norm::LInf => 0.0,
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Norm::L1 => "1",
            Norm::L2 => "2",
            Norm::LInf => "inf",
        })
    }
}

impl FromStr for Norm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" => Ok(Norm::L1),
            "2" => Ok(Norm::L2),
            "inf" | "∞" | "infinity" => Ok(Norm::LInf),
            _ => Err(Error::Parse(format!("norm must be 1, 2 or inf, got {s:?}"))),
        }
    }
}

impl PlaceFunction {
    pub fn zero(field: QuadraticField) -> Self {
        PlaceFunction { field, entries: BTreeMap::new() }
    }

    pub fn field(&self) -> QuadraticField {
        self.field
    }

    pub fn set(&mut self, v: Place, entry: Entry) -> Result<()> {
        if v.field() != self.field {
            return Err(Error::FieldMismatch(self.field.d(), v.field().d()));
        }
        if entry.is_zero() {
            self.entries.remove(&v);
        } else {
            self.entries.insert(v, entry);
        }
        Ok(())
    }

    pub fn from_entries(field: QuadraticField, entries: impl IntoIterator<Item = (Place, Entry)>) -> Result<Self> {
        let mut f = PlaceFunction::zero(field);
        for (v, e) in entries {
            f.set(v, e)?;
        }
        Ok(f)
    }

    /// Step function with exact rational values.
    pub fn from_rationals(field: QuadraticField, values: impl IntoIterator<Item = (Place, Rational)>) -> Result<Self> {
        PlaceFunction::from_entries(field, values.into_iter().map(|(v, q)| (v, Entry::exact(LogValue::constant(q)))))
    }

    /// Step function with approximate values.
    pub fn from_values(field: QuadraticField, values: impl IntoIterator<Item = (Place, f64)>) -> Result<Self> {
        PlaceFunction::from_entries(field, values.into_iter().map(|(v, x)| (v, Entry::approx(x))))
    }

    pub fn entries(&self) -> &BTreeMap<Place, Entry> {
        &self.entries
    }

    pub fn value(&self, v: &Place) -> f64 {
        self.entries.get(v).map_or(0.0, |e| e.value)
    }

    /// Exact value at v when known (absent places are exactly 0).
    pub fn exact(&self, v: &Place) -> Option<LogValue> {
        match self.entries.get(v) {
            None => Some(LogValue::zero()),
            Some(e) => e.exact.clone(),
        }
    }

    /// Value divided by log p when it is exactly a rational multiple of
    /// log p for the prime below the finite place v.
    pub fn exact_finite(&self, v: &Place) -> Option<Rational> {
        let p = v.prime_ideal()?.p();
        let e = self.exact(v)?;
        if e.is_zero() {
            return Some(Rational::zero());
        }
        match e.single_log() {
            Some((q, c)) if q == p => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.entries.values().all(|e| e.exact.is_some())
    }

    pub fn support(&self) -> Vec<Place> {
        self.entries.keys().cloned().collect()
    }

    /// Support inside S, decided on exact forms where available and with
    /// `tol` otherwise.
    pub fn supported_in(&self, s: &CompactOpenSet, tol: f64) -> bool {
        self.entries
            .iter()
            .all(|(v, e)| s.contains(v) || (e.exact.is_none() && e.value.abs() < tol))
    }

    pub fn sup_abs(&self) -> f64 {
        self.entries.values().map(|e| e.value.abs()).fold(0.0, f64::max)
    }

    /// Pull a function on the places of Q back to `target`, constant on
    /// each fiber.
    pub fn lift(&self, target: QuadraticField) -> Result<PlaceFunction> {
        if target == self.field {
            return Ok(self.clone());
        }
        if !self.field.is_rational() {
            return Err(Error::UnsupportedTower(format!("cannot lift from {} to {target}", self.field)));
        }
        let mut out = PlaceFunction::zero(target);
        for (v, e) in &self.entries {
            for w in places_above(target, v.below())? {
                out.set(w, e.clone())?;
            }
        }
        Ok(out)
    }
}

/// Pointwise linear combination over one field.
pub fn lincomb(coeffs: &[Scalar], fs: &[&PlaceFunction]) -> Result<PlaceFunction> {
    if coeffs.len() != fs.len() {
        return Err(Error::Arithmetic("coefficient count differs from function count".into()));
    }
    let Some(first) = fs.first() else {
        return Err(Error::Arithmetic("empty combination has no field".into()));
    };
    let field = first.field;
    let mut acc: BTreeMap<Place, Entry> = BTreeMap::new();
    for (c, f) in coeffs.iter().zip(fs) {
        if f.field != field {
            return Err(Error::FieldMismatch(field.d(), f.field.d()));
        }
        for (v, e) in &f.entries {
            let term = match c {
                Scalar::Rational(q) => Entry {
                    value: e.value * arith::rational_to_f64(q),
                    exact: e.exact.as_ref().map(|x| x.scale(q)),
                },
                Scalar::Real(r) => Entry { value: e.value * r, exact: None },
            };
            match acc.get_mut(v) {
                None => {
                    acc.insert(v.clone(), term);
                }
                Some(slot) => {
                    slot.value += term.value;
                    slot.exact = match (&slot.exact, &term.exact) {
                        (Some(x), Some(y)) => Some(x.add(y)),
                        _ => None,
                    };
                }
            }
        }
    }
    // values of exact entries are re-evaluated from the exact form
    let entries = acc.into_iter().map(|(v, e)| match e.exact {
        Some(x) => (v, Entry::exact(x)),
        None => (v, e),
    });
    PlaceFunction::from_entries(field, entries)
}

impl PlaceFunction {
    pub fn sub(&self, other: &PlaceFunction) -> Result<PlaceFunction> {
        lincomb(&[1.into(), (-1).into()], &[self, other])
    }

    pub fn scale(&self, c: Scalar) -> PlaceFunction {
        lincomb(&[c], &[self]).expect("same field")
    }
}

/// ||f||_p with respect to the measure lambda.
pub fn lp_norm(f: &PlaceFunction, p: Norm) -> f64 {
    let terms = f.entries.iter().map(|(v, e)| (v.measure_f64(), e.value.abs()));
    match p {
        Norm::L1 => terms.map(|(m, x)| m * x).sum(),
        Norm::L2 => terms.map(|(m, x)| m * x * x).sum::<f64>().sqrt(),
        Norm::LInf => terms.map(|(_, x)| x).fold(0.0, f64::max),
    }
}

/// Half the L^1 norm: for f = f_x, the absolute logarithmic Weil height of x.
pub fn height(f: &PlaceFunction) -> f64 {
    lp_norm(f, Norm::L1) / 2.0
}

fn check_set(f: &PlaceFunction, s: Option<&CompactOpenSet>) -> Result<()> {
    match s {
        Some(s) if s.base() != f.field => Err(Error::FieldMismatch(f.field.d(), s.base().d())),
        _ => Ok(()),
    }
}

/// Integral of f over S (over all places when S is absent).
pub fn integral(f: &PlaceFunction, s: Option<&CompactOpenSet>) -> Result<f64> {
    check_set(f, s)?;
    Ok(f
        .entries
        .iter()
        .filter(|(v, _)| s.is_none_or(|s| s.contains(v)))
        .map(|(v, e)| v.measure_f64() * e.value)
        .sum())
}

/// The integral in exact form, when every value involved is exact.
pub fn integral_exact(f: &PlaceFunction, s: Option<&CompactOpenSet>) -> Result<Option<LogValue>> {
    check_set(f, s)?;
    let mut acc = LogValue::zero();
    for (v, e) in f.entries.iter().filter(|(v, _)| s.is_none_or(|s| s.contains(v))) {
        match &e.exact {
            Some(x) => acc = acc.add(&x.scale(&v.measure())),
            None => return Ok(None),
        }
    }
    Ok(Some(acc))
}

/// f_x: the function v -> log ||x||_v.
pub fn function_of(x: &FieldElement) -> Result<PlaceFunction> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let field = x.field();
    let mut f = PlaceFunction::zero(field);
    for v in archimedean_places(field) {
        let entry = match v.kind() {
            PlaceKind::Complex => Entry::exact(LogValue::log_abs(&x.norm())?.scale(&arith::rat(1, 2))),
            PlaceKind::Real(_) if x.is_rational() => Entry::exact(LogValue::log_abs(x.a())?),
            PlaceKind::Real(i) => Entry::approx(x.ln_abs_real(*i as usize)),
            PlaceKind::Finite(_) => unreachable!(),
        };
        f.set(v, entry)?;
    }
    let (u, w, m) = x.split_denominator();
    let integral_part = FieldElement::from_omega_coords(field, Rational::from_integer(u), Rational::from_integer(w));
    let mut primes: Vec<u64> = arith::factor(&m)?.into_iter().map(|(p, _)| p).collect();
    primes.extend(arith::factor(&integral_part.norm().to_integer())?.into_iter().map(|(p, _)| p));
    primes.sort_unstable();
    primes.dedup();
    for p in primes {
        for v in places_above(field, RationalPlace::Prime(p))? {
            let c = v.ln_coefficient(x)?.expect("finite place");
            f.set(v, Entry::exact(LogValue::log_prime(p, c)))?;
        }
    }
    Ok(f)
}

/// A power product `prod x_i^(q_i)` with rational exponents: an element of
/// the Q-vector space of nonzero algebraic numbers modulo torsion.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormalProduct {
    field: QuadraticField,
    factors: BTreeMap<FieldElement, Rational>,
}

impl FormalProduct {
    pub fn one(field: QuadraticField) -> Self {
        FormalProduct { field, factors: BTreeMap::new() }
    }

    pub fn from_element(x: FieldElement) -> Result<Self> {
        let mut g = FormalProduct::one(x.field());
        g.push(x, Rational::one())?;
        Ok(g)
    }

    pub fn power(x: FieldElement, q: Rational) -> Result<Self> {
        let mut g = FormalProduct::one(x.field());
        g.push(x, q)?;
        Ok(g)
    }

    pub fn push(&mut self, x: FieldElement, q: Rational) -> Result<()> {
        if x.field() != self.field {
            return Err(Error::FieldMismatch(self.field.d(), x.field().d()));
        }
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        let slot = self.factors.entry(x.clone()).or_insert_with(Rational::zero);
        *slot += q;
        if slot.is_zero() {
            self.factors.remove(&x);
        }
        Ok(())
    }

    pub fn field(&self) -> QuadraticField {
        self.field
    }

    pub fn factors(&self) -> &BTreeMap<FieldElement, Rational> {
        &self.factors
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn mul(&self, other: &FormalProduct) -> Result<FormalProduct> {
        let mut out = self.clone();
        for (x, q) in &other.factors {
            out.push(x.clone(), q.clone())?;
        }
        Ok(out)
    }

    pub fn pow(&self, q: &Rational) -> FormalProduct {
        if q.is_zero() {
            return FormalProduct::one(self.field);
        }
        FormalProduct { field: self.field, factors: self.factors.iter().map(|(x, e)| (x.clone(), e * q)).collect() }
    }

    /// Multiplies out `self^n` where n clears all exponent denominators.
    /// Returns `(n, value)`.
    pub fn cleared_power(&self) -> Result<(i64, FieldElement)> {
        let n = self
            .factors
            .values()
            .fold(num_bigint::BigInt::one(), |acc, q| num_integer::Integer::lcm(&acc, q.denom()));
        let n_r = Rational::from_integer(n.clone());
        let mut acc = self.field.one();
        for (x, q) in &self.factors {
            let e = (q * &n_r)
                .to_integer()
                .to_i64()
                .ok_or_else(|| Error::Arithmetic("exponent overflow".into()))?;
            acc = &acc * &x.pow(e)?;
        }
        Ok((n.to_i64().ok_or_else(|| Error::Arithmetic("exponent overflow".into()))?, acc))
    }

    /// Equality modulo torsion, decided exactly.
    pub fn same_class(&self, other: &FormalProduct) -> Result<bool> {
        let ratio = self.mul(&other.pow(&arith::int(-1)))?;
        let (_, value) = ratio.cleared_power()?;
        Ok(value.is_root_of_unity())
    }
}

impl fmt::Display for FormalProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(x, q)| if q.is_one() { format!("({x})") } else { format!("({x})^({q})") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// f_g for a formal product: sum of q_i * f_{x_i}.
pub fn function_of_product(g: &FormalProduct) -> Result<PlaceFunction> {
    let mut funcs = Vec::with_capacity(g.factors.len());
    let mut coeffs = Vec::with_capacity(g.factors.len());
    for (x, q) in &g.factors {
        funcs.push(function_of(x)?);
        coeffs.push(Scalar::Rational(q.clone()));
    }
    if funcs.is_empty() {
        return Ok(PlaceFunction::zero(g.field));
    }
    let refs: Vec<&PlaceFunction> = funcs.iter().collect();
    lincomb(&coeffs, &refs)
}

/// Absolute logarithmic Weil height of x.
pub fn height_of(x: &FieldElement) -> Result<f64> {
    Ok(height(&function_of(x)?))
}

#[derive(Serialize, Deserialize)]
struct EntryWire {
    place: Place,
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    terms: Option<BTreeMap<String, String>>,
}

#[derive(Serialize, Deserialize)]
struct FunctionWire {
    field: i64,
    entries: Vec<EntryWire>,
}

fn parse_atom(s: &str) -> Result<Atom> {
    if s == "1" {
        return Ok(Atom::One);
    }
    s.strip_prefix("log")
        .and_then(|p| p.parse().ok())
        .map(Atom::Log)
        .ok_or_else(|| Error::Parse(format!("bad atom {s:?}")))
}

impl Serialize for PlaceFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = self
            .entries
            .iter()
            .map(|(v, e)| {
                let exact = self.exact_finite(v).map(|q| fmt_rational(&q));
                let terms = match (&e.exact, &exact) {
                    (Some(x), None) => {
                        Some(x.terms.iter().map(|(a, c)| (a.to_string(), fmt_rational(c))).collect())
                    }
                    _ => None,
                };
                EntryWire { place: v.clone(), value: e.value, exact, terms }
            })
            .collect();
        FunctionWire { field: self.field.d(), entries }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PlaceFunction {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = FunctionWire::deserialize(de)?;
        let field = QuadraticField::new(w.field).map_err(D::Error::custom)?;
        let mut f = PlaceFunction::zero(field);
        for e in w.entries {
            let entry = if let Some(terms) = e.terms {
                let mut v = LogValue::zero();
                for (a, c) in terms {
                    let atom = parse_atom(&a).map_err(D::Error::custom)?;
                    v.add_term(atom, parse_rational(&c).map_err(D::Error::custom)?);
                }
                Entry::exact(v)
            } else if let Some(q) = e.exact {
                let p = e
                    .place
                    .prime_ideal()
                    .ok_or_else(|| D::Error::custom("\"exact\" is only allowed at finite places"))?
                    .p();
                Entry::exact(LogValue::log_prime(p, parse_rational(&q).map_err(D::Error::custom)?))
            } else {
                Entry::approx(e.value)
            };
            f.set(e.place, entry).map_err(D::Error::custom)?;
        }
        Ok(f)
    }
}

#[derive(Serialize, Deserialize)]
struct FactorWire {
    base: FieldElement,
    exp: String,
}

#[derive(Serialize, Deserialize)]
struct ProductWire {
    field: i64,
    factors: Vec<FactorWire>,
}

impl Serialize for FormalProduct {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ProductWire {
            field: self.field.d(),
            factors: self
                .factors
                .iter()
                .map(|(x, q)| FactorWire { base: x.clone(), exp: fmt_rational(q) })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FormalProduct {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = ProductWire::deserialize(de)?;
        let field = QuadraticField::new(w.field).map_err(D::Error::custom)?;
        let mut g = FormalProduct::one(field);
        for f in w.factors {
            let q = parse_rational(&f.exp).map_err(D::Error::custom)?;
            g.push(f.base, q).map_err(D::Error::custom)?;
        }
        Ok(g)
    }
}

/// Largest |value| difference between two functions, on exact forms when
/// both sides have them.
pub fn distance_sup(f: &PlaceFunction, g: &PlaceFunction) -> Result<f64> {
    Ok(f.sub(g)?.entries.values().map(|e| match &e.exact {
        Some(x) => x.abs_value(),
        None => e.value.abs(),
    }).fold(0.0, f64::max))
}
