//! Text formats for command-line input.
//!
//! Sets of places: `FIELD:ITEM,ITEM,...` where FIELD is as in
//! [`parse_field`] and each ITEM is
//!
//! * `inf`: every archimedean place; `inf0`/`inf1` a single real place;
//! * `p`: every place above the prime p;
//! * `pa`/`pb`: one of the two places above a split p, in residue order;
//! * `(x)`: every prime dividing the element x, e.g. `Q(i):(2-i)`.
//!
//! Power products: `x^q*y^r*...` with elements in parentheses when they
//! contain `+`/`-`, e.g. `(2-i)^(1/2)*(2+i)^-1`, or the JSON form.

use std::collections::BTreeSet;

use serde_json::Value;

use crate::arith::{self, parse_rational, Rational};
use crate::error::{Error, Result};
use crate::field::{parse_element, parse_field, QuadraticField};
use crate::height::{function_of, Entry, FormalProduct, LogValue, PlaceFunction};
use crate::place_set::CompactOpenSet;
use crate::places::{archimedean_places, places_above, Place, RationalPlace};

pub fn parse_place_set(s: &str) -> Result<CompactOpenSet> {
    let (field, items) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("expected FIELD:ITEMS, got {s:?}")))?;
    let field = parse_field(field)?;
    let mut members = BTreeSet::new();
    for item in split_top_level(items, ',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        members.extend(parse_place_label(field, item)?);
    }
    CompactOpenSet::new(field, members)
}

/// The places named by one item of the set shorthand.
pub fn parse_place_label(field: QuadraticField, item: &str) -> Result<Vec<Place>> {
    let bad = || Error::Parse(format!("unknown place {item:?} for {field}"));
    if item.starts_with('(') {
        let x = parse_element(field, item)?;
        let f = function_of(&x)?;
        let primes: Vec<Place> = f
            .entries()
            .iter()
            .filter(|(v, e)| !v.is_archimedean() && e.value < 0.0)
            .map(|(v, _)| v.clone())
            .collect();
        if primes.is_empty() {
            return Err(Error::Parse(format!("{item} is not divisible by any prime")));
        }
        return Ok(primes);
    }
    if let Some(rest) = item.strip_prefix("inf").or_else(|| item.strip_prefix('∞')) {
        let arch = archimedean_places(field);
        return match rest {
            "" => Ok(arch),
            "0" | "1" if field.is_real_quadratic() => Ok(vec![arch[rest.parse::<usize>().unwrap()].clone()]),
            _ => Err(bad()),
        };
    }
    let digits: String = item.chars().take_while(char::is_ascii_digit).collect();
    let suffix = &item[digits.len()..];
    let p: u64 = digits.parse().map_err(|_| bad())?;
    let fiber = places_above(field, RationalPlace::Prime(p))?;
    match suffix {
        "" => Ok(fiber),
        "a" | "b" if fiber.len() == 2 => Ok(vec![fiber[(suffix == "b") as usize].clone()]),
        _ => Err(bad()),
    }
}

fn split_top_level(s: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if c == sep && depth == 0 {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(c);
        }
    }
    out.push(cur);
    out
}

fn json_entry(v: &Value) -> Result<Entry> {
    match v {
        Value::Number(n) if n.is_i64() => Ok(Entry::exact(LogValue::constant(arith::int(n.as_i64().unwrap())))),
        Value::Number(n) => Ok(Entry::approx(n.as_f64().ok_or_else(|| Error::Parse(format!("bad number {n}")))?)),
        Value::String(s) => Ok(Entry::exact(LogValue::constant(parse_rational(s)?))),
        other => Err(Error::Parse(format!("expected a number or \"num/den\", got {other}"))),
    }
}

/// A target function: either the PlaceFunction JSON or a map from place
/// labels to values, e.g. `{"2": 1, "3": -1}`. Integers and "num/den"
/// strings are exact; a label naming a whole fiber sets every place in it.
pub fn parse_target(field: QuadraticField, text: &str) -> Result<PlaceFunction> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("target JSON: {e}")))?;
    let Value::Object(map) = &v else {
        return Err(Error::Parse("target must be a JSON object".into()));
    };
    if map.contains_key("entries") {
        let f: PlaceFunction = serde_json::from_value(v).map_err(|e| Error::Parse(format!("target JSON: {e}")))?;
        if f.field() != field {
            return Err(Error::FieldMismatch(field.d(), f.field().d()));
        }
        return Ok(f);
    }
    let mut f = PlaceFunction::zero(field);
    for (label, value) in map {
        let entry = json_entry(value)?;
        for place in parse_place_label(field, label)? {
            f.set(place, entry.clone())?;
        }
    }
    Ok(f)
}

/// `x^q*y^r...` or the FormalProduct JSON.
pub fn parse_formal_product(field: QuadraticField, text: &str) -> Result<FormalProduct> {
    let t = text.trim();
    if t.starts_with('{') {
        let g: FormalProduct = serde_json::from_str(t).map_err(|e| Error::Parse(format!("product JSON: {e}")))?;
        if g.field() != field {
            return Err(Error::FieldMismatch(field.d(), g.field().d()));
        }
        return Ok(g);
    }
    let mut g = FormalProduct::one(field);
    if !t.contains('^') {
        if let Ok(x) = parse_element(field, t) {
            g.push(x, arith::int(1))?;
            return Ok(g);
        }
    }
    for factor in split_top_level(t, '*') {
        let factor = factor.trim();
        let parts = split_top_level(factor, '^');
        let (base, exp) = match parts.as_slice() {
            [b] => (b.as_str(), arith::int(1)),
            [b, e] => (b.as_str(), parse_exponent(e)?),
            _ => return Err(Error::Parse(format!("bad factor {factor:?}"))),
        };
        g.push(parse_element(field, base)?, exp)?;
    }
    Ok(g)
}

fn parse_exponent(e: &str) -> Result<Rational> {
    let e = e.trim();
    let inner = e.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(e);
    parse_rational(inner)
}

/// `FIELD` and element text, e.g. `--field "Q(i)" --elem "2-i"`.
pub fn parse_field_element(field: &str, elem: &str) -> Result<crate::field::FieldElement> {
    parse_element(parse_field(field)?, elem)
}
