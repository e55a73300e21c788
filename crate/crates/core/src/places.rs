//! Places of Q and quadratic fields, their normalized absolute values and
//! the measure of the basic sets Y(K, v).
//!
//! The absolute value at v extends the usual one on Q: at a complex place it
//! is the plain modulus, and at a prime P above p it is `p^(-ord_P / e)`.
//! The local degree is carried by the measure `[K_v:Q_v]/[K:Q]` instead.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{self, Rational};
use crate::error::{Error, Result};
use crate::field::{FieldElement, QuadraticField};
use crate::ideal::{factor_prime, PrimeIdeal, Splitting};

/// A place of Q: the archimedean one or a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RationalPlace {
    Infinite,
    Prime(u64),
}

impl fmt::Display for RationalPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalPlace::Infinite => write!(f, "inf"),
            RationalPlace::Prime(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for RationalPlace {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "∞" | "infinity" => Ok(RationalPlace::Infinite),
            t => {
                let p: u64 = t.parse().map_err(|_| Error::Parse(format!("not a place of Q: {s:?}")))?;
                if !arith::is_prime(p) {
                    return Err(Error::NotPrime(p));
                }
                Ok(RationalPlace::Prime(p))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlaceKind {
    /// Real embedding; index 0 sends sqrt(d) to the positive root.
    Real(u8),
    Complex,
    Finite(PrimeIdeal),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Place {
    field: QuadraticField,
    kind: PlaceKind,
}

/// Absolute value data at a place. `ord` is present at finite places;
/// `ln_value` is `log ||x||_v`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AbsValue {
    pub ord: Option<i64>,
    pub value: f64,
    pub ln_value: f64,
}

impl Place {
    pub fn finite(prime: PrimeIdeal) -> Place {
        Place { field: prime.field(), kind: PlaceKind::Finite(prime) }
    }

    pub fn field(&self) -> QuadraticField {
        self.field
    }

    pub fn kind(&self) -> &PlaceKind {
        &self.kind
    }

    pub fn is_archimedean(&self) -> bool {
        !matches!(self.kind, PlaceKind::Finite(_))
    }

    pub fn prime_ideal(&self) -> Option<&PrimeIdeal> {
        match &self.kind {
            PlaceKind::Finite(p) => Some(p),
            _ => None,
        }
    }

    /// The rational place below.
    pub fn below(&self) -> RationalPlace {
        match &self.kind {
            PlaceKind::Finite(p) => RationalPlace::Prime(p.p()),
            _ => RationalPlace::Infinite,
        }
    }

    /// [K_v : Q_v]
    pub fn local_degree(&self) -> u32 {
        match &self.kind {
            PlaceKind::Real(_) => 1,
            PlaceKind::Complex => 2,
            PlaceKind::Finite(p) => p.e() * p.f(),
        }
    }

    /// lambda(Y(K, v)) = [K_v:Q_v] / [K:Q]
    pub fn measure(&self) -> Rational {
        arith::rat(self.local_degree() as i64, self.field.degree())
    }

    pub fn measure_f64(&self) -> f64 {
        self.local_degree() as f64 / self.field.degree() as f64
    }

    /// Image under the nontrivial automorphism of the field.
    pub fn conj(&self) -> Place {
        let kind = match &self.kind {
            PlaceKind::Real(i) if self.field.is_real_quadratic() => PlaceKind::Real(1 - i),
            PlaceKind::Finite(p) => PlaceKind::Finite(p.conj()),
            k => k.clone(),
        };
        Place { field: self.field, kind }
    }

    /// Short label: `inf`, `inf0`/`inf1` for the two real places of a real
    /// quadratic field, `p` for a lone place above p, `pa`/`pb` for split
    /// primes in residue order.
    pub fn label(&self) -> String {
        match &self.kind {
            PlaceKind::Real(i) if self.field.is_real_quadratic() => format!("inf{i}"),
            PlaceKind::Real(_) | PlaceKind::Complex => "inf".into(),
            PlaceKind::Finite(p) => {
                if p.splitting() == Splitting::Split && !self.field.is_rational() {
                    let first = factor_prime(self.field, p.p()).unwrap()[0] == *p;
                    format!("{}{}", p.p(), if first { 'a' } else { 'b' })
                } else {
                    p.p().to_string()
                }
            }
        }
    }

    /// `log ||x||_v` divided by `log p` at finite places, exactly.
    pub fn ln_coefficient(&self, x: &FieldElement) -> Result<Option<Rational>> {
        match &self.kind {
            PlaceKind::Finite(p) => {
                let ord = p.valuation(x)?;
                Ok(Some(arith::rat(-ord, p.e() as i64)))
            }
            _ => Ok(None),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.label(), self.field)
    }
}

/// The complete fiber of places of `field` above `q`.
pub fn places_above(field: QuadraticField, q: RationalPlace) -> Result<Vec<Place>> {
    match q {
        RationalPlace::Infinite => Ok(if field.is_real_quadratic() {
            vec![
                Place { field, kind: PlaceKind::Real(0) },
                Place { field, kind: PlaceKind::Real(1) },
            ]
        } else if field.is_imaginary() {
            vec![Place { field, kind: PlaceKind::Complex }]
        } else {
            vec![Place { field, kind: PlaceKind::Real(0) }]
        }),
        RationalPlace::Prime(p) => Ok(factor_prime(field, p)?.into_iter().map(Place::finite).collect()),
    }
}

pub fn archimedean_places(field: QuadraticField) -> Vec<Place> {
    places_above(field, RationalPlace::Infinite).unwrap()
}

pub fn measure_of(v: &Place) -> Rational {
    v.measure()
}

/// `||x||_v` together with `ord_v(x)` at finite places.
pub fn abs_value(x: &FieldElement, v: &Place) -> Result<AbsValue> {
    if x.field() != v.field {
        return Err(Error::FieldMismatch(x.field().d(), v.field.d()));
    }
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let (ord, ln_value) = match &v.kind {
        PlaceKind::Real(i) => (None, x.ln_abs_real(*i as usize)),
        PlaceKind::Complex => (None, x.ln_abs_complex()),
        PlaceKind::Finite(p) => {
            let ord = p.valuation(x)?;
            (Some(ord), -(ord as f64) / p.e() as f64 * (p.p() as f64).ln())
        }
    };
    Ok(AbsValue { ord, value: ln_value.exp(), ln_value })
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub(crate) struct PlaceWire {
    field: i64,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    index: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    root: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    e: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    f: Option<u32>,
}

impl From<&Place> for PlaceWire {
    fn from(v: &Place) -> Self {
        let mut w = PlaceWire {
            field: v.field.d(),
            kind: String::new(),
            index: None,
            p: None,
            root: None,
            e: None,
            f: None,
        };
        match &v.kind {
            PlaceKind::Real(i) => {
                w.kind = "real".into();
                if v.field.is_real_quadratic() {
                    w.index = Some(*i);
                }
            }
            PlaceKind::Complex => w.kind = "complex".into(),
            PlaceKind::Finite(p) => {
                w.kind = "finite".into();
                w.p = Some(p.p());
                w.root = p.root_data();
                w.e = Some(p.e());
                w.f = Some(p.f());
            }
        }
        w
    }
}

impl TryFrom<PlaceWire> for Place {
    type Error = Error;
    fn try_from(w: PlaceWire) -> Result<Place> {
        let field = QuadraticField::new(w.field)?;
        let bad = || Error::Parse(format!("no such place: {w:?}"));
        let fiber = match w.kind.as_str() {
            "real" | "complex" => places_above(field, RationalPlace::Infinite)?,
            "finite" => places_above(field, RationalPlace::Prime(w.p.ok_or_else(bad)?))?,
            _ => return Err(bad()),
        };
        fiber
            .into_iter()
            .find(|v| match &v.kind {
                PlaceKind::Real(i) => w.kind == "real" && w.index.unwrap_or(0) == *i,
                PlaceKind::Complex => w.kind == "complex",
                PlaceKind::Finite(p) => w.root.is_none() || p.root_data() == w.root,
            })
            .ok_or_else(bad)
    }
}

impl Serialize for Place {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PlaceWire::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        Place::try_from(PlaceWire::deserialize(de)?).map_err(D::Error::custom)
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
    fn fibers_and_measures() {
        let gi = k(-1);
        let inf = places_above(gi, RationalPlace::Infinite).unwrap();
        assert_eq!(inf.len(), 1);
        assert_eq!(inf[0].measure(), rat(1, 1));
        let five = places_above(gi, RationalPlace::Prime(5)).unwrap();
        assert_eq!(five.len(), 2);
        assert!(five.iter().all(|v| v.measure() == rat(1, 2)));
        let q5 = places_above(k(1), RationalPlace::Prime(5)).unwrap();
        assert_eq!(q5.len(), 1);
        assert_eq!(measure_of(&q5[0]), rat(1, 1));
        let real = places_above(k(2), RationalPlace::Infinite).unwrap();
        assert_eq!(real.len(), 2);
        assert_eq!(measure_of(&real[0]), rat(1, 2));
        assert!(places_above(gi, RationalPlace::Prime(4)).is_err());
    }

    #[test]
    fn abs_value_examples() {
        let gi = k(-1);
        let v2 = &places_above(gi, RationalPlace::Prime(2)).unwrap()[0];
        let a = abs_value(&gi.int(2), v2).unwrap();
        assert_eq!(a.ord, Some(2));
        assert!((a.value - 0.5).abs() < 1e-15);

        let x = &gi.elem(2, -1) / &gi.elem(2, 1);
        let five = places_above(gi, RationalPlace::Prime(5)).unwrap();
        let at_v = abs_value(&x, &five[0]).unwrap();
        let at_w = abs_value(&x, &five[1]).unwrap();
        assert_eq!((at_v.ord, at_w.ord), (Some(1), Some(-1)));
        assert!((at_v.value - 0.2).abs() < 1e-12 && (at_w.value - 5.0).abs() < 1e-12);

        for v in five.iter().chain(archimedean_places(gi).iter()) {
            let one = abs_value(&gi.one(), v).unwrap();
            assert_eq!(one.value, 1.0);
            assert!(one.ord.unwrap_or(0) == 0);
        }
        assert_eq!(abs_value(&gi.zero(), &five[0]), Err(Error::ZeroElement));
    }

    #[test]
    fn complex_value_is_plain_modulus() {
        let gi = k(-1);
        let inf = &archimedean_places(gi)[0];
        let a = abs_value(&gi.elem(3, 4), inf).unwrap();
        assert!((a.value - 5.0).abs() < 1e-12);
    }

    #[test]
    fn labels_and_conjugation() {
        let gi = k(-1);
        let five = places_above(gi, RationalPlace::Prime(5)).unwrap();
        assert_eq!(five[0].label(), "5a");
        assert_eq!(five[1].label(), "5b");
        assert_eq!(five[0].conj(), five[1]);
        let real = archimedean_places(k(2));
        assert_eq!(real[0].conj(), real[1]);
        assert_eq!(real[1].label(), "inf1");
    }

    #[test]
    fn json_round_trip() {
        for field in [k(1), k(-1), k(2), k(-5)] {
            for q in [RationalPlace::Infinite, RationalPlace::Prime(2), RationalPlace::Prime(3), RationalPlace::Prime(5)] {
                for v in places_above(field, q).unwrap() {
                    let j = serde_json::to_string(&v).unwrap();
                    let back: Place = serde_json::from_str(&j).unwrap();
                    assert_eq!(back, v, "{j}");
                }
            }
        }
        let v = &places_above(k(-1), RationalPlace::Prime(5)).unwrap()[1];
        assert_eq!(
            serde_json::to_value(v).unwrap(),
            serde_json::json!({"field": -1, "kind": "finite", "p": 5, "root": 3, "e": 1, "f": 1})
        );
    }
}
