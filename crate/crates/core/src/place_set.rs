//! Compact open sets of places, written at finite level as unions of basic
//! sets Y(K, v) over one base field. Only the tower Q ⊂ K is supported.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::field::QuadraticField;
use crate::places::{places_above, Place, RationalPlace};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CompactOpenSet {
    base: QuadraticField,
    members: BTreeSet<Place>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersect,
    Subtract,
}

fn tower_error(from: QuadraticField, to: QuadraticField) -> Error {
    Error::UnsupportedTower(format!(
        "{from} and {to} only meet in the compositum Q(sqrt({}), sqrt({})), which has degree 4",
        from.d(),
        to.d()
    ))
}

impl CompactOpenSet {
    pub fn new(base: QuadraticField, members: impl IntoIterator<Item = Place>) -> Result<Self> {
        let members: BTreeSet<Place> = members.into_iter().collect();
        if let Some(v) = members.iter().find(|v| v.field() != base) {
            return Err(Error::FieldMismatch(base.d(), v.field().d()));
        }
        Ok(CompactOpenSet { base, members })
    }

    pub fn empty(base: QuadraticField) -> Self {
        CompactOpenSet { base, members: BTreeSet::new() }
    }

    /// Union of the full fibers Y(Q, q), written over `base`.
    pub fn from_rational_places(base: QuadraticField, qs: &[RationalPlace]) -> Result<Self> {
        let mut members = BTreeSet::new();
        for &q in qs {
            members.extend(places_above(base, q)?);
        }
        Ok(CompactOpenSet { base, members })
    }

    pub fn base(&self) -> QuadraticField {
        self.base
    }

    pub fn members(&self) -> &BTreeSet<Place> {
        &self.members
    }

    pub fn contains(&self, v: &Place) -> bool {
        self.members.contains(v)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// lambda(S)
    pub fn measure(&self) -> Rational {
        self.members.iter().fold(Rational::zero(), |acc, v| acc + v.measure())
    }

    pub fn finite_places(&self) -> Vec<Place> {
        self.members.iter().filter(|v| !v.is_archimedean()).cloned().collect()
    }

    pub fn contains_all_archimedean(&self) -> bool {
        places_above(self.base, RationalPlace::Infinite)
            .unwrap()
            .iter()
            .all(|v| self.contains(v))
    }

    pub fn meets_archimedean(&self) -> bool {
        self.members.iter().any(Place::is_archimedean)
    }

    /// The same set of places written over `target`.
    pub fn refine(&self, target: QuadraticField) -> Result<Self> {
        if target == self.base {
            return Ok(self.clone());
        }
        if !self.base.is_rational() {
            return Err(tower_error(self.base, target));
        }
        let qs: Vec<RationalPlace> = self.members.iter().map(Place::below).collect();
        CompactOpenSet::from_rational_places(target, &qs)
    }

    /// The rational places whose fibers meet S.
    pub fn rational_shadow(&self) -> BTreeSet<RationalPlace> {
        self.members.iter().map(Place::below).collect()
    }

    /// Smallest set defined over Q that contains S.
    pub fn restrict_to_rational(&self) -> CompactOpenSet {
        let qs: Vec<_> = self.rational_shadow().into_iter().collect();
        CompactOpenSet::from_rational_places(QuadraticField::rationals(), &qs).unwrap()
    }

    pub fn set_algebra(&self, op: SetOp, other: &CompactOpenSet) -> Result<CompactOpenSet> {
        if self.base != other.base {
            return Err(Error::FieldMismatch(self.base.d(), other.base.d()));
        }
        let members = match op {
            SetOp::Union => self.members.union(&other.members).cloned().collect(),
            SetOp::Intersect => self.members.intersection(&other.members).cloned().collect(),
            SetOp::Subtract => self.members.difference(&other.members).cloned().collect(),
        };
        Ok(CompactOpenSet { base: self.base, members })
    }

    pub fn union(&self, other: &CompactOpenSet) -> Result<CompactOpenSet> {
        self.set_algebra(SetOp::Union, other)
    }

    /// Every place of `k0` whose Y-set meets S lies entirely inside S.
    pub fn is_defined_over(&self, k0: QuadraticField) -> Result<bool> {
        if k0 == self.base {
            return Ok(true);
        }
        if !k0.is_rational() {
            return Err(tower_error(self.base, k0));
        }
        for q in self.rational_shadow() {
            for w in places_above(self.base, q)? {
                if !self.contains(&w) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Invariance under the nontrivial automorphism of the base.
    pub fn is_galois_stable(&self) -> bool {
        self.members.iter().all(|v| self.contains(&v.conj()))
    }

    /// Q when S is a union of rational fibers, else the base field.
    pub fn minimal_definition_field(&self) -> QuadraticField {
        if self.is_defined_over(QuadraticField::rationals()).unwrap() {
            QuadraticField::rationals()
        } else {
            self.base
        }
    }

    /// Shorthand of the form `Q(i):inf,5a,2`.
    pub fn shorthand(&self) -> String {
        let labels: Vec<String> = self.members.iter().map(Place::label).collect();
        format!("{}:{}", self.base, labels.join(","))
    }
}

impl fmt::Display for CompactOpenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.shorthand())
    }
}

#[derive(Serialize, Deserialize)]
struct SetWire {
    base: i64,
    members: Vec<Place>,
}

impl Serialize for CompactOpenSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SetWire { base: self.base.d(), members: self.members.iter().cloned().collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CompactOpenSet {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = SetWire::deserialize(de)?;
        let base = QuadraticField::new(w.base).map_err(D::Error::custom)?;
        CompactOpenSet::new(base, w.members).map_err(D::Error::custom)
    }
}
