//! P_S (zero-mean restriction to S) and P_K (fiber averaging down to Q).

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::arith;
use crate::error::{Error, Result};
use crate::field::QuadraticField;
use crate::height::{integral, integral_exact, Entry, LogValue, PlaceFunction};
use crate::place_set::CompactOpenSet;
use crate::places::{places_above, RationalPlace};

/// (P_S f)(y) = chi_S(y) (f(y) - lambda(S)^-1 int_S f).
pub fn project_s(f: &PlaceFunction, s: &CompactOpenSet) -> Result<PlaceFunction> {
    if s.base() != f.field() {
        return Err(Error::FieldMismatch(f.field().d(), s.base().d()));
    }
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let measure = s.measure();
    let inv = arith::rational_to_f64(&measure).recip();
    let mean = integral(f, Some(s))? * inv;
    let mean_exact = integral_exact(f, Some(s))?.map(|x| x.scale(&measure.recip()));
    let entries = s.members().iter().map(|v| {
        let entry = match (f.exact(v), &mean_exact) {
            (Some(x), Some(m)) => Entry::exact(x.add(&m.scale(&arith::int(-1)))),
            _ => Entry::approx(f.value(v) - mean),
        };
        (v.clone(), entry)
    });
    PlaceFunction::from_entries(f.field(), entries.collect::<Vec<_>>())
}

/// Conditional expectation onto functions of level `k0`. Only `k0 = Q` or
/// `k0` equal to the field of f are supported. The result lives over k0.
pub fn project_k(f: &PlaceFunction, k0: QuadraticField) -> Result<PlaceFunction> {
    if k0 == f.field() {
        return Ok(f.clone());
    }
    if !k0.is_rational() {
        return Err(Error::UnsupportedTower(format!(
            "P_K is only available from {} down to Q, not to {k0}",
            f.field()
        )));
    }
    let q = QuadraticField::rationals();
    let mut fibers: BTreeMap<RationalPlace, (f64, Option<LogValue>)> = BTreeMap::new();
    for (v, e) in f.entries() {
        let slot = fibers.entry(v.below()).or_insert((0.0, Some(LogValue::zero())));
        slot.0 += v.measure_f64() * e.value;
        slot.1 = match (&slot.1, &e.exact) {
            (Some(acc), Some(x)) => Some(acc.add(&x.scale(&v.measure()))),
            _ => None,
        };
    }
    let mut out = PlaceFunction::zero(q);
    for (r, (value, exact)) in fibers {
        // the fiber over r has total measure 1
        let v = places_above(q, r)?.remove(0);
        let entry = match exact {
            Some(x) => Entry::exact(x),
            None => Entry::approx(value),
        };
        out.set(v, entry)?;
    }
    Ok(out)
}

/// P_K followed by pulling back to the field of f, so that it can be
/// composed with itself.
pub fn project_k_lifted(f: &PlaceFunction) -> Result<PlaceFunction> {
    project_k(f, QuadraticField::rationals())?.lift(f.field())
}

/// Mean value of f over S.
pub fn mean_over(f: &PlaceFunction, s: &CompactOpenSet) -> Result<f64> {
    let m = s.measure();
    if m.is_zero() {
        return Err(Error::EmptySet);
    }
    Ok(integral(f, Some(s))? / arith::rational_to_f64(&m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::height::{function_of, lp_norm, Norm};

    fn k(d: i64) -> QuadraticField {
        QuadraticField::new(d).unwrap()
    }

    #[test]
    fn project_s_example() {
        let q = k(1);
        let s = CompactOpenSet::from_rational_places(q, &[RationalPlace::Infinite, RationalPlace::Prime(2)]).unwrap();
        let f6 = function_of(&q.int(6)).unwrap();
        let p = project_s(&f6, &s).unwrap();
        let inf = &places_above(q, RationalPlace::Infinite).unwrap()[0];
        let two = &places_above(q, RationalPlace::Prime(2)).unwrap()[0];
        let expected = 6f64.ln() - 0.5 * 3f64.ln();
        assert!((p.value(inf) - 1.242453).abs() < 1e-6);
        assert!((p.value(inf) - expected).abs() < 1e-12);
        assert!((p.value(two) + expected).abs() < 1e-12);
        assert_eq!(p.support().len(), 2);
        assert_eq!(integral_exact(&p, Some(&s)).unwrap(), Some(LogValue::zero()));
        assert_eq!(project_s(&p, &s).unwrap(), p);
        assert_eq!(project_s(&f6, &CompactOpenSet::empty(q)), Err(Error::EmptySet));
    }

    #[test]
    fn project_k_examples() {
        let gi = k(-1);
        let x = &gi.elem(2, -1) / &gi.elem(2, 1);
        let pk = project_k(&function_of(&x).unwrap(), k(1)).unwrap();
        assert!(pk.support().is_empty());

        let f = function_of(&gi.elem(1, 1)).unwrap();
        let pk = project_k(&f, k(1)).unwrap();
        let q = k(1);
        let inf = &places_above(q, RationalPlace::Infinite).unwrap()[0];
        let two = &places_above(q, RationalPlace::Prime(2)).unwrap()[0];
        assert_eq!(pk.exact(inf).unwrap(), LogValue::log_prime(2, arith::rat(1, 2)));
        assert_eq!(pk.exact(two).unwrap(), LogValue::log_prime(2, arith::rat(-1, 2)));
        assert_eq!(integral_exact(&pk, None).unwrap(), integral_exact(&f, None).unwrap());

        let f2 = function_of(&gi.int(2)).unwrap();
        assert_eq!(project_k(&f2, k(1)).unwrap(), function_of(&q.int(2)).unwrap());
        let lifted = project_k_lifted(&f).unwrap();
        assert_eq!(project_k_lifted(&lifted).unwrap(), lifted);
        assert!(lp_norm(&pk, Norm::L2) <= lp_norm(&f, Norm::L2) + 1e-12);
        assert!(project_k(&f, k(2)).is_err());
        assert_eq!(project_k(&pk, q).unwrap(), pk);
    }
}
