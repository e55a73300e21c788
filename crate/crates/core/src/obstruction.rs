//! The obstructed case: S avoids the archimedean places.
//!
//! Over a field with a real place the S-unit group of S alone has no
//! nontrivial elements modulo torsion, while split units from imaginary
//! quadratic fields give nonzero functions supported on S. Their averages
//! over each rational fiber vanish, which bounds their distance to any
//! level-Q function from below.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{self, Rational};
use crate::dirichlet::{class_number, sunit_basis, SUnitBasis};
use crate::error::{Error, Result};
use crate::field::{FieldElement, QuadraticField};
use crate::height::{function_of, function_of_product, integral, lp_norm, FormalProduct, Norm, PlaceFunction, TOLERANCE};
use crate::ideal::{factor_prime, ideal_power_generator, Splitting};
use crate::operators::project_k;
use crate::place_set::CompactOpenSet;
use crate::places::{places_above, RationalPlace};

/// The imaginary quadratic fields the sample family draws from.
pub const SAMPLE_FIELDS: [i64; 3] = [-1, -2, -5];

/// pi / conj(pi) where P^h = (pi) for the first prime P above p.
pub fn split_unit(field: QuadraticField, p: u64) -> Result<FieldElement> {
    if field.is_rational() {
        return Err(Error::Hypothesis("Q has no split primes".into()));
    }
    if field.is_real_quadratic() {
        return Err(Error::Hypothesis(format!(
            "{field} is real: pi/conj(pi) has absolute values eps and 1/eps at the two real places, \
             so it is not supported on the fiber over {p}"
        )));
    }
    let primes = factor_prime(field, p)?;
    if primes[0].splitting() != Splitting::Split {
        return Err(Error::Hypothesis(format!("{p} does not split in {field}")));
    }
    let h = class_number(field)?;
    let pi = ideal_power_generator(&primes[0], h)?;
    Ok(&pi / &pi.conj())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceCertificate {
    pub f: PlaceFunction,
    pub g: FormalProduct,
    pub p: Norm,
    pub distance: f64,
    pub f_norm: f64,
    /// sup |P_Q f_g|
    pub pk_sup: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstructionReport {
    #[serde(rename = "S")]
    pub set: CompactOpenSet,
    pub base: QuadraticField,
    pub vks_trivial: bool,
    pub certificate: String,
    pub basis: SUnitBasis,
    pub searched_bound: i64,
    pub candidate_relations_checked: u64,
    pub relations_found: Vec<Vec<i64>>,
    pub min_archimedean_residual: Option<f64>,
    pub sample_family: String,
    pub distance_certificates: Vec<DistanceCertificate>,
}

fn check_avoids_infinity(s: &CompactOpenSet) -> Result<()> {
    if s.meets_archimedean() {
        return Err(Error::Hypothesis("S must avoid the archimedean places".into()));
    }
    Ok(())
}

/// Exhaustive search for exact multiplicative relations among the S-unit
/// basis of `field` with exponents in [-bound, bound].
pub fn check_trivial_vks(field: QuadraticField, s: &CompactOpenSet, bound: i64) -> Result<ObstructionReport> {
    if field.is_imaginary() {
        return Err(Error::Hypothesis(format!("{field} has no real place")));
    }
    check_avoids_infinity(s)?;
    let s_k = if s.base() == field {
        s.clone()
    } else if s.base().is_rational() {
        s.refine(field)?
    } else {
        return Err(Error::Hypothesis(format!("S is not defined over {field}")));
    };
    if bound < 0 {
        return Err(Error::Hypothesis("bound must be nonnegative".into()));
    }
    let basis = sunit_basis(field, &s_k.finite_places())?;
    let elems = basis.elements();
    let n = elems.len();
    // powers[i][k + bound] = elems[i]^k
    let powers: Vec<Vec<FieldElement>> = elems
        .iter()
        .map(|x| (-bound..=bound).map(|k| x.pow(k)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let arch: Vec<Vec<f64>> = {
        let places = places_above(field, RationalPlace::Infinite)?;
        elems
            .iter()
            .map(|x| {
                let f = function_of(x)?;
                Ok(places.iter().map(|v| v.measure_f64() * f.value(v)).collect())
            })
            .collect::<Result<_>>()?
    };
    let mut coeffs = vec![-bound; n];
    let mut checked = 0u64;
    let mut found = Vec::new();
    let mut min_residual: Option<f64> = None;
    if n > 0 {
        loop {
            if coeffs.iter().any(|&c| c != 0) {
                checked += 1;
                let mut acc = field.one();
                for (i, &c) in coeffs.iter().enumerate() {
                    if c != 0 {
                        acc = &acc * &powers[i][(c + bound) as usize];
                    }
                }
                if acc.is_root_of_unity() {
                    found.push(coeffs.clone());
                }
                let residual: f64 = (0..arch[0].len())
                    .map(|j| coeffs.iter().zip(&arch).map(|(&c, row)| c as f64 * row[j]).sum::<f64>().abs())
                    .sum();
                if min_residual.is_none_or(|m| residual < m) {
                    min_residual = Some(residual);
                }
            }
            let mut i = 0;
            while i < n && coeffs[i] == bound {
                coeffs[i] = -bound;
                i += 1;
            }
            if i == n {
                break;
            }
            coeffs[i] += 1;
        }
    }
    let trivial = found.is_empty();
    let certificate = if trivial {
        format!(
            "no product of {} basis elements with exponents in [-{bound}, {bound}] is a root of unity \
             ({checked} candidates, each checked exactly)",
            n
        )
    } else {
        format!("{} exact relations found", found.len())
    };
    Ok(ObstructionReport {
        set: s.clone(),
        base: field,
        vks_trivial: trivial,
        certificate,
        basis,
        searched_bound: bound,
        candidate_relations_checked: checked,
        relations_found: found,
        min_archimedean_residual: min_residual,
        sample_family: String::new(),
        distance_certificates: Vec::new(),
    })
}

/// Checks P_Q f_g = 0 and ||f - f_g||_p >= ||f||_p - tol.
pub fn distance_certificate(f: &PlaceFunction, g: &FormalProduct, s: &CompactOpenSet, p: Norm) -> Result<DistanceCertificate> {
    let q = QuadraticField::rationals();
    if f.field() != q {
        return Err(Error::Hypothesis("f must be a level-Q function".into()));
    }
    if !s.is_defined_over(q)? {
        return Err(Error::Hypothesis("S must be defined over Q".into()));
    }
    check_avoids_infinity(s)?;
    let s_q = s.restrict_to_rational();
    if !f.supported_in(&s_q, TOLERANCE) {
        return Err(Error::Hypothesis("f is not supported in S".into()));
    }
    let total = integral(f, None)?;
    if total.abs() >= TOLERANCE {
        return Err(Error::Hypothesis(format!("f has integral {total:e}")));
    }
    let fg = function_of_product(g)?;
    if !fg.supported_in(&s_q.refine(g.field())?, 0.0) {
        return Err(Error::Hypothesis(format!("f_g is not supported in S for g = {g}")));
    }
    let pk_sup = project_k(&fg, q)?.sup_abs();
    let lifted = f.lift(g.field())?;
    let distance = lp_norm(&lifted.sub(&fg)?, p);
    let f_norm = lp_norm(f, p);
    let holds = pk_sup < TOLERANCE && distance >= f_norm - TOLERANCE;
    if pk_sup >= TOLERANCE {
        return Err(Error::Violation(format!("P_Q f_g has sup {pk_sup:e} for g = {g}")));
    }
    Ok(DistanceCertificate { f: f.clone(), g: g.clone(), p, distance, f_norm, pk_sup, holds })
}

/// +1 on the first rational fiber of S and -1 on the second.
pub fn normalized_fiber_function(s: &CompactOpenSet) -> Result<PlaceFunction> {
    let q = QuadraticField::rationals();
    let fibers: Vec<RationalPlace> = s.rational_shadow().into_iter().collect();
    if fibers.len() < 2 {
        return Err(Error::Hypothesis("S needs at least two rational fibers".into()));
    }
    let at = |r| places_above(q, r).map(|mut v| v.remove(0));
    PlaceFunction::from_rationals(q, [(at(fibers[0])?, arith::int(1)), (at(fibers[1])?, arith::int(-1))])
}

/// Split units available for S: one per (field, prime of S splitting in it).
pub fn split_units_for(s: &CompactOpenSet) -> Result<Vec<FieldElement>> {
    let mut out = Vec::new();
    for d in SAMPLE_FIELDS {
        let field = QuadraticField::new(d)?;
        for r in s.rational_shadow() {
            if let RationalPlace::Prime(p) = r {
                if factor_prime(field, p)?.len() == 2 {
                    out.push(split_unit(field, p)?);
                }
            }
        }
    }
    Ok(out)
}

/// The declared sample family: products of up to three powers of distinct split
/// units (and their conjugates) from one field, exponents a/b with
/// 1 <= |a| <= 10, 1 <= b <= 4. Every single power is included, followed
/// by `extra` seeded random products.
pub fn sample_family(s: &CompactOpenSet, extra: usize, seed: u64) -> Result<Vec<FormalProduct>> {
    let units = split_units_for(s)?;
    let mut out = Vec::new();
    let exps: Vec<Rational> = {
        let mut v: Vec<Rational> = (1..=4)
            .flat_map(|b| (-10..=10).filter(|&a| a != 0).map(move |a| arith::rat(a, b)))
            .collect();
        v.sort();
        v.dedup();
        v
    };
    for u in &units {
        for q in &exps {
            out.push(FormalProduct::power(u.clone(), q.clone())?);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut by_field: Vec<Vec<FieldElement>> = Vec::new();
    for u in &units {
        match by_field.iter_mut().find(|v| v[0].field() == u.field()) {
            Some(v) => v.push(u.clone()),
            None => by_field.push(vec![u.clone()]),
        }
    }
    for group in by_field.iter_mut() {
        let conjs: Vec<FieldElement> = group.iter().map(FieldElement::conj).collect();
        group.extend(conjs);
    }
    if by_field.is_empty() {
        return Ok(out);
    }
    for _ in 0..extra {
        let group = &by_field[rng.gen_range(0..by_field.len())];
        let mut g = FormalProduct::one(group[0].field());
        // distinct bases, so exponents never merge out of range
        let n = rng.gen_range(1..=3).min(group.len());
        for u in group.choose_multiple(&mut rng, n) {
            let q = exps[rng.gen_range(0..exps.len())].clone();
            g.push(u.clone(), q)?;
        }
        out.push(g);
    }
    Ok(out)
}

/// The full report for S over Q (or a real quadratic field): exhaustive
/// relation search, then distance certificates over the sample family.
pub fn obstruct(s: &CompactOpenSet, bound: i64, extra_samples: usize, seed: u64) -> Result<ObstructionReport> {
    let mut report = check_trivial_vks(s.base(), s, bound)?;
    if s.is_defined_over(QuadraticField::rationals())? && s.rational_shadow().len() >= 2 {
        let f = normalized_fiber_function(s)?;
        let family = sample_family(s, extra_samples, seed)?;
        report.sample_family = format!(
            "{} products: every power u^(a/b) of a split unit u from Q(i), Q(sqrt(-2)), Q(sqrt(-5)) at a prime of S \
             (1 <= |a| <= 10, 1 <= b <= 4), plus {extra_samples} products of up to 3 such powers (seed {seed})",
            family.len()
        );
        for g in &family {
            for p in Norm::ALL {
                report.distance_certificates.push(distance_certificate(&f, g, s, p)?);
            }
        }
    }
    Ok(report)
}

impl ObstructionReport {
    /// True when no relation was found and every certificate holds.
    pub fn all_hold(&self) -> bool {
        self.vks_trivial && self.distance_certificates.iter().all(|c| c.holds)
    }
}

/// Height of a split unit, for checking against the lp norm.
pub fn split_unit_height(field: QuadraticField, p: u64) -> Result<f64> {
    let u = split_unit(field, p)?;
    let h = class_number(field)? as f64;
    let expected = h * (p as f64).ln() / 2.0;
    let f = function_of(&u)?;
    let got = lp_norm(&f, Norm::L1) / 2.0;
    if (got - expected).abs() > TOLERANCE {
        return Err(Error::Violation(format!("height {got} of the split unit differs from {expected}")));
    }
    Ok(got)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(d: i64) -> QuadraticField {
        QuadraticField::new(d).unwrap()
    }

    fn q_set(ps: &[u64]) -> CompactOpenSet {
        let qs: Vec<_> = ps.iter().map(|&p| RationalPlace::Prime(p)).collect();
        CompactOpenSet::from_rational_places(k(1), &qs).unwrap()
    }

    #[test]
    fn split_unit_examples() {
        let gi = k(-1);
        assert_eq!(split_unit(gi, 5).unwrap(), &gi.elem(2, -1) / &gi.elem(2, 1));
        let k2 = k(-2);
        let u = split_unit(k2, 3).unwrap();
        assert_eq!(u, &k2.elem(1, -1) / &k2.elem(1, 1));
        let f = function_of(&u).unwrap();
        let fiber = places_above(k2, RationalPlace::Prime(3)).unwrap();
        assert_eq!(f.support(), fiber);
        assert!((f.value(&fiber[0]) + 3f64.ln()).abs() < 1e-12);
        assert!((f.value(&fiber[1]) - 3f64.ln()).abs() < 1e-12);

        let k5 = k(-5);
        let f = function_of(&split_unit(k5, 3).unwrap()).unwrap();
        let fiber = places_above(k5, RationalPlace::Prime(3)).unwrap();
        assert_eq!(f.support(), fiber);
        assert!((f.value(&fiber[0]).abs() - 2.0 * 3f64.ln()).abs() < 1e-12);
        assert!((split_unit_height(k5, 3).unwrap() - 3f64.ln()).abs() < 1e-12);

        assert!(split_unit(gi, 3).is_err());
        assert!(split_unit(gi, 2).is_err());
        assert!(split_unit(k(2), 7).is_err());
        assert!(split_unit(k(1), 5).is_err());
    }

    #[test]
    fn trivial_vks_examples() {
        let r = check_trivial_vks(k(1), &q_set(&[2, 3]), 10).unwrap();
        assert!(r.vks_trivial);
        assert_eq!(r.candidate_relations_checked, 440);
        assert!(r.min_archimedean_residual.unwrap() > 0.0);

        let k2 = k(2);
        let r = check_trivial_vks(k2, &q_set(&[7]), 5).unwrap();
        assert!(r.vks_trivial);
        assert_eq!(r.candidate_relations_checked, 11u64.pow(3) - 1);

        assert!(matches!(check_trivial_vks(k(-1), &q_set(&[5]), 3), Err(Error::Hypothesis(_))));
        let with_inf = CompactOpenSet::from_rational_places(k(1), &[RationalPlace::Infinite, RationalPlace::Prime(2)]).unwrap();
        assert!(matches!(check_trivial_vks(k(1), &with_inf, 3), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn distance_certificate_example() {
        let s = q_set(&[2, 3]);
        let f = normalized_fiber_function(&s).unwrap();
        let g = FormalProduct::from_element(split_unit(k(-2), 3).unwrap()).unwrap();
        let c = distance_certificate(&f, &g, &s, Norm::L1).unwrap();
        assert!((c.distance - (1.0 + 3f64.ln())).abs() < 1e-9);
        assert!((c.f_norm - 2.0).abs() < 1e-12);
        assert!(c.holds);

        let c = distance_certificate(&f, &FormalProduct::one(k(-2)), &s, Norm::L2).unwrap();
        assert_eq!(c.distance, c.f_norm);

        let f3 = f.scale(3.into());
        let c3 = distance_certificate(&f3, &g.pow(&arith::int(3)), &s, Norm::L1).unwrap();
        assert!((c3.distance - 3.0 * (1.0 + 3f64.ln())).abs() < 1e-9);
    }

    #[test]
    fn obstruct_small() {
        let r = obstruct(&q_set(&[2, 3]), 4, 10, 0).unwrap();
        assert!(r.all_hold());
        assert!(!r.distance_certificates.is_empty());
    }
}
