//! Seeded random inputs for the property suites.

use rand::Rng;

use crate::arith::{self, Rational};
use crate::dirichlet::sunit_basis;
use crate::error::Result;
use crate::field::{FieldElement, QuadraticField};
use crate::height::{FormalProduct, PlaceFunction};
use crate::linalg;
use crate::operators::project_s;
use crate::place_set::CompactOpenSet;
use crate::places::Place;

/// Nonzero element with numerators in [-60, 60] and denominators in [1, 12].
pub fn random_element<R: Rng>(rng: &mut R, field: QuadraticField) -> FieldElement {
    loop {
        let a = arith::rat(rng.gen_range(-60..=60), rng.gen_range(1..=12));
        let b = if field.is_rational() { arith::int(0) } else { arith::rat(rng.gen_range(-60..=60), rng.gen_range(1..=12)) };
        let x = FieldElement::new(field, a, b).expect("b = 0 over Q");
        if !x.is_zero() {
            return x;
        }
    }
}

/// Uniform value in [lo, hi] on a grid of step 1/1000, as an exact rational.
pub fn random_value<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> Rational {
    arith::rat(rng.gen_range(lo * 1000..=hi * 1000), 1000)
}

/// Exact step function with values in [lo, hi] on each given place.
pub fn random_step_function<R: Rng>(rng: &mut R, field: QuadraticField, places: &[Place], lo: i64, hi: i64) -> PlaceFunction {
    PlaceFunction::from_rationals(field, places.iter().map(|v| (v.clone(), random_value(rng, lo, hi))))
        .expect("places of the field")
}

/// Zero-integral target supported on S with values in [-2, 2].
pub fn random_target<R: Rng>(rng: &mut R, s: &CompactOpenSet) -> Result<PlaceFunction> {
    let places: Vec<Place> = s.members().iter().cloned().collect();
    let f = random_step_function(rng, s.base(), &places, -1, 1);
    project_s(&f, s)
}

fn torsion(field: QuadraticField) -> FieldElement {
    if field.d() == -1 {
        field.elem(0, 1)
    } else {
        field.int(-1)
    }
}

/// A product of the S-unit generators of S with integer exponents in
/// [-3, 3], times a random root of unity, multiplied out.
fn random_sunit<R: Rng>(rng: &mut R, gens: &[FieldElement], field: QuadraticField) -> (Vec<i64>, FieldElement) {
    let mut exps = Vec::with_capacity(gens.len());
    let mut x = torsion(field).pow(rng.gen_range(0..4)).unwrap();
    for g in gens {
        let e = rng.gen_range(-3..=3);
        exps.push(e);
        x = &x * &g.pow(e).unwrap();
    }
    (exps, x)
}

/// Three power products of S-units of S. With `planted`, the third is
/// g1^a * g2^b * (torsion) for random nonzero rationals a, b, so a rational
/// relation exists; otherwise the exponent vectors are independent.
pub fn dependence_family<R: Rng>(rng: &mut R, s: &CompactOpenSet, planted: bool) -> Result<Vec<FormalProduct>> {
    let field = s.base();
    let gens = sunit_basis(field, &s.finite_places())?.elements();
    loop {
        let (e1, x1) = random_sunit(rng, &gens, field);
        let (e2, x2) = random_sunit(rng, &gens, field);
        let g1 = FormalProduct::power(x1.clone(), arith::rat(rng.gen_range(1..=3), rng.gen_range(1..=2)))?;
        let g2 = FormalProduct::from_element(x2.clone())?;
        let indep: linalg::Matrix = [&e1, &e2]
            .iter()
            .map(|e| e.iter().map(|&x| arith::int(x)).collect())
            .collect();
        if linalg::rank(&indep) < 2 {
            continue;
        }
        if planted {
            let a = arith::rat(rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(1..=4));
            let b = arith::rat(rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(1..=4));
            let mut g3 = g1.pow(&a).mul(&g2.pow(&b))?;
            g3.push(torsion(field), arith::int(rng.gen_range(1..=3)))?;
            return Ok(vec![g1, g2, g3]);
        }
        let (e3, x3) = random_sunit(rng, &gens, field);
        let all: linalg::Matrix = [&e1, &e2, &e3]
            .iter()
            .map(|e| e.iter().map(|&x| arith::int(x)).collect())
            .collect();
        if linalg::rank(&all) == 3 {
            return Ok(vec![g1, g2, FormalProduct::from_element(x3)?]);
        }
    }
}
