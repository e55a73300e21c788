//! Approximation of zero-integral step functions on S by f_g with g an
//! S-unit power product, and exact detection of rational dependence.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, Rational};
use crate::dirichlet::{sunit_basis_bounded, SUnitBasis, DEFAULT_DISC_BOUND};
use crate::error::{Error, Result};
use crate::height::{function_of, function_of_product, integral, lincomb, lp_norm, FormalProduct, Norm, PlaceFunction, Scalar, TOLERANCE};
use crate::linalg;
use crate::place_set::CompactOpenSet;
use crate::places::Place;

pub const FIRST_DOUBLING_BOUND: u64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub n: u64,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AchievedError {
    #[serde(rename = "1")]
    pub l1: f64,
    #[serde(rename = "2")]
    pub l2: f64,
    #[serde(rename = "inf")]
    pub linf: f64,
}

impl AchievedError {
    pub fn get(&self, p: Norm) -> f64 {
        match p {
            Norm::L1 => self.l1,
            Norm::L2 => self.l2,
            Norm::LInf => self.linf,
        }
    }

    fn of(f: &PlaceFunction) -> Self {
        AchievedError { l1: lp_norm(f, Norm::L1), l2: lp_norm(f, Norm::L2), linf: lp_norm(f, Norm::LInf) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproximationResult {
    pub target: PlaceFunction,
    #[serde(rename = "S")]
    pub set: CompactOpenSet,
    pub basis: SUnitBasis,
    pub result: FormalProduct,
    pub real_coefficients: Vec<f64>,
    #[serde(with = "rational_list")]
    pub rational_coefficients: Vec<Rational>,
    pub denominator_bound: u64,
    pub norm: Norm,
    pub eps: f64,
    pub least_squares_residual: f64,
    pub achieved_error: AchievedError,
    pub converged: bool,
    pub trace: Vec<TracePoint>,
}

mod rational_list {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = v.iter().map(arith::fmt_rational).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        use serde::de::Error as _;
        let strings = Vec::<String>::deserialize(d)?;
        strings.iter().map(|s| arith::parse_rational(s).map_err(D::Error::custom)).collect()
    }
}

/// Best continued-fraction convergent of each r_i with denominator <= n.
pub fn rationalize(r: &[f64], n: u64) -> Result<Vec<Rational>> {
    r.iter().map(|&x| best_convergent(x, n)).collect()
}

pub fn best_convergent(x: f64, n: u64) -> Result<Rational> {
    let mut rest = Rational::from_float(x).ok_or_else(|| Error::Arithmetic(format!("{x} is not finite")))?;
    let n = BigInt::from(n.max(1));
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    loop {
        let a = rest.floor().to_integer();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if k2 > n {
            break;
        }
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let frac = &rest - Rational::from_integer(a);
        if frac.is_zero() {
            break;
        }
        rest = frac.recip();
    }
    Ok(Rational::new(h1, k1))
}

fn check_set(field_set: &CompactOpenSet, f: &PlaceFunction) -> Result<()> {
    if field_set.base() != f.field() {
        return Err(Error::FieldMismatch(f.field().d(), field_set.base().d()));
    }
    if !field_set.contains_all_archimedean() {
        return Err(Error::Hypothesis(
            "S must contain every archimedean place; otherwise the closure of F(S) is a proper subspace \
             (see `obstruct`)"
                .into(),
        ));
    }
    Ok(())
}

/// Approximates f by f_g, g in F(S), to within `eps` in the L^p norm.
pub fn approximate(f: &PlaceFunction, s: &CompactOpenSet, eps: f64, p: Norm, n_max: u64) -> Result<ApproximationResult> {
    approximate_with(f, s, eps, p, n_max, DEFAULT_DISC_BOUND, TOLERANCE)
}

pub fn approximate_with(
    f: &PlaceFunction,
    s: &CompactOpenSet,
    eps: f64,
    p: Norm,
    n_max: u64,
    disc_bound: i64,
    tolerance: f64,
) -> Result<ApproximationResult> {
    check_set(s, f)?;
    if !(eps > 0.0) {
        return Err(Error::Hypothesis("eps must be positive".into()));
    }
    if !f.supported_in(s, tolerance) {
        return Err(Error::Hypothesis("target is not supported in S".into()));
    }
    let total = integral(f, None)?;
    if total.abs() >= tolerance {
        return Err(Error::Hypothesis(format!("target has integral {total:e}; apply project_S first")));
    }
    let basis = sunit_basis_bounded(f.field(), &s.finite_places(), disc_bound)?;
    let basis_functions: Vec<PlaceFunction> = basis.elements().iter().map(function_of).collect::<Result<_>>()?;
    let places: Vec<Place> = s.members().iter().cloned().collect();
    let r = least_squares(f, &basis_functions, &places);
    let fitted = combine(f, &basis_functions, &r.iter().map(|&x| Scalar::Real(x)).collect::<Vec<_>>())?;
    let residual = lp_norm(&fitted, Norm::L2);

    let mut trace = Vec::new();
    let mut best: Option<(Vec<Rational>, u64, f64)> = None;
    let mut n = 1;
    let mut converged = false;
    while n <= n_max.max(1) {
        let q = rationalize(&r, n)?;
        let diff = combine(f, &basis_functions, &q.iter().cloned().map(Scalar::Rational).collect::<Vec<_>>())?;
        let err = lp_norm(&diff, p);
        if best.as_ref().is_none_or(|(_, _, e)| err < *e) {
            best = Some((q, n, err));
        }
        let best_err = best.as_ref().unwrap().2;
        trace.push(TracePoint { n, error: best_err });
        if best_err < eps {
            converged = true;
            break;
        }
        n = if n < FIRST_DOUBLING_BOUND { FIRST_DOUBLING_BOUND } else { n * 2 };
    }
    let (q, n_used, _) = best.expect("at least one bound is tried");
    let result = basis.product(&q)?;
    let diff = combine(f, &basis_functions, &q.iter().cloned().map(Scalar::Rational).collect::<Vec<_>>())?;
    Ok(ApproximationResult {
        target: f.clone(),
        set: s.clone(),
        achieved_error: AchievedError::of(&diff),
        basis,
        result,
        real_coefficients: r,
        rational_coefficients: q,
        denominator_bound: n_used,
        norm: p,
        eps,
        least_squares_residual: residual,
        converged,
        trace,
    })
}

/// f - sum c_i g_i
fn combine(f: &PlaceFunction, gs: &[PlaceFunction], c: &[Scalar]) -> Result<PlaceFunction> {
    let mut coeffs = vec![Scalar::Rational(Rational::one())];
    let mut fs = vec![f];
    for (g, ci) in gs.iter().zip(c) {
        coeffs.push(match ci {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Real(x) => Scalar::Real(-x),
        });
        fs.push(g);
    }
    lincomb(&coeffs, &fs)
}

/// Measure-weighted least squares: minimise sum_v mu_v (f(v) - sum r_i g_i(v))^2.
fn least_squares(f: &PlaceFunction, gs: &[PlaceFunction], places: &[Place]) -> Vec<f64> {
    if gs.is_empty() {
        return vec![];
    }
    let w: Vec<f64> = places.iter().map(|v| v.measure_f64().sqrt()).collect();
    let a = DMatrix::from_fn(places.len(), gs.len(), |i, j| w[i] * gs[j].value(&places[i]));
    let b = DVector::from_fn(places.len(), |i, _| w[i] * f.value(&places[i]));
    let svd = a.svd(true, true);
    let cutoff = svd.singular_values.max() * 1e-12;
    svd.solve(&b, cutoff).map(|x| x.iter().copied().collect()).unwrap_or_else(|_| vec![0.0; gs.len()])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DependenceReport {
    pub basis: SUnitBasis,
    /// One row of exact basis coordinates per input.
    #[serde(with = "rational_matrix")]
    pub coordinates: Vec<Vec<Rational>>,
    pub rank: usize,
    #[serde(with = "rational_option")]
    pub relation: Option<Vec<Rational>>,
}

mod rational_matrix {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(arith::fmt_rational).collect()).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Rational>>, D::Error> {
        use serde::de::Error as _;
        let strings = Vec::<Vec<String>>::deserialize(d)?;
        strings
            .iter()
            .map(|r| r.iter().map(|s| arith::parse_rational(s).map_err(D::Error::custom)).collect())
            .collect()
    }
}

mod rational_option {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> std::result::Result<S::Ok, S::Error> {
        v.as_ref().map(|r| r.iter().map(arith::fmt_rational).collect::<Vec<_>>()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Vec<Rational>>, D::Error> {
        use serde::de::Error as _;
        let strings = Option::<Vec<String>>::deserialize(d)?;
        strings
            .map(|r| r.iter().map(|s| arith::parse_rational(s).map_err(D::Error::custom)).collect())
            .transpose()
    }
}

/// Exact coordinates of each product in an S-unit basis, their rank and a
/// primitive integer relation when one exists.
pub fn analyze_dependence(fs: &[FormalProduct], s: &CompactOpenSet) -> Result<DependenceReport> {
    analyze_dependence_bounded(fs, s, DEFAULT_DISC_BOUND)
}

pub fn analyze_dependence_bounded(fs: &[FormalProduct], s: &CompactOpenSet, disc_bound: i64) -> Result<DependenceReport> {
    let field = s.base();
    if let Some(g) = fs.iter().find(|g| g.field() != field) {
        return Err(Error::FieldMismatch(field.d(), g.field().d()));
    }
    if !s.contains_all_archimedean() {
        return Err(Error::Hypothesis("S must contain every archimedean place".into()));
    }
    let basis = sunit_basis_bounded(field, &s.finite_places(), disc_bound)?;
    let coordinates: Vec<Vec<Rational>> = fs.iter().map(|g| basis.product_coordinates(g)).collect::<Result<_>>()?;
    let rank = linalg::rank(&coordinates);
    let relation = if rank == fs.len() {
        None
    } else {
        let columns = linalg::transpose(&coordinates, basis.len());
        let kernel = linalg::kernel(&columns, fs.len());
        let v = linalg::primitive_integer(&kernel[0]);
        Some(v.into_iter().map(Rational::from_integer).collect())
    };
    Ok(DependenceReport { basis, coordinates, rank, relation })
}

/// A nonzero rational vector c with sum c_i f_(g_i) = 0, or None.
pub fn find_rational_dependence(fs: &[FormalProduct], s: &CompactOpenSet) -> Result<Option<Vec<Rational>>> {
    Ok(analyze_dependence(fs, s)?.relation)
}

/// The unit vector c minimising |sum c_i f_i| in the unweighted L2 sense,
/// with the sup-norm of that combination.
pub fn best_real_combination(fs: &[PlaceFunction]) -> Result<(Vec<f64>, f64)> {
    if fs.is_empty() {
        return Err(Error::Arithmetic("no functions given".into()));
    }
    let mut places: Vec<Place> = fs.iter().flat_map(|f| f.support()).collect();
    places.sort();
    places.dedup();
    if places.is_empty() {
        let mut c = vec![0.0; fs.len()];
        c[0] = 1.0;
        return Ok((c, 0.0));
    }
    let a = DMatrix::from_fn(places.len().max(fs.len()), fs.len(), |i, j| {
        places.get(i).map_or(0.0, |v| fs[j].value(v))
    });
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let (idx, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .expect("nonempty");
    let c: Vec<f64> = v_t.row(idx).iter().copied().collect();
    let coeffs: Vec<Scalar> = c.iter().map(|&x| Scalar::Real(x)).collect();
    let refs: Vec<&PlaceFunction> = fs.iter().collect();
    let combo = lincomb(&coeffs, &refs)?;
    Ok((c, combo.sup_abs()))
}

/// Sum c_i f_(g_i) for a relation c, used to double-check a relation.
pub fn relation_function(fs: &[FormalProduct], c: &[Rational]) -> Result<PlaceFunction> {
    let funcs: Vec<PlaceFunction> = fs.iter().map(function_of_product).collect::<Result<_>>()?;
    let refs: Vec<&PlaceFunction> = funcs.iter().collect();
    let coeffs: Vec<Scalar> = c.iter().cloned().map(Scalar::Rational).collect();
    lincomb(&coeffs, &refs)
}

/// Coefficient vectors as machine integers (for display).
pub fn as_integers(c: &[Rational]) -> Option<Vec<i64>> {
    c.iter().map(|q| if q.is_integer() { q.to_integer().to_i64() } else { None }).collect()
}

/// Common denominator of a coefficient list.
pub fn common_denominator(c: &[Rational]) -> BigInt {
    c.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Largest |numerator| in a coefficient list.
pub fn max_numerator(c: &[Rational]) -> BigInt {
    c.iter().map(|q| q.numer().abs()).max().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::field::QuadraticField;
    use crate::places::{places_above, RationalPlace};

    fn k(d: i64) -> QuadraticField {
        QuadraticField::new(d).unwrap()
    }

    fn q_set(qs: &[RationalPlace]) -> CompactOpenSet {
        CompactOpenSet::from_rational_places(k(1), qs).unwrap()
    }

    fn q_place(q: RationalPlace) -> Place {
        places_above(k(1), q).unwrap().remove(0)
    }

    #[test]
    fn rationalize_examples() {
        assert_eq!(rationalize(&[0.5], 10).unwrap(), vec![rat(1, 2)]);
        assert_eq!(rationalize(&[1.0 / 2f64.ln()], 100).unwrap(), vec![rat(88, 61)]);
        assert_eq!(rationalize(&[std::f64::consts::PI], 120).unwrap(), vec![rat(355, 113)]);
        assert_eq!(rationalize(&[-1.5, 2.0, 0.0], 1).unwrap(), vec![int(-2), int(2), int(0)]);
        assert!(rationalize(&[f64::NAN], 3).is_err());
    }

    #[test]
    fn convergent_error_bound() {
        for &x in &[std::f64::consts::E, 2f64.sqrt(), -0.3183, 1.0 / 3f64.ln()] {
            for n in [5u64, 50, 500, 5000] {
                let q = best_convergent(x, n).unwrap();
                let den = arith::rational_to_f64(&Rational::from_integer(q.denom().clone()));
                assert!(den <= n as f64);
                assert!((x - arith::rational_to_f64(&q)).abs() <= 1.0 / (n as f64 * den) + 1e-15);
            }
        }
    }

    #[test]
    fn approximate_example() {
        let s = q_set(&[RationalPlace::Infinite, RationalPlace::Prime(2), RationalPlace::Prime(3)]);
        let f = PlaceFunction::from_rationals(
            k(1),
            [(q_place(RationalPlace::Prime(2)), int(1)), (q_place(RationalPlace::Prime(3)), int(-1))],
        )
        .unwrap();
        let res = approximate(&f, &s, 0.01, Norm::L1, 1_000_000).unwrap();
        assert!(res.converged);
        assert!((res.real_coefficients[0] + 1.0 / 2f64.ln()).abs() < 1e-9);
        assert!((res.real_coefficients[1] - 1.0 / 3f64.ln()).abs() < 1e-9);
        assert!(res.achieved_error.l1 < 0.01);
        assert!(res.least_squares_residual < 1e-9);
        assert!(res.trace.windows(2).all(|w| w[1].error <= w[0].error));
        let fg = function_of_product(&res.result).unwrap();
        assert!(fg.supported_in(&s, 0.0));
    }

    #[test]
    fn approximate_trivial_targets() {
        let s = q_set(&[RationalPlace::Infinite, RationalPlace::Prime(2)]);
        let f2 = function_of(&k(1).int(2)).unwrap();
        let res = approximate(&f2, &s, 1e-6, Norm::L2, 1000).unwrap();
        assert_eq!(res.denominator_bound, 1);
        assert_eq!(res.rational_coefficients, vec![int(1)]);
        assert_eq!(res.achieved_error.linf, 0.0);

        let zero = PlaceFunction::zero(k(1));
        let res = approximate(&zero, &s, 1e-6, Norm::L1, 1000).unwrap();
        assert!(res.result.is_empty());
        assert_eq!(res.achieved_error.l1, 0.0);
    }

    #[test]
    fn approximate_rejects_bad_input() {
        let no_inf = q_set(&[RationalPlace::Prime(2), RationalPlace::Prime(3)]);
        let f = PlaceFunction::zero(k(1));
        assert!(matches!(approximate(&f, &no_inf, 0.1, Norm::L1, 100), Err(Error::Hypothesis(_))));
        let s = q_set(&[RationalPlace::Infinite, RationalPlace::Prime(2)]);
        let g = PlaceFunction::from_rationals(k(1), [(q_place(RationalPlace::Prime(2)), int(1))]).unwrap();
        assert!(matches!(approximate(&g, &s, 0.1, Norm::L1, 100), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn dependence_examples() {
        let q = k(1);
        let s = q_set(&[RationalPlace::Infinite, RationalPlace::Prime(2), RationalPlace::Prime(3)]);
        let e = |n| FormalProduct::from_element(q.int(n)).unwrap();
        assert_eq!(find_rational_dependence(&[e(2), e(3), e(6)], &s).unwrap(), Some(vec![int(1), int(1), int(-1)]));
        assert_eq!(find_rational_dependence(&[e(2), e(4)], &s).unwrap(), Some(vec![int(2), int(-1)]));
        assert_eq!(find_rational_dependence(&[e(2), e(3)], &s).unwrap(), None);
        assert!(matches!(find_rational_dependence(&[e(5)], &s), Err(Error::Unresolvable(_))));
        let (_, sup) = best_real_combination(&[function_of(&q.int(2)).unwrap(), function_of(&q.int(4)).unwrap()]).unwrap();
        assert!(sup < 1e-12);
    }

    #[test]
    fn dependence_over_real_quadratic() {
        let k2 = k(2);
        let s = CompactOpenSet::from_rational_places(k2, &[RationalPlace::Infinite, RationalPlace::Prime(7)]).unwrap();
        let eps = FormalProduct::from_element(k2.elem(1, 1)).unwrap();
        let a = FormalProduct::from_element(k2.elem(3, 1)).unwrap();
        let b = FormalProduct::from_element(&k2.elem(3, 1) * &k2.elem(3, 2).pow(3).unwrap()).unwrap();
        // 3 + 2 sqrt 2 = (1 + sqrt 2)^2
        let c = find_rational_dependence(&[eps.clone(), a.clone(), b], &s).unwrap().unwrap();
        let f = relation_function(&[eps, a, FormalProduct::from_element(&k2.elem(3, 1) * &k2.elem(3, 2).pow(3).unwrap()).unwrap()], &c).unwrap();
        assert!(f.sup_abs() < 1e-9);
        assert_eq!(c, vec![int(6), int(1), int(-1)]);
    }
}
