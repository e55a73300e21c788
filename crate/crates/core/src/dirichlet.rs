//! Units, class numbers, S-unit bases and the logarithmic embedding.

use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, Rational};
use crate::error::{Error, Result};
use crate::field::{FieldElement, QuadraticField};
use crate::height::{function_of, FormalProduct};
use crate::ideal::{ideal_power_generator, scan_convergents, Ideal};
use crate::linalg;
use crate::places::{archimedean_places, Place};

pub const DEFAULT_DISC_BOUND: i64 = 400;

/// Relative singular-value cutoff for numerical rank.
pub const RANK_CUTOFF: f64 = 1e-9;

/// The fundamental unit eps > 1 of a real quadratic field.
///
/// eps = x + y*omega is the first convergent x/y of -conj(omega) with
/// N(x + y*omega) = +-1.
pub fn fundamental_unit(field: QuadraticField) -> Result<FieldElement> {
    if !field.is_real_quadratic() {
        return Err(Error::Hypothesis(format!("{field} has unit rank 0")));
    }
    let d = BigInt::from(field.d());
    let (p, q) = if field.half_integer_basis() { (-1, 2) } else { (0, 1) };
    let (t, n) = field.omega_poly();
    let (t, n) = (BigInt::from(t), BigInt::from(n));
    // N(x + y*omega) = x^2 + t*x*y + n*y^2
    let (x, y) = scan_convergents(BigInt::from(p), BigInt::from(q), d, |x, y| {
        (x * x + &t * x * y + &n * y * y).abs().is_one()
    })
    .ok_or_else(|| Error::Arithmetic(format!("no unit found for {field}")))?;
    Ok(FieldElement::from_omega_coords(field, Rational::from_integer(x), Rational::from_integer(y)))
}

/// Class number, with the default discriminant bound.
pub fn class_number(field: QuadraticField) -> Result<u32> {
    class_number_bounded(field, DEFAULT_DISC_BOUND)
}

pub fn class_number_bounded(field: QuadraticField, bound: i64) -> Result<u32> {
    if field.is_rational() {
        return Ok(1);
    }
    let disc = field.disc();
    if disc.abs() > bound {
        return Err(Error::DiscriminantBound { disc, bound });
    }
    if disc < 0 {
        Ok(reduced_forms(disc).len() as u32)
    } else {
        Ok(ideal_classes(field).len() as u32)
    }
}

/// Reduced primitive positive definite forms (a, b, c) of discriminant
/// `disc < 0`: |b| <= a <= c, with b >= 0 when |b| = a or a = c.
pub fn reduced_forms(disc: i64) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    let a_max = ((-disc) as f64 / 3.0).sqrt() as i64 + 1;
    for a in 1..=a_max {
        for b in -a + 1..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (a == c && b < 0) {
                continue;
            }
            if num_integer::gcd(num_integer::gcd(a, b), c) != 1 {
                continue;
            }
            out.push((a, b, c));
        }
    }
    out
}

/// All nonzero integral ideals of norm at most `bound`.
pub fn ideals_up_to(field: QuadraticField, bound: i64) -> Vec<Ideal> {
    let mut out = Vec::new();
    for c in 1..=bound {
        for a in (c..=bound / c).step_by(c as usize) {
            for b in (0..a).step_by(c as usize) {
                if let Some(i) = Ideal::from_hnf(field, a, b, c) {
                    out.push(i);
                }
            }
        }
    }
    out
}

/// One representative per ideal class, among ideals of norm at most the
/// Minkowski bound.
pub fn ideal_classes(field: QuadraticField) -> Vec<Ideal> {
    let disc = field.disc() as f64;
    let minkowski = if field.is_imaginary() {
        2.0 / std::f64::consts::PI * (-disc).sqrt()
    } else {
        disc.sqrt() / 2.0
    };
    let mut reps: Vec<Ideal> = Vec::new();
    for i in ideals_up_to(field, minkowski.floor() as i64) {
        // I ~ J iff I * conj(J) is principal
        if !reps.iter().any(|j| i.mul(&j.conj()).principal_generator().is_some()) {
            reps.push(i);
        }
    }
    reps
}

/// Generators of a finite-index subgroup of the T-units modulo torsion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SUnitBasis {
    pub field: QuadraticField,
    #[serde(rename = "T")]
    pub places: Vec<Place>,
    pub class_number_used: u32,
    pub unit_part: Vec<FieldElement>,
    pub finite_part: Vec<(Place, FieldElement)>,
}

pub fn sunit_basis(field: QuadraticField, places: &[Place]) -> Result<SUnitBasis> {
    sunit_basis_bounded(field, places, DEFAULT_DISC_BOUND)
}

pub fn sunit_basis_bounded(field: QuadraticField, places: &[Place], disc_bound: i64) -> Result<SUnitBasis> {
    let mut places = places.to_vec();
    places.sort();
    places.dedup();
    if let Some(v) = places.iter().find(|v| v.field() != field) {
        return Err(Error::FieldMismatch(field.d(), v.field().d()));
    }
    if places.iter().any(Place::is_archimedean) {
        return Err(Error::Hypothesis("T must consist of finite places".into()));
    }
    let h = class_number_bounded(field, disc_bound)?;
    let unit_part = if field.is_real_quadratic() { vec![fundamental_unit(field)?] } else { vec![] };
    let mut finite_part = Vec::with_capacity(places.len());
    for v in &places {
        let g = ideal_power_generator(v.prime_ideal().expect("finite"), h)?;
        finite_part.push((v.clone(), g));
    }
    Ok(SUnitBasis { field, places, class_number_used: h, unit_part, finite_part })
}

impl SUnitBasis {
    /// Basis elements in row order: the alpha_v in T order, then the units.
    pub fn elements(&self) -> Vec<FieldElement> {
        self.finite_part.iter().map(|(_, g)| g.clone()).chain(self.unit_part.iter().cloned()).collect()
    }

    pub fn labels(&self) -> Vec<String> {
        self.finite_part
            .iter()
            .map(|(v, _)| format!("alpha[{}]", v.label()))
            .chain((0..self.unit_part.len()).map(|i| format!("xi[{i}]")))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.finite_part.len() + self.unit_part.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Exact coordinates of x modulo torsion in this basis, so that
    /// x = prod b_i^(c_i) up to a root of unity.
    pub fn coordinates(&self, x: &FieldElement) -> Result<Vec<Rational>> {
        if x.field() != self.field {
            return Err(Error::FieldMismatch(self.field.d(), x.field().d()));
        }
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        let f = function_of(x)?;
        for v in f.support() {
            if !v.is_archimedean() && !self.places.contains(&v) {
                return Err(Error::Unresolvable(format!("{x} (nonzero valuation at {v}, outside T)")));
            }
        }
        let h = self.class_number_used as i64;
        let mut coords = Vec::with_capacity(self.len());
        // u = x^h / prod alpha_v^ord_v(x) is a unit
        let mut u = x.pow(h)?;
        for (v, alpha) in &self.finite_part {
            let ord = v.prime_ideal().unwrap().valuation(x)?;
            coords.push(arith::rat(ord, h));
            u = &u / &alpha.pow(ord)?;
        }
        match self.unit_part.first() {
            None => {
                if !u.is_root_of_unity() {
                    return Err(Error::Unresolvable(format!("{x} (unit part {u} is not torsion)")));
                }
            }
            Some(eps) => {
                let k = (u.ln_abs_real(0) / eps.ln_abs_real(0)).round();
                let k = k as i64;
                let rest = &u / &eps.pow(k)?;
                if !rest.is_root_of_unity() {
                    return Err(Error::Unresolvable(format!("{x} (unit part {u} is not +-eps^k)")));
                }
                coords.push(arith::rat(k, h));
            }
        }
        Ok(coords)
    }

    /// Coordinates of a formal product, by linearity.
    pub fn product_coordinates(&self, g: &FormalProduct) -> Result<Vec<Rational>> {
        let mut acc = vec![Rational::zero(); self.len()];
        for (x, q) in g.factors() {
            for (a, c) in acc.iter_mut().zip(self.coordinates(x)?) {
                *a += c * q;
            }
        }
        Ok(acc)
    }

    /// The formal product with the given coordinates.
    pub fn product(&self, coords: &[Rational]) -> Result<FormalProduct> {
        let mut g = FormalProduct::one(self.field);
        for (x, c) in self.elements().into_iter().zip(coords) {
            if !c.is_zero() {
                g.push(x, c.clone())?;
            }
        }
        Ok(g)
    }

    /// ord_v(alpha_w) for v, w in T: h times the identity.
    pub fn ord_block(&self) -> Result<Vec<Vec<i64>>> {
        self.finite_part
            .iter()
            .map(|(_, alpha)| {
                self.places.iter().map(|v| v.prime_ideal().unwrap().valuation(alpha)).collect()
            })
            .collect()
    }
}

impl fmt::Display for SUnitBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} with T = {{{}}}, h = {}", self.field, self.places.iter().map(Place::label).collect::<Vec<_>>().join(", "), self.class_number_used)?;
        for (label, x) in self.labels().iter().zip(self.elements()) {
            writeln!(f, "  {label} = {x}")?;
        }
        Ok(())
    }
}

/// Rows: basis elements; columns: archimedean places then T; entries
/// measure * log ||b||_v.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogMatrix {
    pub rows: Vec<String>,
    pub cols: Vec<Place>,
    pub entries: Vec<Vec<f64>>,
}

pub fn log_embedding(basis: &SUnitBasis) -> Result<LogMatrix> {
    let cols: Vec<Place> = archimedean_places(basis.field).into_iter().chain(basis.places.iter().cloned()).collect();
    let mut entries = Vec::with_capacity(basis.len());
    for x in basis.elements() {
        let f = function_of(&x)?;
        entries.push(cols.iter().map(|v| v.measure_f64() * f.value(v)).collect());
    }
    Ok(LogMatrix { rows: basis.labels(), cols, entries })
}

impl LogMatrix {
    fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.entries.len(), self.cols.len(), |i, j| self.entries[i][j])
    }

    pub fn singular_values(&self) -> Vec<f64> {
        if self.entries.is_empty() || self.cols.is_empty() {
            return vec![];
        }
        let mut s: Vec<f64> = self.matrix().svd(false, false).singular_values.iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    /// Numerical rank with a relative singular-value cutoff.
    pub fn rank_check(&self) -> usize {
        let s = self.singular_values();
        let Some(&top) = s.first() else { return 0 };
        if top == 0.0 {
            return 0;
        }
        s.iter().filter(|&&x| x > RANK_CUTOFF * top).count()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.entries.iter().map(|r| r.iter().sum()).collect()
    }

    /// Smallest L1 norm of a nonzero integer combination of the rows with
    /// coefficients in [-bound, bound], by exhaustive search.
    pub fn shortest_combination(&self, bound: i64) -> Option<(f64, Vec<i64>)> {
        let n = self.entries.len();
        if n == 0 {
            return None;
        }
        let m = self.cols.len();
        let mut coeffs = vec![-bound; n];
        let mut acc = vec![0.0; m];
        for (i, row) in self.entries.iter().enumerate() {
            for j in 0..m {
                acc[j] += coeffs[i] as f64 * row[j];
            }
        }
        let mut best: Option<(f64, Vec<i64>)> = None;
        loop {
            if coeffs.iter().any(|&c| c != 0) {
                let norm: f64 = acc.iter().map(|x| x.abs()).sum();
                if best.as_ref().is_none_or(|(b, _)| norm < *b) {
                    best = Some((norm, coeffs.clone()));
                }
            }
            // odometer step, updating the running combination
            let mut i = 0;
            loop {
                if i == n {
                    return best;
                }
                if coeffs[i] < bound {
                    coeffs[i] += 1;
                    for j in 0..m {
                        acc[j] += self.entries[i][j];
                    }
                    break;
                }
                for j in 0..m {
                    acc[j] -= 2.0 * bound as f64 * self.entries[i][j];
                }
                coeffs[i] = -bound;
                i += 1;
            }
        }
    }
}

/// Exact rank of an integer matrix.
pub fn exact_rank(block: &[Vec<i64>]) -> usize {
    let m: linalg::Matrix = block.iter().map(|r| r.iter().map(|&x| arith::int(x)).collect()).collect();
    linalg::rank(&m)
}

/// Regulator-free sanity: log eps as a double.
pub fn log_fundamental_unit(field: QuadraticField) -> Result<f64> {
    Ok(fundamental_unit(field)?.ln_abs_real(0))
}

/// Coordinates of eps in omega basis as machine integers, for display.
pub fn unit_coords(eps: &FieldElement) -> Option<(i64, i64)> {
    let (x, y) = eps.integral_coords()?;
    Some((x.to_i64()?, y.to_i64()?))
}
