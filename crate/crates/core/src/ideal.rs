//! Integral ideals of the ring of integers of Q or Q(sqrt d).
//!
//! A nonzero ideal of a quadratic order is a rank-2 lattice; it is stored in
//! Hermite normal form as the Z-basis `{a, b + c*omega}` with `a, c > 0`,
//! `c | a`, `c | b` and `0 <= b < a`. Equality of ideals is equality of these
//! triples. Over Q only `a` is meaningful.

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{self, Rational};
use crate::dirichlet;
use crate::error::{Error, Result};
use crate::field::{FieldElement, QuadraticField};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ideal {
    field: QuadraticField,
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

fn omega_mul(field: QuadraticField, (x, y): (&BigInt, &BigInt), (u, v): (&BigInt, &BigInt)) -> (BigInt, BigInt) {
    // omega^2 = t*omega - n
    let (t, n) = field.omega_poly();
    let yv = y * v;
    (x * u - &yv * n, x * v + y * u + yv * t)
}

/// Hermite normal form `(a, b, c)` of the Z-span of the given vectors in
/// omega-coordinates; `None` if the span is not of full rank.
fn hnf(vectors: &[(BigInt, BigInt)]) -> Option<(BigInt, BigInt, BigInt)> {
    let mut a = BigInt::zero();
    let mut pivot: Option<(BigInt, BigInt)> = None;
    for (wx, wy) in vectors {
        if wy.is_zero() {
            a = a.gcd(wx);
            continue;
        }
        match pivot.take() {
            None => pivot = Some((wx.clone(), wy.clone())),
            Some((px, py)) => {
                let eg = py.extended_gcd(wy);
                let g = eg.gcd;
                let nx = &eg.x * &px + &eg.y * wx;
                // the y-free combination
                let zx = (wy / &g) * &px - (&py / &g) * wx;
                a = a.gcd(&zx);
                pivot = Some((nx, g));
            }
        }
    }
    let (mut bx, mut c) = pivot?;
    if a.is_zero() {
        return None;
    }
    if c.is_negative() {
        c = -c;
        bx = -bx;
    }
    let b = bx.mod_floor(&a);
    Some((a, b, c))
}

impl Ideal {
    /// The ideal generated by the given integral elements.
    pub fn from_generators(field: QuadraticField, gens: &[FieldElement]) -> Result<Ideal> {
        if field.is_rational() {
            let mut g = BigInt::zero();
            for x in gens {
                let (v, _) = x
                    .integral_coords()
                    .ok_or_else(|| Error::Arithmetic(format!("{x} is not integral")))?;
                g = g.gcd(&v);
            }
            if g.is_zero() {
                return Err(Error::ZeroElement);
            }
            return Ok(Ideal { field, a: g, b: BigInt::zero(), c: BigInt::one() });
        }
        let one = BigInt::one();
        let zero = BigInt::zero();
        let mut vectors = Vec::with_capacity(2 * gens.len());
        for x in gens {
            let (u, v) = x
                .integral_coords()
                .ok_or_else(|| Error::Arithmetic(format!("{x} is not integral")))?;
            vectors.push(omega_mul(field, (&u, &v), (&zero, &one)));
            vectors.push((u, v));
        }
        let (a, b, c) = hnf(&vectors).ok_or(Error::ZeroElement)?;
        Ok(Ideal { field, a, b, c })
    }

    pub fn principal(x: &FieldElement) -> Result<Ideal> {
        Ideal::from_generators(x.field(), std::slice::from_ref(x))
    }

    pub fn unit(field: QuadraticField) -> Ideal {
        Ideal::principal(&field.one()).unwrap()
    }

    /// Builds an ideal from a candidate HNF triple, checking closure under
    /// multiplication by omega.
    pub fn from_hnf(field: QuadraticField, a: i64, b: i64, c: i64) -> Option<Ideal> {
        if field.is_rational() || a <= 0 || c <= 0 || b < 0 || b >= a {
            return None;
        }
        let lattice = Ideal { field, a: a.into(), b: b.into(), c: c.into() };
        let closed = lattice
            .basis()
            .iter()
            .all(|u| lattice.contains(&(u * &field.omega())));
        closed.then_some(lattice)
    }

    pub fn field(&self) -> QuadraticField {
        self.field
    }

    pub fn hnf(&self) -> (&BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.c)
    }

    /// Z-basis as field elements.
    pub fn basis(&self) -> Vec<FieldElement> {
        let a = FieldElement::from_rational(self.field, Rational::from_integer(self.a.clone()));
        if self.field.is_rational() {
            return vec![a];
        }
        let u = FieldElement::from_omega_coords(
            self.field,
            Rational::from_integer(self.b.clone()),
            Rational::from_integer(self.c.clone()),
        );
        vec![a, u]
    }

    /// Absolute norm [O:I].
    pub fn norm(&self) -> BigInt {
        if self.field.is_rational() {
            self.a.clone()
        } else {
            &self.a * &self.c
        }
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        let Some((u, v)) = x.integral_coords() else { return false };
        if self.field.is_rational() {
            return (u % &self.a).is_zero();
        }
        if !(&v % &self.c).is_zero() {
            return false;
        }
        let k = &v / &self.c;
        ((u - k * &self.b) % &self.a).is_zero()
    }

    pub fn mul(&self, other: &Ideal) -> Ideal {
        assert_eq!(self.field, other.field);
        if self.field.is_rational() {
            return Ideal { field: self.field, a: &self.a * &other.a, b: BigInt::zero(), c: BigInt::one() };
        }
        let mut prods = Vec::new();
        for x in self.basis() {
            for y in other.basis() {
                prods.push(&x * &y);
            }
        }
        // products of Z-bases span the product ideal as a Z-module
        let vectors: Vec<_> = prods.iter().map(|p| p.integral_coords().unwrap()).collect();
        let (a, b, c) = hnf(&vectors).expect("product of nonzero ideals");
        Ideal { field: self.field, a, b, c }
    }

    pub fn pow(&self, k: u32) -> Ideal {
        let mut acc = Ideal::unit(self.field);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn conj(&self) -> Ideal {
        let gens: Vec<_> = self.basis().iter().map(FieldElement::conj).collect();
        Ideal::from_generators(self.field, &gens).unwrap()
    }

    /// A generator of the ideal if it is principal, chosen canonically among
    /// its unit multiples.
    pub fn principal_generator(&self) -> Option<FieldElement> {
        let field = self.field;
        if field.is_rational() {
            return Some(FieldElement::from_rational(field, Rational::from_integer(self.a.clone())));
        }
        if field.is_imaginary() {
            imaginary_generator(self)
        } else {
            real_generator(self).map(|g| normalize_real_generator(&g))
        }
    }

    /// Norm form `N(x*a + y*u)/N(I) = A x^2 + B xy + C y^2`.
    fn norm_form(&self) -> (BigInt, BigInt, BigInt) {
        let basis = self.basis();
        let n = Rational::from_integer(self.norm());
        let (a, u) = (&basis[0], &basis[1]);
        let aa = a.norm() / &n;
        let bb = (a * &u.conj()).trace() / &n;
        let cc = u.norm() / &n;
        debug_assert!(aa.is_integer() && bb.is_integer() && cc.is_integer());
        (aa.to_integer(), bb.to_integer(), cc.to_integer())
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.is_rational() {
            write!(f, "({})", self.a)
        } else {
            let b = self.basis();
            write!(f, "[{}, {}]", b[0], b[1])
        }
    }
}

fn imaginary_generator(ideal: &Ideal) -> Option<FieldElement> {
    let field = ideal.field;
    let n = ideal.norm();
    let nf = n.to_f64()?;
    let basis = ideal.basis();
    let (u_re, u_im) = basis[1].complex_embedding();
    let a = basis[0].a().to_integer().to_f64()?;
    let radius = nf.sqrt() * (1.0 + 1e-9) + 1e-9;
    let y_max = (radius / u_im.abs()).floor() as i64;
    let target = Rational::from_integer(n);
    let mut found: Vec<FieldElement> = Vec::new();
    for y in -y_max..=y_max {
        let im = y as f64 * u_im;
        let slack = radius * radius - im * im;
        if slack < 0.0 {
            continue;
        }
        let half = slack.sqrt();
        let centre = -(y as f64) * u_re;
        let lo = ((centre - half) / a).floor() as i64 - 1;
        let hi = ((centre + half) / a).ceil() as i64 + 1;
        for x in lo..=hi {
            let cand = &(&basis[0] * &field.int(x)) + &(&basis[1] * &field.int(y));
            if !cand.is_zero() && cand.norm() == target {
                found.push(cand);
            }
        }
    }
    found.into_iter().min_by(|p, q| p.canonical_cmp(q))
}

/// Continued fraction state of (p + sqrt(delta))/q.
struct Surd {
    p: BigInt,
    q: BigInt,
    delta: BigInt,
    root: BigInt,
}

impl Surd {
    fn new(p: BigInt, q: BigInt, delta: BigInt) -> Self {
        let root = arith::isqrt(&delta);
        Surd { p, q, delta, root }
    }

    fn floor(&self) -> BigInt {
        let num = &self.p + &self.root;
        if self.q.is_positive() {
            num.div_floor(&self.q)
        } else {
            -(num.div_floor(&(-&self.q)) + BigInt::one())
        }
    }

    /// Emits the next partial quotient and advances to the complete quotient.
    fn step(&mut self) -> BigInt {
        let a = self.floor();
        let p = &a * &self.q - &self.p;
        let q = (&self.delta - &p * &p) / &self.q;
        self.p = p;
        self.q = q;
        a
    }

    fn state(&self) -> (BigInt, BigInt) {
        (self.p.clone(), self.q.clone())
    }
}

/// Scans the convergents of a quadratic irrational through one full period,
/// returning the first (x, y) with `accept(x, y)`.
pub(crate) fn scan_convergents(
    p: BigInt,
    q: BigInt,
    delta: BigInt,
    mut accept: impl FnMut(&BigInt, &BigInt) -> bool,
) -> Option<(BigInt, BigInt)> {
    let mut surd = Surd::new(p, q, delta);
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut seen = HashSet::new();
    let mut repeats = 0;
    for _ in 0..100_000 {
        let state = surd.state();
        if !seen.insert(state) {
            // run one extra period past the first repeated state
            repeats += 1;
            if repeats > seen.len() {
                return None;
            }
        }
        let a = surd.step();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        if accept(&h1, &k1) {
            return Some((h1, k1));
        }
    }
    None
}

fn real_generator(ideal: &Ideal) -> Option<FieldElement> {
    let (a, b, c) = ideal.norm_form();
    let field = ideal.field;
    let basis = ideal.basis();
    let make = |x: &BigInt, y: &BigInt| {
        let x = FieldElement::from_rational(field, Rational::from_integer(x.clone()));
        let y = FieldElement::from_rational(field, Rational::from_integer(y.clone()));
        &(&basis[0] * &x) + &(&basis[1] * &y)
    };
    if a.abs().is_one() {
        return Some(make(&BigInt::one(), &BigInt::zero()));
    }
    // |Q(x, y)| = 1 < sqrt(D)/2 forces x/y to be a convergent of a root of
    // Q(t, 1) = 0 (Lagrange), so one period of each expansion suffices.
    let delta = &b * &b - BigInt::from(4) * &a * &c;
    let form = |x: &BigInt, y: &BigInt| &a * x * x + &b * x * y + &c * y * y;
    let roots = [
        (-&b, BigInt::from(2) * &a),
        (b.clone(), BigInt::from(-2) * &a),
    ];
    for (p, q) in roots {
        if let Some((x, y)) = scan_convergents(p, q, delta.clone(), |x, y| form(x, y).abs().is_one()) {
            return Some(make(&x, &y));
        }
    }
    None
}

/// Among +-g*eps^k pick the balanced representative with the smallest
/// canonical key.
fn normalize_real_generator(g: &FieldElement) -> FieldElement {
    let eps = dirichlet::fundamental_unit(g.field()).expect("real quadratic");
    let l = eps.ln_abs_real(0);
    let r = g.ln_abs_real(0) - g.ln_abs_real(1);
    let k = (-r / (2.0 * l)).round() as i64;
    let mut cands = Vec::new();
    for j in [k - 1, k, k + 1] {
        let x = g * &eps.pow(j).unwrap();
        let rj = x.ln_abs_real(0) - x.ln_abs_real(1);
        if rj.abs() <= l * (1.0 + 1e-9) {
            cands.push(-&x);
            cands.push(x);
        }
    }
    cands.into_iter().min_by(|p, q| p.canonical_cmp(q)).expect("a balanced multiple exists")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

/// A prime ideal above a rational prime p.
///
/// For quadratic fields the ring of integers is `Z[omega]`, so the primes
/// above p are `(p, omega - t)` for the roots t of the minimal polynomial of
/// omega mod p (or `(p)` when there is no root). `residue` is that t.
#[derive(Clone, Debug)]
pub struct PrimeIdeal {
    field: QuadraticField,
    p: u64,
    splitting: Splitting,
    residue: Option<u64>,
    ideal: Ideal,
}

impl PartialEq for PrimeIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}
impl Eq for PrimeIdeal {}

impl Hash for PrimeIdeal {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state)
    }
}

impl PartialOrd for PrimeIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for PrimeIdeal {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl PrimeIdeal {
    fn key(&self) -> (QuadraticField, u64, Option<u64>) {
        (self.field, self.p, self.residue)
    }

    pub fn field(&self) -> QuadraticField {
        self.field
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn splitting(&self) -> Splitting {
        self.splitting
    }

    /// Ramification index.
    pub fn e(&self) -> u32 {
        if self.splitting == Splitting::Ramified { 2 } else { 1 }
    }

    /// Residue degree.
    pub fn f(&self) -> u32 {
        if self.splitting == Splitting::Inert { 2 } else { 1 }
    }

    /// Residue of omega mod this ideal; present only for split primes, where
    /// it tells the two conjugates apart.
    pub fn root_data(&self) -> Option<u64> {
        match self.splitting {
            Splitting::Split => self.residue,
            _ => None,
        }
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn two_generators(&self) -> (FieldElement, FieldElement) {
        let p = self.field.int(self.p as i64);
        match self.residue {
            Some(t) if !self.field.is_rational() => (p, &self.field.omega() - &self.field.int(t as i64)),
            _ => (p.clone(), p),
        }
    }

    /// The conjugate prime (itself unless split in a quadratic field).
    pub fn conj(&self) -> PrimeIdeal {
        if self.splitting != Splitting::Split || self.field.is_rational() {
            return self.clone();
        }
        factor_prime(self.field, self.p)
            .unwrap()
            .into_iter()
            .find(|q| q != self)
            .unwrap()
    }

    /// ord_P(x) for nonzero x.
    pub fn valuation(&self, x: &FieldElement) -> Result<i64> {
        assert_eq!(x.field(), self.field);
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        if self.field.is_rational() {
            return Ok(arith::rational_valuation(x.a(), self.p));
        }
        let (u, v, m) = x.split_denominator();
        let beta = FieldElement::from_omega_coords(self.field, Rational::from_integer(u.clone()), Rational::from_integer(v.clone()));
        let total = arith::valuation(beta.norm().numer(), self.p) as i64;
        let ord_beta = match self.splitting {
            Splitting::Inert => total / 2,
            Splitting::Ramified => total,
            Splitting::Split => self.split_valuation(&u, &v, total as u32),
        };
        Ok(ord_beta - self.e() as i64 * arith::valuation(&m, self.p) as i64)
    }

    /// ord_P(u + v*omega) for a split prime, via the p-adic root of the
    /// minimal polynomial of omega congruent to the residue. `bound` is
    /// v_p(N(u + v*omega)), which caps the answer.
    fn split_valuation(&self, u: &BigInt, v: &BigInt, bound: u32) -> i64 {
        if bound == 0 {
            return 0;
        }
        let p = BigInt::from(self.p);
        let modulus = num_traits::pow(p.clone(), bound as usize);
        let (tr, nm) = self.field.omega_poly();
        let (tr, nm) = (BigInt::from(tr), BigInt::from(nm));
        // Hensel lifting, one power of p at a time; the root is simple
        let mut t = BigInt::from(self.residue.unwrap());
        let mut pk = p.clone();
        for _ in 1..bound {
            let next = &pk * &p;
            let g = (&t * &t - &tr * &t + &nm).mod_floor(&next);
            let dg = (BigInt::from(2) * &t - &tr).mod_floor(&p);
            let inv = mod_inverse(&dg, &p);
            let corr = ((&g / &pk) * inv).mod_floor(&p);
            t = (t - corr * &pk).mod_floor(&next);
            pk = next;
        }
        let image = (u + v * &t).mod_floor(&modulus);
        if image.is_zero() {
            return bound as i64;
        }
        (arith::valuation(&image, self.p) as i64).min(bound as i64)
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let eg = a.extended_gcd(m);
    debug_assert!(eg.gcd.is_one());
    eg.x.mod_floor(m)
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (g1, g2) = self.two_generators();
        write!(f, "({g1}, {g2})")
    }
}

fn poly_roots_mod(field: QuadraticField, p: u64) -> Vec<u64> {
    let (tr, nm) = field.omega_poly();
    let p_i = p as i128;
    let eval = |t: i128| (t * t - tr as i128 * t + nm as i128).rem_euclid(p_i);
    if p < 50_000 {
        return (0..p as i128).filter(|&t| eval(t) == 0).map(|t| t as u64).collect();
    }
    poly_roots_by_sqrt(field, p)
}

fn poly_roots_by_sqrt(field: QuadraticField, p: u64) -> Vec<u64> {
    let (tr, nm) = field.omega_poly();
    let p_i = p as i128;
    // odd p: t = (tr +- sqrt(tr^2 - 4 nm)) / 2
    let disc = (tr as i128 * tr as i128 - 4 * nm as i128).rem_euclid(p_i) as u64;
    match sqrt_mod(disc, p) {
        None => vec![],
        Some(s) => {
            let inv2 = (p + 1) / 2;
            let r = |s: u64| ((tr.rem_euclid(p as i64) as u128 + s as u128) % p as u128 * inv2 as u128 % p as u128) as u64;
            let mut v = vec![r(s), r((p - s) % p)];
            v.sort_unstable();
            v.dedup();
            v
        }
    }
}

/// Tonelli-Shanks square root modulo an odd prime.
fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let mm = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let pw = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mm(r, b);
            }
            b = mm(b, b);
            e >>= 1;
        }
        r
    };
    if a == 0 {
        return Some(0);
    }
    if pw(a, (p - 1) / 2) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pw(z, (p - 1) / 2) != p - 1 {
        z += 1;
    }
    let (mut m, mut c, mut t, mut r) = (s, pw(z, q), pw(a, q), pw(a, (q + 1) / 2));
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mm(tt, tt);
            i += 1;
        }
        let b = pw(c, 1 << (m - i - 1));
        m = i;
        c = mm(b, b);
        t = mm(t, c);
        r = mm(r, b);
    }
    Some(r)
}

/// The prime ideals above p, ordered by residue.
pub fn factor_prime(field: QuadraticField, p: u64) -> Result<Vec<PrimeIdeal>> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if field.is_rational() {
        let ideal = Ideal::principal(&field.int(p as i64))?;
        return Ok(vec![PrimeIdeal { field, p, splitting: Splitting::Split, residue: None, ideal }]);
    }
    let pe = field.int(p as i64);
    let roots = poly_roots_mod(field, p);
    let make = |splitting, residue: Option<u64>| {
        let gens = match residue {
            Some(t) => vec![pe.clone(), &field.omega() - &field.int(t as i64)],
            None => vec![pe.clone()],
        };
        PrimeIdeal { field, p, splitting, residue, ideal: Ideal::from_generators(field, &gens).unwrap() }
    };
    Ok(match roots.len() {
        0 => vec![make(Splitting::Inert, None)],
        1 => vec![make(Splitting::Ramified, Some(roots[0]))],
        _ => roots.iter().map(|&t| make(Splitting::Split, Some(t))).collect(),
    })
}

/// A generator g with P^h = (g). Fails if P^h is not principal.
pub fn ideal_power_generator(prime: &PrimeIdeal, h: u32) -> Result<FieldElement> {
    if h == 0 {
        return Err(Error::Arithmetic("exponent must be positive".into()));
    }
    let power = prime.ideal.pow(h);
    power.principal_generator().ok_or_else(|| {
        Error::NotPrincipal(format!(
            "{}^{h} in {}: {h} is not a multiple of the order of its class",
            prime,
            prime.field
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::QuadraticField;

    fn k(d: i64) -> QuadraticField {
        QuadraticField::new(d).unwrap()
    }

    #[test]
    fn gaussian_five_splits_into_conjugates() {
        let gi = k(-1);
        let ps = factor_prime(gi, 5).unwrap();
        assert_eq!(ps.len(), 2);
        assert!(ps.iter().all(|p| p.splitting() == Splitting::Split && p.e() == 1 && p.f() == 1));
        assert_eq!(ps[0].ideal(), &Ideal::principal(&gi.elem(2, -1)).unwrap());
        assert_eq!(ps[1].ideal(), &Ideal::principal(&gi.elem(2, 1)).unwrap());
        assert_eq!(ps[0].root_data(), Some(2));
        assert_eq!(ps[0].conj(), ps[1]);
        let q = factor_prime(k(1), 5).unwrap();
        assert_eq!(q[0].conj(), q[0]);
        assert_eq!(ps[0].conj(), ps[1]);
    }

    #[test]
    fn gaussian_two_ramifies_three_inert() {
        let gi = k(-1);
        let two = factor_prime(gi, 2).unwrap();
        assert_eq!(two.len(), 1);
        assert_eq!(two[0].splitting(), Splitting::Ramified);
        assert_eq!(two[0].e(), 2);
        assert_eq!(two[0].ideal(), &Ideal::principal(&gi.elem(1, 1)).unwrap());
        assert_eq!(two[0].ideal().pow(2), Ideal::principal(&gi.int(2)).unwrap());
        let three = factor_prime(gi, 3).unwrap();
        assert_eq!(three.len(), 1);
        assert_eq!((three[0].splitting(), three[0].e(), three[0].f()), (Splitting::Inert, 1, 2));
        assert_eq!(factor_prime(gi, 9), Err(Error::NotPrime(9)));
    }

    #[test]
    fn splitting_at_two_for_half_integer_fields() {
        // 17 = 1 mod 8 splits, 5 = 5 mod 8 is inert
        assert_eq!(factor_prime(k(17), 2).unwrap().len(), 2);
        assert_eq!(factor_prime(k(5), 2).unwrap()[0].splitting(), Splitting::Inert);
        assert_eq!(factor_prime(k(-7), 2).unwrap().len(), 2);
    }

    #[test]
    fn valuations() {
        let gi = k(-1);
        let ps = factor_prime(gi, 5).unwrap();
        let x = &gi.elem(2, -1) / &gi.elem(2, 1);
        assert_eq!(ps[0].valuation(&x).unwrap(), 1);
        assert_eq!(ps[1].valuation(&x).unwrap(), -1);
        let y = gi.elem(2, -1).pow(7).unwrap() * gi.elem(2, 1).pow(3).unwrap();
        assert_eq!(ps[0].valuation(&y).unwrap(), 7);
        assert_eq!(ps[1].valuation(&y).unwrap(), 3);
        let two = &factor_prime(gi, 2).unwrap()[0];
        assert_eq!(two.valuation(&gi.int(2)).unwrap(), 2);
        assert_eq!(two.valuation(&FieldElement::new(gi, arith::rat(1, 4), arith::int(0)).unwrap()).unwrap(), -4);
        assert!(two.valuation(&gi.zero()).is_err());
    }

    #[test]
    fn valuation_matches_membership() {
        // split valuation by p-adic root versus ideal membership
        let k7 = k(-7);
        for pr in factor_prime(k7, 2).unwrap().into_iter().chain(factor_prime(k7, 11).unwrap()) {
            for u in -12i64..=12 {
                for v in -12i64..=12 {
                    let x = &k7.int(u) + &(&k7.omega() * &k7.int(v));
                    if x.is_zero() {
                        continue;
                    }
                    let mut expect = 0;
                    while pr.ideal().pow(expect + 1).contains(&x) {
                        expect += 1;
                    }
                    assert_eq!(pr.valuation(&x).unwrap(), expect as i64, "{x} at {pr}");
                }
            }
        }
    }

    #[test]
    fn power_generators() {
        let gi = k(-1);
        let p = &factor_prime(gi, 5).unwrap()[0];
        assert_eq!(ideal_power_generator(p, 1).unwrap(), gi.elem(2, -1));
        let q = factor_prime(k(1), 7).unwrap();
        assert_eq!(ideal_power_generator(&q[0], 1).unwrap(), k(1).int(7));
        let k5 = k(-5);
        let p3 = &factor_prime(k5, 3).unwrap()[0];
        assert!(matches!(ideal_power_generator(p3, 1), Err(Error::NotPrincipal(_))));
        let g = ideal_power_generator(p3, 2).unwrap();
        assert_eq!(g.norm(), arith::int(9));
        assert_eq!(Ideal::principal(&g).unwrap(), p3.ideal().pow(2));
        assert_eq!(g, k5.elem(2, 1));
    }

    #[test]
    fn real_quadratic_generators() {
        let k2 = k(2);
        let two = &factor_prime(k2, 2).unwrap()[0];
        assert_eq!(ideal_power_generator(two, 1).unwrap(), k2.elem(0, 1));
        for pr in factor_prime(k2, 7).unwrap() {
            let g = ideal_power_generator(&pr, 1).unwrap();
            assert_eq!(g.norm().abs(), arith::int(7));
            assert_eq!(&Ideal::principal(&g).unwrap(), pr.ideal());
        }
        // Q(sqrt 10): the primes above 3 are not principal, their squares are
        let k10 = k(10);
        let p3 = &factor_prime(k10, 3).unwrap()[0];
        assert!(ideal_power_generator(p3, 1).is_err());
        let g = ideal_power_generator(p3, 2).unwrap();
        assert_eq!(Ideal::principal(&g).unwrap(), p3.ideal().pow(2));
    }

    #[test]
    fn square_root_roots_match_brute_force() {
        for d in [-1, -2, -5, -7, 2, 3, 5, 13, 17, -23] {
            for p in (3..400u64).filter(|&p| arith::is_prime(p)) {
                assert_eq!(poly_roots_by_sqrt(k(d), p), poly_roots_mod(k(d), p), "d = {d}, p = {p}");
            }
        }
    }

    #[test]
    fn large_split_prime_uses_tonelli_shanks() {
        let gi = k(-1);
        let p = 1_000_003u64; // = 3 mod 4, inert
        assert_eq!(factor_prime(gi, p).unwrap()[0].splitting(), Splitting::Inert);
        let p = 1_000_033u64; // = 1 mod 4, split
        let ps = factor_prime(gi, p).unwrap();
        assert_eq!(ps.len(), 2);
        assert_eq!(ps[0].ideal().mul(ps[1].ideal()), Ideal::principal(&gi.int(p as i64)).unwrap());
    }

    #[test]
    fn hnf_rejects_non_ideals() {
        let gi = k(-1);
        assert!(Ideal::from_hnf(gi, 5, 2, 1).is_some());
        assert!(Ideal::from_hnf(gi, 5, 1, 1).is_none());
        assert!(Ideal::from_hnf(gi, 2, 1, 1).is_some());
    }
}
