//! The property suite behind `algsunit verify`.
//!
//! Ten checks, each deterministic given the seed. A check fails when a
//! property is violated, when the library reports an error, or when it runs
//! past its time budget.

use std::time::Instant;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::approx::{analyze_dependence, approximate, find_rational_dependence, relation_function};
use crate::arith;
use crate::dirichlet::{class_number, exact_rank, fundamental_unit, log_embedding, sunit_basis};
use crate::error::{Error, Result};
use crate::field::{FieldElement, QuadraticField};
use crate::height::{
    function_of, function_of_product, height, height_of, integral, integral_exact, lp_norm, FormalProduct, LogValue,
    Norm, PlaceFunction,
};
use crate::obstruction::{distance_certificate, normalized_fiber_function, obstruct, split_unit};
use crate::operators::{project_k_lifted, project_s};
use crate::parse::parse_place_set;
use crate::place_set::CompactOpenSet;
use crate::places::{archimedean_places, places_above, Place, RationalPlace};
use crate::sample;

/// Fields used throughout: Q, Q(i), Q(sqrt 2), Q(sqrt 5), Q(sqrt -5).
pub const GRID: [i64; 5] = [1, -1, 2, 5, -5];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    pub budget_seconds: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

type Step = fn(u64) -> Result<String>;

const CHECKS: [(&str, Option<f64>, Step); 10] = [
    ("product formula", Some(5.0), product_formula),
    ("height identities", None, height_identities),
    ("Dirichlet ranks", Some(10.0), dirichlet_ranks),
    ("P_S laws", None, ps_laws),
    ("P_K laws", None, pk_laws),
    ("density by approximation", Some(30.0), density),
    ("rational dependence", None, rational_dependence),
    ("obstruction certificates", Some(60.0), obstruction_certificates),
    ("nontrivial split unit", None, nontrivial_split_unit),
    ("class number and unit oracles", None, oracles),
];

pub fn check_count() -> usize {
    CHECKS.len()
}

/// Runs check `id` (1-based).
pub fn run_check(id: u8, seed: u64) -> Check {
    let (name, budget, step) = CHECKS[id as usize - 1];
    let start = Instant::now();
    let outcome = step(seed);
    let seconds = start.elapsed().as_secs_f64();
    let (mut passed, mut detail) = match outcome {
        Ok(d) => (true, d),
        Err(e) => (false, e.to_string()),
    };
    if let Some(b) = budget {
        if passed && seconds > b {
            passed = false;
            detail = format!("{detail}; took {seconds:.2}s, budget {b}s");
        }
    }
    Check { id, name: name.into(), passed, detail, seconds, budget_seconds: budget }
}

pub fn run(seed: u64) -> VerifyReport {
    let checks: Vec<Check> = (1..=CHECKS.len() as u8).map(|i| run_check(i, seed)).collect();
    VerifyReport { seed, passed: checks.iter().all(|c| c.passed), checks }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Violation(msg()))
    }
}

fn field(d: i64) -> QuadraticField {
    QuadraticField::new(d).expect("grid fields are valid")
}

fn fiber(k: QuadraticField, p: u64) -> Result<Vec<Place>> {
    places_above(k, RationalPlace::Prime(p))
}

/// Finite-place part of the product formula in exact form:
/// sum_v lambda_v log||x||_v over finite v equals -(1/n) log |N(x)|.
fn finite_part_exact(x: &FieldElement) -> Result<()> {
    let f = function_of(x)?;
    let mut acc = LogValue::zero();
    for (v, e) in f.entries() {
        if v.is_archimedean() {
            continue;
        }
        let ex = e.exact.as_ref().ok_or_else(|| Error::Violation(format!("inexact value at {}", v.label())))?;
        acc = acc.add(&ex.scale(&v.measure()));
    }
    let expected = LogValue::log_abs(&x.norm())?.scale(&arith::rat(-1, x.field().degree() as i64));
    ensure(acc == expected, || format!("finite part {acc} for {x}, expected {expected}"))
}

fn product_formula(seed: u64) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for d in GRID {
        let k = field(d);
        for _ in 0..1000 {
            let x = sample::random_element(&mut rng, k);
            let f = function_of(&x)?;
            let total = integral(&f, None)?;
            worst = worst.max(total.abs());
            ensure(total.abs() < 1e-9, || format!("integral {total:e} for {x}"))?;
            if let Some(exact) = integral_exact(&f, None)? {
                ensure(exact.is_zero(), || format!("exact integral {exact} for {x}"))?;
            }
            finite_part_exact(&x)?;
        }
    }
    Ok(format!("5000 elements, max |integral| {worst:.1e}"))
}

fn height_identities(seed: u64) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let q = QuadraticField::rationals();
    let h2 = height_of(&q.int(2))?;
    ensure((h2 - 2f64.ln()).abs() <= 1e-12, || format!("h(2) = {h2}"))?;
    let mut n = 0;
    for d in GRID {
        let k = field(d);
        for _ in 0..40 {
            let x = sample::random_element(&mut rng, k);
            let f = function_of(&x)?;
            let h = height(&f);
            ensure((lp_norm(&f, Norm::L1) - 2.0 * h).abs() < 1e-12, || format!("||f||_1 != 2h for {x}"))?;
            for (num, den) in [(-2, 1), (-1, 1), (1, 2), (3, 1)] {
                let g = FormalProduct::power(x.clone(), arith::rat(num, den))?;
                let hq = height(&function_of_product(&g)?);
                let want = (num as f64 / den as f64).abs() * h;
                ensure((hq - want).abs() < 1e-9 * (1.0 + want), || format!("h({x}^({num}/{den})) = {hq}, want {want}"))?;
                n += 1;
            }
        }
    }
    Ok(format!("h(2) = log 2; {n} power identities"))
}

/// Every subset of the fibers above 2, 3 and 5 (those primes as places of K).
fn fiber_subsets(k: QuadraticField) -> Result<Vec<Vec<Place>>> {
    let pool: Vec<Place> = [2, 3, 5].iter().map(|&p| fiber(k, p)).collect::<Result<Vec<_>>>()?.concat();
    Ok((0u32..1 << pool.len())
        .map(|mask| pool.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| v.clone()).collect())
        .collect())
}

fn dirichlet_ranks(_seed: u64) -> Result<String> {
    let mut cases = 0;
    for d in GRID {
        let k = field(d);
        let arch = archimedean_places(k).len();
        for t in fiber_subsets(k)? {
            let basis = sunit_basis(k, &t)?;
            let m = log_embedding(&basis)?;
            let full = t.len() + arch;
            ensure(m.rank_check() == full - 1, || {
                format!("{k}, T of size {}: rank {} but #T_full - 1 = {}", t.len(), m.rank_check(), full - 1)
            })?;
            let ord = basis.ord_block()?;
            ensure(exact_rank(&ord) == t.len(), || format!("{k}: ord block has rank below #T"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} (K, T) pairs"))
}

/// A field from the grid with a random step function on some of its places
/// and a random nonempty set S, both drawn from the archimedean places and
/// the fibers above 2, 3, 5 and 7.
fn random_instance(rng: &mut ChaCha8Rng) -> Result<(PlaceFunction, CompactOpenSet)> {
    let k = field(*GRID.choose(rng).unwrap());
    let mut pool = archimedean_places(k);
    for p in [2, 3, 5, 7] {
        pool.extend(fiber(k, p)?);
    }
    let support: Vec<Place> = pool.iter().filter(|_| rng.gen_bool(0.6)).cloned().collect();
    let f = sample::random_step_function(rng, k, &support, -3, 3);
    let mut s: Vec<Place> = pool.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
    if s.is_empty() {
        s.push(pool.choose(rng).unwrap().clone());
    }
    Ok((f, CompactOpenSet::new(k, s)?))
}

fn ps_laws(seed: u64) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(3));
    for _ in 0..500 {
        let (f, s) = random_instance(&mut rng)?;
        let pf = project_s(&f, &s)?;
        ensure(project_s(&pf, &s)? == pf, || format!("P_S not idempotent on S = {}", s.shorthand()))?;
        let total = integral(&pf, None)?;
        ensure(total.abs() < 1e-12, || format!("integral of P_S f is {total:e}"))?;
        ensure(integral_exact(&pf, None)?.is_some_and(|x| x.is_zero()), || "exact integral of P_S f nonzero".into())?;
        ensure(pf.supported_in(&s, 0.0), || "P_S f leaves S".into())?;
        let lambda = arith::rational_to_f64(&s.measure());
        for p in Norm::ALL {
            let bound = (1.0 + lambda.powf(1.0 - p.inverse_exponent())) * lp_norm(&f, p);
            let got = lp_norm(&pf, p);
            ensure(got <= bound + 1e-12, || format!("||P_S f||_{p} = {got} > {bound}"))?;
        }
    }
    Ok("500 step functions, p in {1, 2, inf}".into())
}

fn pk_laws(seed: u64) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(4));
    let q = QuadraticField::rationals();
    let mut level_q = 0;
    for i in 0..500 {
        let (f, _) = random_instance(&mut rng)?;
        let pf = project_k_lifted(&f)?;
        ensure(project_k_lifted(&pf)? == pf, || format!("P_K not idempotent over {}", f.field()))?;
        ensure(integral_exact(&pf, None)? == integral_exact(&f, None)?, || "P_K changes the integral".into())?;
        for p in Norm::ALL {
            let (a, b) = (lp_norm(&pf, p), lp_norm(&f, p));
            ensure(a <= b + 1e-12, || format!("||P_K f||_{p} = {a} > ||f||_{p} = {b}"))?;
        }
        if i % 5 == 0 {
            let mut places = archimedean_places(q);
            for p in [2, 3, 5, 7] {
                places.extend(fiber(q, p)?);
            }
            let g = sample::random_step_function(&mut rng, q, &places, -3, 3).lift(f.field())?;
            ensure(project_k_lifted(&g)? == g, || format!("P_K moves a level-Q function over {}", f.field()))?;
            level_q += 1;
        }
    }
    Ok(format!("500 step functions, {level_q} level-Q functions"))
}

fn density(seed: u64) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(5));
    let mut worst_n = 0;
    for set in ["Q:inf,2,3", "Q(sqrt(2)):inf,2,7"] {
        let s = parse_place_set(set)?;
        for _ in 0..20 {
            let f = sample::random_target(&mut rng, &s)?;
            let r = approximate(&f, &s, 1e-3, Norm::L1, 1_000_000)?;
            ensure(r.converged, || format!("no convergence on {set} for {}", serde_json::to_string(&f).unwrap()))?;
            ensure(r.achieved_error.l1 < 1e-3, || format!("achieved error {} on {set}", r.achieved_error.l1))?;
            ensure(r.trace.windows(2).all(|w| w[1].error <= w[0].error), || "trace is not monotone".into())?;
            let fg = function_of_product(&r.result)?;
            let err = lp_norm(&f.sub(&fg)?, Norm::L1);
            ensure(err < 1e-3, || format!("recomputed error {err} on {set}"))?;
            worst_n = worst_n.max(r.denominator_bound);
        }
    }
    Ok(format!("40 targets converged, largest N = {worst_n}"))
}

fn rational_dependence(seed: u64) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(6));
    for set in ["Q:inf,2,3,5", "Q(i):inf,2,5"] {
        let s = parse_place_set(set)?;
        for _ in 0..50 {
            let fam = sample::dependence_family(&mut rng, &s, true)?;
            let c = find_rational_dependence(&fam, &s)?
                .ok_or_else(|| Error::Violation(format!("planted relation missed over {set}")))?;
            ensure(c.iter().any(|x| !x.is_zero()), || "zero relation".into())?;
            let sup = relation_function(&fam, &c)?.sup_abs();
            ensure(sup < 1e-9, || format!("relation leaves sup {sup:e}"))?;

            let fam = sample::dependence_family(&mut rng, &s, false)?;
            let report = analyze_dependence(&fam, &s)?;
            ensure(report.relation.is_none() && report.rank == fam.len(), || {
                format!("independent family over {set} has rank {}", report.rank)
            })?;
        }
    }
    Ok("100 planted and 100 independent families".into())
}

fn obstruction_certificates(seed: u64) -> Result<String> {
    let mut certs = 0;
    for set in ["Q:2,3", "Q:5,7"] {
        let s = parse_place_set(set)?;
        let report = obstruct(&s, 10, 200, seed)?;
        ensure(report.vks_trivial, || format!("relation found over {set}: {:?}", report.relations_found))?;
        ensure(!report.distance_certificates.is_empty(), || format!("empty sample family over {set}"))?;
        for c in &report.distance_certificates {
            ensure(c.holds, || format!("certificate fails for g = {} (p = {})", c.g, c.p))?;
        }
        certs += report.distance_certificates.len();
    }
    let s = parse_place_set("Q:2,3")?;
    let g = FormalProduct::from_element(split_unit(field(-2), 3)?)?;
    let c = distance_certificate(&normalized_fiber_function(&s)?, &g, &s, Norm::L1)?;
    let want = 1.0 + 3f64.ln();
    ensure((c.distance - want).abs() < 1e-9, || format!("||f - g||_1 = {}, want 1 + log 3", c.distance))?;
    Ok(format!("{certs} certificates; ||f - g||_1 = 1 + log 3"))
}

fn nontrivial_split_unit(_seed: u64) -> Result<String> {
    let gi = field(-1);
    let u = split_unit(gi, 5)?;
    ensure(u == &gi.elem(2, -1) / &gi.elem(2, 1), || format!("split unit is {u}"))?;
    let f = function_of(&u)?;
    let mut support = f.support();
    support.sort();
    ensure(support == fiber(gi, 5)?, || "support is not the fiber over 5".into())?;
    let h = height(&f);
    ensure((h - 5f64.ln() / 2.0).abs() <= 1e-12, || format!("height {h}"))?;
    Ok("(2-i)/(2+i), height log 5 / 2".into())
}

/// h(D) = -(w / 2|D|) sum_{a < |D|} (D/a) a for a negative fundamental
/// discriminant D.
pub fn class_number_analytic(disc: i64) -> u32 {
    assert!(disc < 0);
    let w = match disc {
        -4 => 4,
        -3 => 6,
        _ => 2,
    };
    let n = disc.abs();
    let s: i64 = (1..n).map(|a| kronecker(disc, a) * a).sum();
    (-(w * s) / (2 * n)) as u32
}

/// Kronecker symbol (D/n) for n >= 1.
pub fn kronecker(disc: i64, mut n: i64) -> i64 {
    let mut out = 1;
    let mut p = 2;
    while n > 1 {
        if p * p > n {
            p = n;
        }
        while n % p == 0 {
            out *= arith::kronecker_prime(disc, p as u64) as i64;
            n /= p;
        }
        p += 1;
    }
    out
}

/// Smallest x + y sqrt(d) (or (x + y sqrt(d))/2 when d = 1 mod 4) with
/// y > 0 of norm +-1, by direct search over y.
pub fn pell_brute_force(d: i64) -> Option<(i64, i64)> {
    let four = d.rem_euclid(4) == 1;
    let target = if four { 4 } else { 1 };
    for y in 1i64..1_000_000 {
        for sign in [-1, 1] {
            let x2 = d * y * y + sign * target;
            if x2 <= 0 {
                continue;
            }
            let x = (x2 as f64).sqrt().round() as i64;
            if x * x == x2 {
                return Some((x, y));
            }
        }
    }
    None
}

fn oracles(_seed: u64) -> Result<String> {
    for d in [-5, -1] {
        let k = field(d);
        let (h, h0) = (class_number(k)?, class_number_analytic(k.disc()));
        ensure(h == h0, || format!("class number of {k}: {h}, analytic formula {h0}"))?;
    }
    ensure(class_number(field(-5))? == 2 && class_number(field(-1))? == 1, || "class numbers".into())?;
    let k2 = field(2);
    ensure(fundamental_unit(k2)? == k2.elem(1, 1), || "unit of Q(sqrt 2)".into())?;
    let k5 = field(5);
    let phi = FieldElement::new(k5, arith::rat(1, 2), arith::rat(1, 2))?;
    ensure(fundamental_unit(k5)? == phi, || "unit of Q(sqrt 5)".into())?;
    for (k, den) in [(k2, 1), (k5, 2)] {
        let (x, y) = pell_brute_force(k.d()).ok_or_else(|| Error::Violation("Pell search exhausted".into()))?;
        let brute = FieldElement::new(k, arith::rat(x, den), arith::rat(y, den))?;
        let eps = fundamental_unit(k)?;
        ensure(eps == brute, || format!("unit of {k}: {eps}, search gives {brute}"))?;
    }
    Ok("h(-20) = 2, h(-4) = 1, 1+sqrt 2, (1+sqrt 5)/2".into())
}

