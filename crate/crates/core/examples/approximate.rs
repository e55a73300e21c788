//! Approximating a zero-integral step function on S by f_g, with g a
//! rational power product of S-units.
//!
//!     cargo run --release --example approximate

use algsunit::approx::approximate;
use algsunit::parse::{parse_place_set, parse_target};
use algsunit::{Norm, Result};

fn main() -> Result<()> {
    let s = parse_place_set("Q:inf,2,3")?;
    let f = parse_target(s.base(), r#"{"2": 1, "3": -1}"#)?;
    for eps in [1e-1, 1e-3, 1e-6] {
        let r = approximate(&f, &s, eps, Norm::L1, 1_000_000)?;
        println!("eps {eps:.0e}: g = {}  error {:.2e}  N = {}", r.result, r.achieved_error.l1, r.denominator_bound);
    }

    let s = parse_place_set("Q(sqrt(2)):inf,2,7")?;
    let f = parse_target(s.base(), r#"{"inf0": 1, "inf1": -1, "2": "1/2", "7a": -1}"#)?;
    let r = approximate(&f, &s, 1e-4, Norm::L2, 1_000_000)?;
    println!("\nover {}: g = {}", s.base(), r.result);
    for t in &r.trace {
        println!("  N = {:<6} error {:.3e}", t.n, t.error);
    }
    Ok(())
}
