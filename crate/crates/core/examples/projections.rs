//! The projections P_S (zero mean on S) and P_K (average over fibers down
//! to Q).
//!
//!     cargo run --example projections

use algsunit::operators::{project_k, project_k_lifted, project_s};
use algsunit::parse::{parse_place_set, parse_target};
use algsunit::{integral, lp_norm, parse_field, Norm, Result};

fn main() -> Result<()> {
    let s = parse_place_set("Q:inf,2,3")?;
    let f = parse_target(s.base(), r#"{"inf": 2, "2": "1/2", "7": 5}"#)?;
    let pf = project_s(&f, &s)?;
    println!("P_S f on {s}:");
    for (v, e) in pf.entries() {
        println!("  {:<4} {:+.4}", v.label(), e.value);
    }
    println!("integral {:.1e}, P_S idempotent: {}", integral(&pf, None)?, project_s(&pf, &s)? == pf);

    let k = parse_field("Q(i)")?;
    let g = parse_target(k, r#"{"5a": 1, "5b": -3, "2": "1/2"}"#)?;
    let pg = project_k(&g, parse_field("Q")?)?;
    println!("\nP_K g (level Q):");
    for (v, e) in pg.entries() {
        println!("  {:<4} {:+.4}", v.label(), e.value);
    }
    for p in Norm::ALL {
        println!("  ||P_K g||_{p} = {:.4} <= ||g||_{p} = {:.4}", lp_norm(&project_k_lifted(&g)?, p), lp_norm(&g, p));
    }
    Ok(())
}
