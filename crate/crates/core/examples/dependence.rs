//! Exact rational relations among power products of S-units.
//!
//!     cargo run --example dependence

use algsunit::approx::{analyze_dependence, relation_function};
use algsunit::parse::{parse_formal_product, parse_place_set};
use algsunit::{FormalProduct, Result};

fn main() -> Result<()> {
    let s = parse_place_set("Q(i):inf,2,5")?;
    let texts = ["(2+i)^(1/2)*(1+i)", "(2-i)^3", "(2+i)^2*(2-i)^-3*(1+i)^4*i"];
    let gs: Vec<FormalProduct> = texts.iter().map(|t| parse_formal_product(s.base(), t)).collect::<Result<_>>()?;
    let report = analyze_dependence(&gs, &s)?;
    println!("basis: {:?}", report.basis.labels());
    for (t, row) in texts.iter().zip(&report.coordinates) {
        let row: Vec<String> = row.iter().map(|q| q.to_string()).collect();
        println!("  {t:<28} -> [{}]", row.join(", "));
    }
    println!("rank {}", report.rank);
    match &report.relation {
        Some(c) => {
            let c: Vec<String> = c.iter().map(|q| q.to_string()).collect();
            println!("relation {:?}, residual sup {:.1e}", c, relation_function(&gs, &report.relation.clone().unwrap())?.sup_abs());
        }
        None => println!("independent"),
    }
    Ok(())
}
