//! Compact open sets of places: shorthand, set algebra, refinement along
//! Q -> K and fields of definition.
//!
//!     cargo run --example place_sets

use algsunit::parse::parse_place_set;
use algsunit::{parse_field, Result, SetOp};

fn main() -> Result<()> {
    let s = parse_place_set("Q:inf,2,5")?;
    println!("S = {s}, measure {}", s.measure());

    let k = parse_field("Q(i)")?;
    let sk = s.refine(k)?;
    println!("over {k}: {sk} (measure {})", sk.measure());

    let half = parse_place_set("Q(i):5a,2")?;
    println!("{half}: defined over Q? {}  galois stable? {}", half.is_defined_over(parse_field("Q")?)?, half.is_galois_stable());
    println!("minimal field of definition: {}", half.minimal_definition_field());

    for op in [SetOp::Union, SetOp::Intersect, SetOp::Subtract] {
        println!("{op:?}: {}", sk.set_algebra(op, &half)?);
    }
    println!("primes dividing 2-i: {}", parse_place_set("Q(i):(2-i)")?);
    Ok(())
}
