//! When S avoids the archimedean places: no relations among S-units of Q,
//! and split units from imaginary quadratic fields stay far from level-Q
//! targets.
//!
//!     cargo run --release --example obstruction

use algsunit::obstruction::{distance_certificate, normalized_fiber_function, obstruct, split_unit};
use algsunit::parse::parse_place_set;
use algsunit::{function_of, height, parse_field, FormalProduct, Norm, Result};

fn main() -> Result<()> {
    for set in ["Q:2,3", "Q:5,7"] {
        let s = parse_place_set(set)?;
        let r = obstruct(&s, 10, 100, 0)?;
        println!(
            "{set}: vks trivial {}, {} exponent vectors searched, {} certificates, all hold: {}",
            r.vks_trivial,
            r.candidate_relations_checked,
            r.distance_certificates.len(),
            r.all_hold()
        );
    }

    let s = parse_place_set("Q:2,3")?;
    let f = normalized_fiber_function(&s)?;
    let u = split_unit(parse_field("Q(sqrt(-2))")?, 3)?;
    let c = distance_certificate(&f, &FormalProduct::from_element(u.clone())?, &s, Norm::L1)?;
    println!("\ng = {u}: ||f - g||_1 = {:.9} (1 + log 3 = {:.9})", c.distance, 1.0 + 3f64.ln());

    let w = split_unit(parse_field("Q(i)")?, 5)?;
    println!("split unit at 5 in Q(i): {w}, height {:.9}", height(&function_of(&w)?));
    Ok(())
}
