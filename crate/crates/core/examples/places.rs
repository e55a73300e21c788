//! Places of a quadratic field, normalized absolute values and the product
//! formula.
//!
//!     cargo run --example places

use algsunit::{abs_value, function_of, integral, parse_element, parse_field, places_above, RationalPlace, Result};

fn main() -> Result<()> {
    let k = parse_field("Q(i)")?;
    for q in [RationalPlace::Infinite, RationalPlace::Prime(2), RationalPlace::Prime(3), RationalPlace::Prime(5)] {
        let fiber = places_above(k, q)?;
        let labels: Vec<String> = fiber.iter().map(|v| format!("{} (measure {})", v.label(), v.measure())).collect();
        println!("above {q}: {}", labels.join(", "));
    }

    let x = parse_element(k, "(3+4*i)/10")?;
    println!("\nx = {x}");
    let f = function_of(&x)?;
    for (v, e) in f.entries() {
        let a = abs_value(&x, v)?;
        println!("  {:<5} ||x|| = {:<10.6} log = {:+.6}", v.label(), a.value, e.value);
    }
    println!("integral of f_x = {:.1e}", integral(&f, None)?);
    Ok(())
}
