//! The functions f_x, their L^p norms and Weil heights, including rational
//! powers via formal products.
//!
//!     cargo run --example heights

use algsunit::arith::rat;
use algsunit::{function_of, function_of_product, height, lp_norm, parse_element, parse_field, FormalProduct, Norm, Result};

fn main() -> Result<()> {
    let q = parse_field("Q")?;
    for text in ["2", "3/4", "-12"] {
        let f = function_of(&parse_element(q, text)?)?;
        println!("h({text}) = {:.6}", height(&f));
    }

    let k = parse_field("Q(sqrt(2))")?;
    let x = parse_element(k, "3+sqrt(2)")?;
    let f = function_of(&x)?;
    println!("\nx = {x}");
    for p in Norm::ALL {
        println!("  ||f_x||_{p} = {:.6}", lp_norm(&f, p));
    }

    let g = FormalProduct::power(x.clone(), rat(2, 3))?;
    println!("h(x^(2/3)) = {:.6}, (2/3) h(x) = {:.6}", height(&function_of_product(&g)?), 2.0 / 3.0 * height(&f));
    Ok(())
}
