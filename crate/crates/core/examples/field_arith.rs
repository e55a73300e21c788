//! Quadratic fields and exact element arithmetic.
//!
//!     cargo run --example field_arith

use algsunit::dirichlet::{class_number, fundamental_unit};
use algsunit::{parse_element, parse_field, Result};

fn main() -> Result<()> {
    for name in ["Q", "Q(i)", "Q(sqrt(2))", "Q(sqrt(5))", "Q(sqrt(-5))", "Q(sqrt(94))"] {
        let k = parse_field(name)?;
        print!("{k:<12} disc {:>4}  h = {}", k.disc(), class_number(k)?);
        if k.is_real_quadratic() {
            print!("  eps = {}", fundamental_unit(k)?);
        }
        println!();
    }

    let k = parse_field("Q(sqrt(-5))")?;
    let x = parse_element(k, "1+sqrt(-5)")?;
    let y = parse_element(k, "2/3-1/2*sqrt(-5)")?;
    println!("\nx = {x}, y = {y}");
    println!("x*y = {}", &x * &y);
    println!("x/y = {}", &x / &y);
    println!("N(x) = {}, Tr(x) = {}, conj(x) = {}", x.norm(), x.trace(), x.conj());
    println!("x^-3 = {}", x.pow(-3)?);
    println!("x integral: {}, y integral: {}", x.is_integral(), y.is_integral());
    Ok(())
}
