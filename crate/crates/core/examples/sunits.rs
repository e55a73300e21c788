//! S-unit bases and the rank of their logarithmic embedding.
//!
//!     cargo run --example sunits

use algsunit::dirichlet::{log_embedding, sunit_basis};
use algsunit::parse::parse_place_set;
use algsunit::Result;

fn main() -> Result<()> {
    for set in ["Q:inf,2,3", "Q(i):inf,2,5", "Q(sqrt(2)):inf,2,7", "Q(sqrt(-5)):inf,2,3"] {
        let s = parse_place_set(set)?;
        let basis = sunit_basis(s.base(), &s.finite_places())?;
        let m = log_embedding(&basis)?;
        print!("{basis}");
        println!("  rank {} of {} columns; ord block {:?}\n", m.rank_check(), m.cols.len(), basis.ord_block()?);
    }
    Ok(())
}
