//! Algebraic S-units modulo torsion, viewed as step functions on the places
//! of Q and of quadratic fields.
//!
//! An algebraic number x gives the function `f_x(v) = log ||x||_v`. This crate
//! computes these functions exactly where possible, their L^p norms and Weil
//! heights, the projections P_S and P_K, S-unit bases and their logarithmic
//! embedding, and two procedures built on them:
//!
//! * [`approx::approximate`]: when S contains every archimedean place, any
//!   zero-integral step function on S is approximated by some f_g with g a
//!   rational power product of S-units.
//! * [`obstruction`]: when S avoids the archimedean places, such g stay at
//!   distance at least ||f|| from level-Q targets f.
//!
//! Fields are Q (d = 1) and Q(sqrt d) for squarefree d.

pub mod approx;
pub mod arith;
pub mod cli;
pub mod config;
pub mod dirichlet;
pub mod error;
pub mod field;
pub mod height;
pub mod ideal;
pub mod linalg;
pub mod obstruction;
pub mod operators;
pub mod parse;
pub mod place_set;
pub mod places;
pub mod sample;
pub mod verify;

pub use error::{Error, Result};
pub use field::{parse_element, parse_field, FieldElement, QuadraticField};
pub use height::{function_of, function_of_product, height, integral, lincomb, lp_norm, FormalProduct, Norm, PlaceFunction};
pub use ideal::{factor_prime, ideal_power_generator, Ideal, PrimeIdeal, Splitting};
pub use place_set::{CompactOpenSet, SetOp};
pub use places::{abs_value, measure_of, places_above, Place, PlaceKind, RationalPlace};
