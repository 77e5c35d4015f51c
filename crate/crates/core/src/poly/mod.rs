//! Exact multivariate polynomials over the rationals and rational differential
//! forms with poles along a fixed divisor.

mod form;
mod monomial;
mod parse;
#[allow(clippy::module_inception)]
mod poly;

pub use form::{pair_index, DifferentialForm};
pub use monomial::{Monomial, MonomialOrder};
pub use parse::{parse_poly, PolyDisplay, Vars};
pub use poly::{rat, rat_frac, rat_to_f64, Poly, Rat};
