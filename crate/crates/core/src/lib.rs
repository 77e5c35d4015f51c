//! Exact computer algebra for plane foliations with a rational first integral
//! `f = P^q / Q^p`.
//!
//! The crate is organized bottom-up:
//!
//! - [`poly`]: sparse rational polynomials, monomial orders and rational
//!   differential forms with poles along a fixed divisor.
//! - [`groebner`]: Buchberger's algorithm, normal forms, standard monomials.
//! - [`linalg`]: exact linear solves over the rationals.
//! - [`foliation`]: the first-integral datum, its genericity report and the
//!   degree and Milnor-number bookkeeping.
//! - [`brieskorn`]: the relative module, the Brieskorn/Petrov basis and the
//!   decomposition of rational 1-forms in it.
//! - [`pullback`]: morphisms of the plane, pull-back tangent vectors and the
//!   first-order identity behind them.
//! - [`periods`]: critical values, fiber loops, loop integrals, Melnikov
//!   functions and period determinants (floating point).
//! - [`cli`]: problem files and reports for the `foliation-kit` binary.

pub mod brieskorn;
pub mod cli;
pub mod error;
pub mod foliation;
pub mod groebner;
pub mod linalg;
pub mod periods;
pub mod poly;
pub mod pullback;

pub use error::{Error, Result};
