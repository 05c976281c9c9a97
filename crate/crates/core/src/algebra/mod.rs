//! Exact arithmetic kernel: rationals, homogeneous polynomials over the
//! weight lattice, restriction to hyperplanes and sparse rank/kernel.
//!
//! Everything is computed over ℚ. The compatibility systems only ever have
//! integer (or, after restriction, rational) entries, so graded dimensions
//! over ℚ agree with those over ℂ and no floating point is needed anywhere.

mod matrix;
mod poly;
mod rational;

pub use matrix::{Kernel, RationalMatrix};
pub use poly::{graded_dim, monomials, restrict_mod_form, HomogPolynomial, LinearForm, Monomial, Restriction};
pub use rational::{format_rational, parse_rational, Rational};
