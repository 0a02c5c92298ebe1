//! Exact base rings, matrices over them, Smith normal form and sparse
//! multivariate polynomials.

mod field;
mod matrix;
mod poly;
mod ring;
mod snf;

pub use matrix::{ExactMatrix, SmithForm};
pub use poly::{var_names, CommRing, Monomial, MultiPoly, PolyRing};
pub use ring::{big, factor, int, is_prime, mod_inverse, scalar_to_i64, valuation, BaseRing, Scalar};
