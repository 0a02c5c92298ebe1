//! One-dimensional formal group laws, their distribution algebras,
//! integer-valued polynomials and divided powers.

mod check;
mod dist;
mod intvalued;
mod law;
mod truncated;

use serde::Serializer;

use crate::exactalg::{BaseRing, Scalar};

pub use check::{cartier_interpolation_check, InterpolationReport, LevelMatch};
pub use dist::{distributions, DistributionAlgebra};
pub use intvalued::{binomial_coordinates, intvalued_structure, DividedPowerAlgebra, GradedComparison, IntValuedPolyAlgebra};
pub use law::{interpolation_fgl, FormalGroupLaw};

pub(crate) fn ring_str<S: Serializer>(r: &BaseRing, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

pub(crate) fn rows_str<S: Serializer>(t: &[Vec<Scalar>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let strs: Vec<Vec<String>> = t.iter().map(|v| v.iter().map(|x| x.to_string()).collect()).collect();
    serde::Serialize::serialize(&strs, s)
}
