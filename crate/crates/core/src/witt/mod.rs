//! p-typical Witt vectors: universal polynomials, ghost coordinates,
//! Frobenius, Teichmüller and the scaling action, and kernel enumeration
//! over finite rings.

mod carrier;
mod checks;
mod intpoly;
mod law;
mod vector;

pub use carrier::{Carrier, FiniteKind, FiniteRing, ScalarCarrier};
pub use checks::{
    char_zero_fixed_points_check, enumerate_kernel, field_point_surjectivity_check, inverse_ghost,
    FieldPointRow, FixedPointsReport, KernelMap, KernelReport, SurjectivityReport, ENUMERATION_BUDGET,
};
pub use law::{build_witt_law, x_vars, xy_vars, NaturalityReport, WittLaw, MAX_M, MAX_P};
pub use vector::{ghost, Witt, WittVector, WittVectorJson};
