//! Hochschild complexes of graded commutative algebras, Connes' operator,
//! the HKR map, de Rham complexes and negative cyclic homology.

mod algebra;
mod bar;
mod derham;
mod hc;
mod parse;

pub use algebra::{FPGradedAlgebra, Generator, KahlerModule};
pub use bar::{hochschild_homology, slice_budget, BarTuple, HHRow, HochschildSlice, DEFAULT_SLICE_BUDGET};
pub use derham::{
    connes_on_forms, de_rham, form_basis, hkr_epsilon, hkr_map, truncated_de_rham_homology, DeRhamData, Form,
    HkrReport,
};
pub use hc::{
    comparison_map_check, filtered_hc_minus_dr_model, hc_minus, hc_minus_de_rham, ComparisonReport, ComparisonRow,
    FilteredHcMinus, GrRow, HCRow,
};
