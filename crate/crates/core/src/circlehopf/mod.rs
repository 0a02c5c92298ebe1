//! Strict Hopf-algebra models for the circle: exterior and truncated
//! Hopf algebras, Ext over augmented algebras, Cartier duality checks and
//! mixed complexes as comodules.

mod cartier;
mod comodule;
mod ext;
mod hopf;

pub use cartier::{cartier_dual_check, hopf_pairing_checks, search_isomorphism, witt_kernel, CartierReport, IsoSearch};
pub use comodule::{strict_mixed_category_check, ComoduleReport};
pub use ext::{
    ext_colimit_tower, ext_dims_by_bar, ext_self, AugmentedAlgebra, ExtRow, ExtTable, MinimalResolution, TowerReport,
    TransitionRow, YonedaProduct,
};
pub use hopf::{
    additive_truncation, exterior, function_algebra, group_algebra, truncated_hopf_algebra, BasisElement,
    GradedHopfAlgebra, HopfData, TruncatedPresentation,
};
