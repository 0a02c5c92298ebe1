//! Chain, mixed and filtered complexes over a [`BaseRing`](crate::exactalg::BaseRing),
//! with homology reports.

mod chain;
mod filtered;
mod homology;
mod mixed;

pub use chain::{ChainComplex, ChainMap, Degreewise};
pub use filtered::{FilteredComplex, GradedComplex};
pub(crate) use filtered::split_quotient;
pub use homology::GroupReport;
pub use mixed::{MixedComplex, UHomologyRow};
