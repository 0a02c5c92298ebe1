pub mod circlehopf;
pub mod complexes;
pub mod error;
pub mod exactalg;
pub mod fgl;
pub mod hochschild;
pub mod rees;
pub mod report;
pub mod witt;

pub use error::{Error, Result};

/// Dimension budget: `HKRLAB_BUDGET` when set to a positive integer,
/// otherwise `default`.
pub fn env_budget(default: usize) -> usize {
    std::env::var("HKRLAB_BUDGET")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&b| b > 0)
        .unwrap_or(default)
}
