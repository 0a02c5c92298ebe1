use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("field required (got {0})")]
    FieldRequired(String),

    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),

    #[error("element {value} does not lie in {ring}")]
    NotInRing { value: String, ring: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// An exact division failed. This falsifies an integrality claim, so the
    /// offending term is carried along.
    #[error("inexact division by {divisor}: term {term}")]
    InexactDivision { divisor: String, term: String },

    #[error("integrality violation while building {what}: {detail}")]
    Integrality { what: String, detail: String },

    #[error("invalid chain complex: {0}")]
    InvalidComplex(String),

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("budget exceeded: {what} has dimension {dimension} > {budget}")]
    Budget {
        what: String,
        dimension: usize,
        budget: usize,
    },

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("enumeration requires finite ring")]
    NotFinite,

    #[error("{0}")]
    Unsupported(String),

    #[error("Hopf axiom `{axiom}` fails: {detail}")]
    HopfAxiom { axiom: String, detail: String },

    #[error("parse error: {0}")]
    Parse(String),
}
