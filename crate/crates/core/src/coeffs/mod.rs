//! Exact Taylor-coefficient polynomials `c_m(c1)` of the vanishing solution,
//! their structured coefficient tables, and checks of the structural
//! statements about them.

mod cache;
mod checks;
mod engine;
mod fingerprint;
pub mod residual;
mod scaled;
mod table;

use std::path::PathBuf;

pub use cache::{load_cache, save_cache, CacheWriter, FORMAT_VERSION};
pub use checks::{
    all_coefficients_positive, bound_rm, check_degree, check_estimate, check_parity, degree_below_index,
    expected_degree, EstimateReport, EstimateViolation,
};
pub use engine::{compute_cm, CoeffCache, StepReport};
pub use fingerprint::first_violation;
pub use table::{coeff_table, CoeffTable};

#[derive(Debug, thiserror::Error)]
pub enum CoeffError {
    #[error("c_{m} not computed (cache holds c_0..c_{max})")]
    NotComputed { m: usize, max: usize },
    #[error("cache entry c_{m} is corrupt: {reason}")]
    Corrupt { m: usize, reason: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("c_{m} has a monomial outside the structured powers")]
    Unstructured { m: usize },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("unsupported cache format: {0}")]
    UnsupportedFormat(String),
    #[error("{path}:{line}: {reason}")]
    Parse { path: PathBuf, line: usize, reason: String },
}

impl CoeffError {
    /// Index of the offending entry for errors that identify one.
    pub fn offending_index(&self) -> Option<usize> {
        match self {
            CoeffError::Corrupt { m, .. } | CoeffError::Unstructured { m } => Some(*m),
            _ => None,
        }
    }
}
