//! Generating functions `A_0 .. A_5` of the structured coefficient columns,
//! closed forms of the first two columns, and the differential hierarchy the
//! generating functions satisfy.

mod closed;
mod column;
mod hierarchy;
mod leading;

pub use closed::{a_closed, a_series, RationalFunctionExpr, Term};
pub use column::{check_column, ColumnReport, ColumnRow};
pub use hierarchy::verify_genfun_ode;
pub use leading::{p_m0_closed, p_m1_closed};

use crate::coeffs::CoeffError;
use crate::exact::ExactError;

#[derive(Debug, thiserror::Error)]
pub enum GenfunError {
    #[error("closed form not transcribed for A_{0}")]
    NotTranscribed(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Series(#[from] ExactError),
    #[error(transparent)]
    Coeffs(#[from] CoeffError),
}
