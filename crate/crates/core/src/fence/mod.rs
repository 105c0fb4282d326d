//! 2-adic content of the coefficient polynomials and the fence formulas
//! that predict it.

mod area;
mod formulas;
mod report;
pub mod sequences;
mod walks;

pub use area::{area_recurrence_holds, area_sum_holds, fence_area, fence_area_from_heights};
pub use formulas::{z_even_formula, z_formula, z_odd_formula, FencePrediction, FenceRule};
pub use report::{content_val2, verify_fence, Content, FenceEntry, FenceReport};
pub use sequences::{a_seq, atilde_seq, b_seq, btilde};
pub use walks::{even_shape_walk, odd_shape_walk};

use crate::coeffs::CoeffError;

#[derive(Debug, thiserror::Error)]
pub enum FenceError {
    #[error("invalid index: {0}")]
    InvalidIndex(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Coeffs(#[from] CoeffError),
}
