//! Monodromy data of the vanishing solutions, the algebraic relations they
//! satisfy, the Bäcklund action, and the transcendental equations for the
//! exponent `rho` of the generic small-`tau` behaviour.

mod point;
mod roots;

pub use point::{backlund_map, monodromy_point, MonodromyPoint, NuPlusOne, Residuals};
pub use roots::{
    find_varrho_roots, save_roots_csv, varrho_eq, varrho_eq_derivative, write_roots_csv, RhoRoot, SearchRect,
};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum MonodromyError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("g11 g22 = 0: truncated-solution boundary, nu+1 undefined")]
    TruncatedBoundary,
}
