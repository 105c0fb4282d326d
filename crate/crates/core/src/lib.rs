//! Meromorphic solutions vanishing at the origin of the degenerate third
//! Painleve equation with formal monodromy `a = +-i/2`.
//!
//! The crate computes the exact Taylor-coefficient polynomials `c_m(c1)`,
//! checks them against generating functions and 2-adic content formulas,
//! builds the associated monodromy data, and integrates the equation
//! numerically from series-seeded initial values.

pub mod coeffs;
pub mod exact;
pub mod fence;
pub mod genfun;
pub mod monodromy;
pub mod numeric;
pub mod par;
