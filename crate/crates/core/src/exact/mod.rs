//! Exact arithmetic: normalized big rationals, dense polynomials in the
//! parameter `c1`, and truncated Laurent series in `z`.

mod poly;
mod rational;
mod series;

pub use poly::RationalPoly;
pub use rational::{
    format_rational, lcm, odd_part, parse_rational, rat, rational_to_f64, val2, val2_int, Rational,
};
pub use series::RationalSeries;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("valuation of zero undefined")]
    ValuationOfZero,
    #[error("division by a series that vanishes to its truncation order")]
    DivisionByZeroSeries,
    #[error("cannot parse rational `{0}`")]
    Parse(String),
}
