use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Signed;
use serde::Serialize;

use super::{coeff_table, CoeffCache, CoeffError};

/// True iff every monomial of `c_m` has the parity of `m`.
pub fn check_parity(m: usize, cache: &CoeffCache) -> Result<bool, CoeffError> {
    Ok(cache.poly(m)?.support().all(|k| k % 2 == m % 2))
}

/// `k` for `m = 3k` or `3k+2`, `k+1` for `m = 3k+1`.
pub fn expected_degree(m: usize) -> usize {
    m / 3 + usize::from(m % 3 == 1)
}

pub fn check_degree(m: usize, cache: &CoeffCache) -> Result<bool, CoeffError> {
    Ok(cache.degree(m)? == Some(expected_degree(m)))
}

/// `deg c_m < m`, for `m >= 2`.
pub fn degree_below_index(m: usize, cache: &CoeffCache) -> Result<bool, CoeffError> {
    if m < 2 {
        return Err(CoeffError::InvalidArgument("degree bound starts at m = 2".into()));
    }
    Ok(cache.degree(m)?.is_some_and(|d| d < m))
}

/// All structured coefficients `p_{m,n}` strictly positive.
pub fn all_coefficients_positive(m: usize, cache: &CoeffCache) -> Result<bool, CoeffError> {
    Ok(coeff_table(m, cache)?.entries.iter().all(|(_, p)| p.is_positive()))
}

/// The quantity `R_m` of the inductive convergence estimate; the induction
/// step closes when it does not exceed 1.
pub fn bound_rm(m: usize, alpha: f64, c2: f64) -> Result<f64, CoeffError> {
    if m < 2 {
        return Err(CoeffError::InvalidArgument(format!("R_m needs m >= 2, got {m}")));
    }
    if alpha < 1.0 || c2 <= 0.0 {
        return Err(CoeffError::InvalidArgument(format!("need alpha >= 1 and C^2 > 0, got {alpha}, {c2}")));
    }
    let m1 = (m + 1) as f64;
    let p2 = PI * PI;
    let tail = 4.0 * (p2 / 3.0 + 2.0) * (p2 / 3.0 + 1.0) * alpha / (c2 * m1 * m1);
    Ok(m1 / (m as f64 - 1.0) * alpha * (p2 / 6.0 - 1.0 + tail))
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct EstimateViolation {
    pub m: usize,
    pub value: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct EstimateReport {
    pub max_m: usize,
    pub alpha: f64,
    pub c: f64,
    pub violations: Vec<EstimateViolation>,
}

/// Evaluates `|c_m(c1)|` for `m <= max_m` against `alpha C^m / (m+1)^2`.
pub fn check_estimate(
    max_m: usize,
    c1: Complex64,
    alpha: f64,
    c: f64,
    cache: &CoeffCache,
) -> Result<EstimateReport, CoeffError> {
    let floor = (12.0 / alpha).sqrt().max(4.0 * c1.norm() / alpha);
    if c < floor * (1.0 - 1e-12) {
        return Err(CoeffError::InvalidArgument(format!("C = {c} is below max(sqrt(12/alpha), 4|c1|/alpha) = {floor}")));
    }
    let mut violations = Vec::new();
    for m in 0..=max_m {
        let value = cache.poly(m)?.eval_complex(c1).norm();
        let bound = alpha * c.powi(m as i32) / ((m + 1) * (m + 1)) as f64;
        if value >= bound {
            violations.push(EstimateViolation { m, value, bound });
        }
    }
    Ok(EstimateReport { max_m, alpha, c, violations })
}
