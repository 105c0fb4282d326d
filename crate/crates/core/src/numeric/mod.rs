//! Double-precision side: the solution series in the original variables,
//! series-seeded integration of the equation, the Bäcklund series identity
//! and trajectory output.

mod integrate;
mod output;
mod series;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use integrate::{
    garnier_transform, integrate, integrate_from, IntegrateOptions, PoleKind, PoleMarker, Sample, Trajectory,
};
pub use output::{batch_integrate, emit_csv, read_csv, sha256_hex, write_csv, BatchEntry, BatchManifest};
pub use series::{
    backlund_series, backlund_series_check, ode_residual_series, recurrence_coeffs, series_u, tilde_coeffs,
    BacklundCheck, ComplexSeries,
};

#[derive(Debug, thiserror::Error)]
pub enum NumError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("coefficient routes disagree at m = {m}: direct {direct}, scaled {scaled}")]
    RouteMismatch { m: usize, direct: Complex64, scaled: Complex64 },
    #[error("series division failed: {0}")]
    SeriesDivision(String),
    #[error("integration failure at tau = {tau}: {reason}")]
    IntegrationFailure { tau: f64, reason: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{line}: {reason}")]
    Parse { path: String, line: usize, reason: String },
}

/// Parameters of the equation with `a = kappa i / 2` and of the solution
/// `u = -(b/2a) tau (1 + c1t tau + ...)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionParams {
    pub kappa: i8,
    pub eps: f64,
    pub b: f64,
    pub c1t: Complex64,
}

impl SolutionParams {
    pub fn validate(&self) -> Result<(), NumError> {
        if self.kappa != 1 && self.kappa != -1 {
            return Err(NumError::InvalidParams(format!("kappa must be +1 or -1, got {}", self.kappa)));
        }
        if self.eps != 1.0 && self.eps != -1.0 {
            return Err(NumError::InvalidParams(format!("eps must be +1 or -1, got {}", self.eps)));
        }
        if !self.b.is_finite() || self.eps * self.b <= 0.0 {
            return Err(NumError::InvalidParams(format!("eps*b must be positive, got eps={} b={}", self.eps, self.b)));
        }
        if !self.c1t.is_finite() {
            return Err(NumError::InvalidParams("c1 must be finite".into()));
        }
        Ok(())
    }

    pub fn a(&self) -> Complex64 {
        Complex64::new(0.0, self.kappa as f64 / 2.0)
    }

    /// `C = -8 kappa eps b i`.
    pub fn big_c(&self) -> Complex64 {
        Complex64::new(0.0, -8.0 * self.kappa as f64 * self.eps * self.b)
    }

    /// `alpha = sqrt(-2 kappa eps b i)`, principal branch.
    pub fn alpha(&self) -> Complex64 {
        (self.big_c() / 4.0).sqrt()
    }
}
