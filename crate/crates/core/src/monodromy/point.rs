use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::Serialize;

use super::MonodromyError;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A point `(a, s00, s0inf, s1inf, g11, g12, g21, g22)` of the monodromy
/// manifold with `a = kappa * i / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MonodromyPoint {
    pub kappa: i8,
    pub eps_b: f64,
    pub s00: Complex64,
    pub s0inf: Complex64,
    pub s1inf: Complex64,
    pub g11: Complex64,
    pub g12: Complex64,
    pub g21: Complex64,
    pub g22: Complex64,
    /// `sqrt(pi) c1t / (2^(3/2) sqrt(eps_b))`.
    pub x: Complex64,
}

/// Absolute residuals of the five manifold equations followed by the two
/// equations of the contracted manifold.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Residuals(pub [f64; 7]);

impl Residuals {
    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NuPlusOne {
    /// `(i / 2pi) Log(g11 g22)` with the real part reduced into `[0, 1)`.
    pub value: Complex64,
    /// The same with the principal logarithm and no reduction.
    pub raw: Complex64,
}

fn kappa_ok(kappa: i8) -> Result<(), MonodromyError> {
    if kappa == 1 || kappa == -1 {
        Ok(())
    } else {
        Err(MonodromyError::InvalidArgument(format!("kappa must be +1 or -1, got {kappa}")))
    }
}

/// Monodromy data of the solution with parameter `c1t`, in the gauge
/// `g12 = 1` (`kappa = +1`) or `g21 = 1` (`kappa = -1`).
pub fn monodromy_point(c1t: Complex64, eps_b: f64, kappa: i8) -> Result<MonodromyPoint, MonodromyError> {
    kappa_ok(kappa)?;
    if !eps_b.is_finite() || eps_b <= 0.0 {
        return Err(MonodromyError::InvalidArgument(format!("eps*b must be positive, got {eps_b}")));
    }
    let x = c1t * (PI.sqrt() / (2f64.powf(1.5) * eps_b.sqrt()));
    let omega = Complex64::from_polar(1.0, kappa as f64 * FRAC_PI_4);
    let xo = x * omega;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let g3 = (one + xo) / 2.0;
    let g4 = -(one - xo) / 2.0;
    let p = if kappa == 1 {
        MonodromyPoint { kappa, eps_b, s00: zero, s0inf: xo, s1inf: zero, g11: -g3, g12: one, g21: g4, g22: -one, x }
    } else {
        MonodromyPoint { kappa, eps_b, s00: zero, s0inf: zero, s1inf: xo, g11: -one, g12: g4, g21: one, g22: -g3, x }
    };
    Ok(p)
}

impl MonodromyPoint {
    pub fn a(&self) -> Complex64 {
        Complex64::new(0.0, self.kappa as f64 / 2.0)
    }

    /// `e^{-pi a}`.
    fn e_minus(&self) -> Complex64 {
        (-PI * self.a()).exp()
    }

    pub fn g1t(&self) -> Complex64 {
        I * self.g12 * self.g11
    }
    pub fn g2t(&self) -> Complex64 {
        I * self.g21 * self.g22
    }
    pub fn g3t(&self) -> Complex64 {
        self.g11 * self.g22
    }
    pub fn g4t(&self) -> Complex64 {
        self.g12 * self.g21
    }
    pub fn st(&self) -> Complex64 {
        1.0 + I * self.s00
    }
    pub fn f1t(&self) -> Complex64 {
        self.g12 * self.g12
    }
    pub fn f2t(&self) -> Complex64 {
        self.g21 * self.g21
    }

    pub fn residuals(&self) -> Residuals {
        let em = self.e_minus();
        let ep = (PI * self.a()).exp();
        let (s00, s0, s1) = (self.s00, self.s0inf, self.s1inf);
        let (g11, g12, g21, g22) = (self.g11, self.g12, self.g21, self.g22);
        let (g1, g3) = (self.g1t(), self.g3t());
        Residuals([
            (s0 * s1 + 1.0 + em * em + I * s00 * em).norm(),
            (g21 * g22 - g11 * g12 + s00 * g11 * g22 - I * em).norm(),
            (g11 * g11 - g21 * g21 - s00 * g11 * g21 - I * s0 * em).norm(),
            (g22 * g22 - g12 * g12 + s00 * g12 * g22 - I * s1 * ep).norm(),
            (g11 * g22 - g12 * g21 - 1.0).norm(),
            (g3 * g3 + g1 * g1 + (1.0 - self.st()) * g1 * g3 - g3 - g1 * em).norm(),
            (self.f1t() * self.f2t() - (g3 - 1.0) * (g3 - 1.0)).norm(),
        ])
    }

    /// Residuals of the contracted relations before `g2t`, `g4t` are
    /// eliminated.
    pub fn contracted_residuals(&self) -> [f64; 4] {
        let (g1, g2, g3, g4) = (self.g1t(), self.g2t(), self.g3t(), self.g4t());
        [
            (g1 - g2 + (1.0 - self.st()) * g3 - self.e_minus()).norm(),
            (g3 * g4 + g1 * g2).norm(),
            (g3 - g4 - 1.0).norm(),
            (self.f1t() * self.f2t() - g4 * g4).norm(),
        ]
    }

    /// The same solution seen through the other branch of the connection
    /// matrix, `G -> -G`.
    pub fn negated(&self) -> Self {
        Self { g11: -self.g11, g12: -self.g12, g21: -self.g21, g22: -self.g22, ..*self }
    }

    pub fn nu_plus_one(&self) -> Result<NuPlusOne, MonodromyError> {
        let g3 = self.g3t();
        if g3.norm() == 0.0 {
            return Err(MonodromyError::TruncatedBoundary);
        }
        let raw = I / (2.0 * PI) * g3.ln();
        let value = Complex64::new(raw.re.rem_euclid(1.0), raw.im);
        Ok(NuPlusOne { value, raw })
    }
}

/// Action of the Bäcklund transformation from `a = i/2` to `a = -i/2`.
pub fn backlund_map(p: &MonodromyPoint) -> Result<MonodromyPoint, MonodromyError> {
    if p.kappa != 1 {
        return Err(MonodromyError::InvalidArgument("the Bäcklund action is stated for a = i/2".into()));
    }
    Ok(MonodromyPoint {
        kappa: -1,
        s00: -p.s00,
        g11: I * p.g11,
        g12: I * p.g12,
        g21: -I * p.g21,
        g22: -I * p.g22,
        ..*p
    })
}
