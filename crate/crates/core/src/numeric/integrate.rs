use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{series_u, NumError, SolutionParams};

/// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] =
    [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

const BLOWUP: f64 = 1e12;
const VANISH: f64 = 1e-14;

type State = [f64; 4];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub tau: f64,
    pub u: Complex64,
    pub du: Complex64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PoleKind {
    /// `|u|` grows without bound.
    Blowup,
    /// `u` approaches the singular value 0.
    Zero,
}

/// The step size collapsed somewhere in `[lo, hi]`; integration stops there.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoleMarker {
    pub lo: f64,
    pub hi: f64,
    pub kind: PoleKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub params: SolutionParams,
    pub tol: f64,
    pub tau0: f64,
    pub seed_order: usize,
    /// Ordered by increasing `tau`.
    pub samples: Vec<Sample>,
    pub poles: Vec<PoleMarker>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegrateOptions {
    pub tau0: f64,
    pub tau_end: f64,
    pub tol: f64,
    pub seed_order: usize,
    /// Spacing of the output grid; the end point is always sampled.
    pub output_step: f64,
    pub max_steps: usize,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self { tau0: 1e-3, tau_end: 10.0, tol: 1e-10, seed_order: 40, output_step: 0.01, max_steps: 5_000_000 }
    }
}

fn pack(u: Complex64, du: Complex64) -> State {
    [u.re, u.im, du.re, du.im]
}

fn unpack(y: &State) -> (Complex64, Complex64) {
    (Complex64::new(y[0], y[1]), Complex64::new(y[2], y[3]))
}

fn rhs(p: &SolutionParams, tau: f64, y: &State) -> State {
    let (u, du) = unpack(y);
    let ab2 = 2.0 * p.a() * p.b;
    let ddu = du * du / u - du / tau + (-8.0 * p.eps * u * u + ab2) / tau + p.b * p.b / u;
    pack(du, ddu)
}

fn dp_step(p: &SolutionParams, tau: f64, y: &State, h: f64) -> (State, f64, f64) {
    let mut k = [[0.0; 4]; 7];
    for s in 0..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            for i in 0..4 {
                ys[i] += h * A[s][j] * kj[i];
            }
        }
        k[s] = rhs(p, tau + C[s] * h, &ys);
    }
    let mut y5 = *y;
    let mut err2 = 0.0;
    let mut scale = 0.0f64;
    for i in 0..4 {
        let (mut d5, mut d4) = (0.0, 0.0);
        for s in 0..7 {
            d5 += B5[s] * k[s][i];
            d4 += B4[s] * k[s][i];
        }
        y5[i] += h * d5;
        err2 += (h * (d5 - d4)).powi(2);
        scale = scale.max(y[i].abs()).max(y5[i].abs());
    }
    (y5, err2.sqrt(), scale)
}

/// Integrates from the state `(u, u')` at `tau_start` through the points of
/// `grid`, which must be strictly monotone away from `tau_start`. Returns the
/// samples reached, in grid order, and a marker if a pole stopped the run.
pub fn integrate_from(
    params: &SolutionParams,
    tau_start: f64,
    u0: Complex64,
    du0: Complex64,
    grid: &[f64],
    tol: f64,
    max_steps: usize,
) -> Result<(Vec<Sample>, Option<PoleMarker>), NumError> {
    params.validate()?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(NumError::InvalidParams(format!("tolerance must be positive, got {tol}")));
    }
    let Some(&last) = grid.last() else { return Ok((Vec::new(), None)) };
    let dir = (last - tau_start).signum();
    if dir == 0.0 || grid.windows(2).any(|w| (w[1] - w[0]) * dir <= 0.0) || (grid[0] - tau_start) * dir <= 0.0 {
        return Err(NumError::InvalidParams("output grid must be strictly monotone away from the start".into()));
    }
    if tau_start <= 0.0 || grid.iter().any(|t| *t <= 0.0) {
        return Err(NumError::InvalidParams("integration must stay in tau > 0".into()));
    }
    let mut tau = tau_start;
    let mut y = pack(u0, du0);
    let mut h = dir * 1e-2 * tau_start.abs().min(1.0);
    let mut out = Vec::with_capacity(grid.len());
    let mut next = 0;
    let mut steps = 0;
    while next < grid.len() {
        steps += 1;
        if steps > max_steps {
            return Err(NumError::IntegrationFailure { tau, reason: format!("more than {max_steps} steps") });
        }
        let target = grid[next];
        let hits = (tau + h - target) * dir >= 0.0;
        let step = if hits { target - tau } else { h };
        let (ynew, err, scale) = dp_step(params, tau, &y, step);
        let ratio = err / (tol * (1.0 + scale));
        if ratio.is_finite() && ratio <= 1.0 {
            let tau_prev = tau;
            y = ynew;
            tau = if hits { target } else { tau + step };
            let umag = unpack(&y).0.norm();
            if !(VANISH..=BLOWUP).contains(&umag) {
                let kind = if umag > BLOWUP { PoleKind::Blowup } else { PoleKind::Zero };
                return Ok((out, Some(marker(tau_prev, tau, kind))));
            }
            if hits {
                let (u, du) = unpack(&y);
                out.push(Sample { tau, u, du });
                next += 1;
            }
            let grow = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
            if !hits || step.abs() >= h.abs() {
                h *= grow;
            }
        } else {
            let shrink = if ratio.is_finite() { (0.9 * ratio.powf(-0.2)).clamp(0.1, 0.9) } else { 0.1 };
            h = step * shrink;
            if h.abs() < 1e-13 * tau.abs().max(1.0) {
                let (u, du) = unpack(&y);
                if u.norm() > 1e3 * (1.0 + u0.norm()) || du.norm() > 1e6 * (1.0 + du0.norm()) || u.norm() < 1e-6 {
                    let kind = if u.norm() < 1e-6 { PoleKind::Zero } else { PoleKind::Blowup };
                    return Ok((out, Some(marker(tau, tau + step, kind))));
                }
                return Err(NumError::IntegrationFailure { tau, reason: "step size collapsed".into() });
            }
        }
    }
    Ok((out, None))
}

fn marker(a: f64, b: f64, kind: PoleKind) -> PoleMarker {
    PoleMarker { lo: a.min(b), hi: a.max(b), kind }
}

/// Seeds `(u, u')` from the series at `tau0` and integrates to `tau_end`
/// (either side of `tau0`, but `tau > 0`).
pub fn integrate(params: &SolutionParams, opts: &IntegrateOptions) -> Result<Trajectory, NumError> {
    let IntegrateOptions { tau0, tau_end, tol, seed_order, output_step, max_steps } = *opts;
    if tau0.is_nan() || tau_end.is_nan() || tau0 <= 0.0 || tau_end <= 0.0 || tau0 == tau_end {
        return Err(NumError::InvalidParams(format!("need 0 < tau0 != tau_end, got {tau0}, {tau_end}")));
    }
    if output_step.is_nan() || output_step <= 0.0 {
        return Err(NumError::InvalidParams(format!("output step must be positive, got {output_step}")));
    }
    let series = series_u(params, seed_order)?;
    let (u0, du0) = (series.eval(tau0), series.derivative().eval(tau0));
    let dir = (tau_end - tau0).signum();
    // Multiples of the output step strictly between the end points.
    let (lo, hi) = (tau0.min(tau_end), tau0.max(tau_end));
    let first = (lo / output_step).floor() as usize + 1;
    let mut grid: Vec<f64> = (first..)
        .map(|k| k as f64 * output_step)
        .take_while(|t| *t < hi * (1.0 - 1e-12))
        .filter(|t| *t > lo * (1.0 + 1e-12))
        .collect();
    if dir < 0.0 {
        grid.reverse();
    }
    grid.push(tau_end);
    let (mut samples, pole) = integrate_from(params, tau0, u0, du0, &grid, tol, max_steps)?;
    samples.insert(0, Sample { tau: tau0, u: u0, du: du0 });
    if dir < 0.0 {
        samples.reverse();
    }
    Ok(Trajectory { params: *params, tol, tau0, seed_order, samples, poles: pole.into_iter().collect() })
}

/// `(t, xi) = (tau^2, 8 tau u / a_hat^3)` for every sample.
pub fn garnier_transform(traj: &Trajectory, a_hat: f64) -> Result<Vec<(f64, Complex64)>, NumError> {
    if a_hat == 0.0 || !a_hat.is_finite() {
        return Err(NumError::InvalidParams("a_hat must be a nonzero real".into()));
    }
    if traj.params.eps != 1.0 {
        return Err(NumError::InvalidParams("the Garnier relation holds for eps = 1".into()));
    }
    Ok(traj.samples.iter().map(|s| (s.tau * s.tau, 8.0 * s.tau * s.u / a_hat.powi(3))).collect())
}
