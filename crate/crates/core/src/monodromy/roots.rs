//! Roots of the two transcendental equations for `rho`:
//!
//! `F1(rho) = sin(2 pi rho)/(2 rho) * g(rho - 1/4) + 4 rho e^{-i pi (rho + 1/4)}`
//! `F2(rho) = sin(2 pi rho)/(2 rho) * g(rho + 1/4) - 4 rho e^{i pi (rho - 1/4)}`
//!
//! with `g(w) = w / sin(pi w)`, so that `F2(-rho) = F1(rho)`.

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use super::MonodromyError;
use crate::par::{map_collect, ExecMode};

const I: Complex64 = Complex64::new(0.0, 1.0);
const PATCH: f64 = 1e-4;
const DEDUP: f64 = 1e-9;
const ACCEPT: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RhoRoot {
    pub which: u8,
    pub value: Complex64,
    pub residual: f64,
}

impl RhoRoot {
    /// Whether the root lies in the strip `0 < Re rho < 1/2`.
    pub fn in_strip(&self) -> bool {
        self.value.re > 0.0 && self.value.re < 0.5
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchRect {
    pub re: (f64, f64),
    pub im: (f64, f64),
    pub grid: (usize, usize),
}

impl Default for SearchRect {
    fn default() -> Self {
        Self { re: (-0.05, 1.3), im: (-0.5, 0.5), grid: (40, 30) }
    }
}

impl SearchRect {
    pub fn strip() -> Self {
        Self { re: (0.0, 0.5), ..Self::default() }
    }

    fn contains(&self, z: Complex64) -> bool {
        z.re > self.re.0 && z.re < self.re.1 && z.im > self.im.0 && z.im < self.im.1
    }
}

/// `w / sin(pi w)` and its derivative, with the removable point at 0 patched.
fn g_and_dg(w: Complex64) -> (Complex64, Complex64) {
    if w.norm() < PATCH {
        let pw2 = (PI * w) * (PI * w);
        let g = (1.0 + pw2 / 6.0 + 7.0 * pw2 * pw2 / 360.0) / PI;
        let dg = PI * w / 3.0 + 7.0 * PI.powi(3) * w * w * w / 90.0;
        return (g, dg);
    }
    let (s, c) = ((PI * w).sin(), (PI * w).cos());
    (w / s, (s - PI * w * c) / (s * s))
}

/// `sin(2 pi rho) / (2 rho)` and its derivative.
fn s_and_ds(r: Complex64) -> (Complex64, Complex64) {
    if r.norm() < PATCH {
        let x2 = (2.0 * PI * r) * (2.0 * PI * r);
        let s = PI * (1.0 - x2 / 6.0 + x2 * x2 / 120.0);
        let ds = PI * (-(2.0 * PI).powi(2) * r / 3.0 + (2.0 * PI).powi(4) * r * r * r / 30.0);
        return (s, ds);
    }
    let (sn, cs) = ((2.0 * PI * r).sin(), (2.0 * PI * r).cos());
    (sn / (2.0 * r), PI * cs / r - sn / (2.0 * r * r))
}

fn eval(which: u8, r: Complex64) -> (Complex64, Complex64) {
    let (s, ds) = s_and_ds(r);
    match which {
        1 => {
            let (g, dg) = g_and_dg(r - 0.25);
            let e = (-I * PI * (r + 0.25)).exp();
            (s * g + 4.0 * r * e, ds * g + s * dg + 4.0 * e * (1.0 - I * PI * r))
        }
        _ => {
            let (g, dg) = g_and_dg(r + 0.25);
            let e = (I * PI * (r - 0.25)).exp();
            (s * g - 4.0 * r * e, ds * g + s * dg - 4.0 * e * (1.0 + I * PI * r))
        }
    }
}

fn check_which(which: u8) -> Result<(), MonodromyError> {
    if which == 1 || which == 2 {
        Ok(())
    } else {
        Err(MonodromyError::InvalidArgument(format!("which must be 1 or 2, got {which}")))
    }
}

pub fn varrho_eq(which: u8, rho: Complex64) -> Result<Complex64, MonodromyError> {
    check_which(which)?;
    Ok(eval(which, rho).0)
}

pub fn varrho_eq_derivative(which: u8, rho: Complex64) -> Result<Complex64, MonodromyError> {
    check_which(which)?;
    Ok(eval(which, rho).1)
}

fn newton(which: u8, mut z: Complex64) -> Option<Complex64> {
    for _ in 0..80 {
        let (f, df) = eval(which, z);
        if !f.is_finite() || !df.is_finite() || df.norm() == 0.0 {
            return None;
        }
        let step = f / df;
        z -= step;
        if z.norm() > 1e3 {
            return None;
        }
        if step.norm() < 1e-15 * z.norm().max(1.0) {
            break;
        }
    }
    // A couple of polishing steps; Newton may stall one ulp short.
    for _ in 0..2 {
        let (f, df) = eval(which, z);
        if df.norm() > 0.0 {
            let next = z - f / df;
            if eval(which, next).0.norm() < f.norm() {
                z = next;
            }
        }
    }
    Some(z)
}

/// Newton iteration from a grid of seeds over `rect`; roots inside the
/// rectangle with residual below 1e-12 are deduplicated and sorted by real
/// part.
pub fn find_varrho_roots(which: u8, rect: SearchRect, mode: ExecMode) -> Result<Vec<RhoRoot>, MonodromyError> {
    check_which(which)?;
    let (nx, ny) = rect.grid;
    if nx < 20 || ny < 20 {
        return Err(MonodromyError::InvalidArgument(format!("grid {nx}x{ny} is below 20x20")));
    }
    let hits = map_collect(mode, nx * ny, |k| {
        let (i, j) = (k % nx, k / nx);
        let seed = Complex64::new(
            rect.re.0 + (rect.re.1 - rect.re.0) * (i as f64 + 0.5) / nx as f64,
            rect.im.0 + (rect.im.1 - rect.im.0) * (j as f64 + 0.5) / ny as f64,
        );
        newton(which, seed)
            .map(|z| RhoRoot { which, value: z, residual: eval(which, z).0.norm() })
            .filter(|r| r.residual < ACCEPT && rect.contains(r.value))
    });
    let mut roots: Vec<RhoRoot> = Vec::new();
    for r in hits.into_iter().flatten() {
        match roots.iter_mut().find(|q| (q.value - r.value).norm() < DEDUP) {
            Some(q) if r.residual < q.residual => *q = r,
            Some(_) => {}
            None => roots.push(r),
        }
    }
    roots.sort_by(|a, b| a.value.re.total_cmp(&b.value.re).then(a.value.im.total_cmp(&b.value.im)));
    Ok(roots)
}

pub fn write_roots_csv(roots: &[RhoRoot], out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "which,re,im,residual")?;
    for r in roots {
        writeln!(out, "{},{:.17e},{:.17e},{:.3e}", r.which, r.value.re, r.value.im, r.residual)?;
    }
    Ok(())
}

pub fn save_roots_csv(roots: &[RhoRoot], path: &Path) -> std::io::Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_roots_csv(roots, &mut f)?;
    f.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn quarter_is_an_exact_root_of_the_second_equation() {
        assert!(varrho_eq(2, c(0.25, 0.0)).unwrap().norm() < 1e-15);
        assert!(varrho_eq(1, c(-0.25, 0.0)).unwrap().norm() < 1e-15);
    }

    #[test]
    fn patched_values_are_continuous() {
        for which in [1, 2] {
            for z in [c(0.0, 0.0), c(0.25, 0.0), c(-0.25, 0.0)] {
                for d in [c(2e-4, 0.0), c(0.0, 2e-4), c(5e-5, 5e-5)] {
                    let (a, da) = eval(which, z + d);
                    let (b, db) = eval(which, z + d * 0.3);
                    assert!((a - b).norm() < 1e-2, "{which} {z}");
                    assert!((da - db).norm() < 1e-1);
                }
            }
        }
    }

    #[test]
    fn analytic_derivative_matches_difference_quotient() {
        for which in [1, 2] {
            for z in [c(0.3, -0.2), c(0.7, 0.1), c(1.1, 0.4), c(0.25 + 3e-5, 0.0), c(-0.01, 0.2)] {
                let h = 1e-6;
                let fd = (eval(which, z + h).0 - eval(which, z - h).0) / (2.0 * h);
                assert!((fd - eval(which, z).1).norm() < 1e-6 * (1.0 + fd.norm()), "{which} {z}");
            }
        }
    }

    #[test]
    fn reflection_relation() {
        for z in [c(0.30116884436547816, -0.1989138937847074), c(0.75580947, -0.06115553), c(0.4, 0.3)] {
            assert!((varrho_eq(1, z).unwrap() - varrho_eq(2, -z).unwrap()).norm() < 1e-13);
        }
    }

    #[test]
    fn strip_roots() {
        let r1 = find_varrho_roots(1, SearchRect::strip(), ExecMode::Parallel).unwrap();
        assert_eq!(r1.len(), 1, "{r1:?}");
        assert!((r1[0].value - c(0.30116884436547816, -0.1989138937847074)).norm() < 1e-10);
        let r2 = find_varrho_roots(2, SearchRect::strip(), ExecMode::Parallel).unwrap();
        assert!(r2.iter().any(|r| (r.value - c(0.25, 0.0)).norm() < 1e-13), "{r2:?}");
    }

    #[test]
    fn wide_roots_of_the_second_equation() {
        let r = find_varrho_roots(2, SearchRect::default(), ExecMode::Sequential).unwrap();
        for want in [c(0.75580947, -0.06115553), c(1.20069834, 0.35281941)] {
            assert!(r.iter().any(|q| (q.value - want).norm() < 1e-6), "{want} not in {r:?}");
        }
        let par = find_varrho_roots(2, SearchRect::default(), ExecMode::Parallel).unwrap();
        assert_eq!(r.len(), par.len());
    }

    #[test]
    fn bad_arguments() {
        assert!(varrho_eq(3, c(0.0, 0.0)).is_err());
        let coarse = SearchRect { grid: (10, 10), ..SearchRect::default() };
        assert!(find_varrho_roots(1, coarse, ExecMode::Sequential).is_err());
    }

    #[test]
    fn csv_layout() {
        let roots = [RhoRoot { which: 2, value: c(0.25, 0.0), residual: 0.0 }];
        let mut buf = Vec::new();
        write_roots_csv(&roots, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s.lines().next(), Some("which,re,im,residual"));
        assert_eq!(s.lines().count(), 2);
    }
}
