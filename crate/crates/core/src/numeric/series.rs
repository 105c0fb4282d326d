use num_complex::Complex64;

use super::{NumError, SolutionParams};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Power series `sum c_k tau^k`, known for `k < len`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexSeries {
    coeffs: Vec<Complex64>,
}

impl ComplexSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn constant(c: Complex64, len: usize) -> Self {
        let mut v = vec![ZERO; len];
        if len > 0 {
            v[0] = c;
        }
        Self::new(v)
    }

    /// Number of known coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    pub fn eval(&self, tau: f64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * tau + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.len().min(rhs.len());
        Self::new((0..n).map(|k| self.coeffs[k] + rhs.coeffs[k]).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(-Complex64::new(1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Multiplication by `tau^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut v = vec![ZERO; k];
        v.extend_from_slice(&self.coeffs);
        Self::new(v)
    }

    /// Division by `tau^k`; the dropped coefficients must vanish to `tol`
    /// relative to the largest coefficient.
    pub fn shift_down(&self, k: usize, tol: f64) -> Result<Self, NumError> {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        if self.coeffs.iter().take(k).any(|c| c.norm() > tol * scale) || self.len() < k {
            return Err(NumError::SeriesDivision(format!("series does not vanish to order {k}")));
        }
        Ok(Self::new(self.coeffs[k..].to_vec()))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.len().min(rhs.len());
        let mut out = vec![ZERO; n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            for (j, b) in rhs.coeffs.iter().take(n - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn div(&self, rhs: &Self) -> Result<Self, NumError> {
        let lead = rhs.coeff(0);
        if lead.norm() == 0.0 || rhs.is_empty() {
            return Err(NumError::SeriesDivision("divisor has zero constant term".into()));
        }
        let n = self.len().min(rhs.len());
        let mut q: Vec<Complex64> = Vec::with_capacity(n);
        for k in 0..n {
            let acc = (1..=k).fold(self.coeffs[k], |acc, j| acc - rhs.coeffs[j] * q[k - j]);
            q.push(acc / lead);
        }
        Ok(Self::new(q))
    }
}

/// Coefficients `c_0..=c_order` of the recurrence
/// `(m^2 - 1) c_m = sum (p+2)(m-2p-2) c_{p+1} c_{m-p-1} + C sum_p sum_q c_{m-p-2} c_q c_{p-q}`
/// with `c_0 = 1`, `c_1 = c1`, in double precision.
pub fn recurrence_coeffs(c1: Complex64, big_c: Complex64, order: usize) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0), c1];
    let mut squares: Vec<Complex64> = Vec::new();
    for m in 2..=order {
        let p = m - 2;
        squares.push((0..=p).map(|q| c[q] * c[p - q]).sum());
        let first: Complex64 = (0..=m - 2)
            .map(|p| c[p + 1] * c[m - p - 1] * ((p as f64 + 2.0) * (m as f64 - 2.0 * p as f64 - 2.0)))
            .sum();
        let second: Complex64 = squares.iter().enumerate().map(|(p, d)| c[m - p - 2] * d).sum();
        c.push((first + big_c * second) / ((m * m - 1) as f64));
    }
    c.truncate(order + 1);
    c
}

/// Sizes of the summands in the recurrence: the same recursion run on
/// magnitudes with absolute weights. Rounding errors are measured against it.
fn recurrence_majorant(c1: f64, big_c: f64, order: usize) -> Vec<f64> {
    let mut c = vec![1.0, c1];
    let mut squares: Vec<f64> = Vec::new();
    for m in 2..=order {
        let p = m - 2;
        squares.push((0..=p).map(|q| c[q] * c[p - q]).sum());
        let first: f64 =
            (0..=m - 2).map(|p| c[p + 1] * c[m - p - 1] * ((p as f64 + 2.0) * (m as f64 - 2.0 * p as f64 - 2.0)).abs()).sum();
        let second: f64 = squares.iter().enumerate().map(|(p, d)| c[m - p - 2] * d).sum();
        c.push((first + big_c * second) / ((m * m - 1) as f64));
    }
    c.truncate(order + 1);
    c
}

/// `c~_0..=c~_order`, computed directly and through the scaling
/// `c~_m = alpha^m c_m(c~_1 / alpha)`; the two must agree to 1e-12 relative
/// to the size of the recurrence terms.
pub fn tilde_coeffs(params: &SolutionParams, order: usize) -> Result<Vec<Complex64>, NumError> {
    params.validate()?;
    let direct = recurrence_coeffs(params.c1t, params.big_c(), order);
    let alpha = params.alpha();
    let base = recurrence_coeffs(params.c1t / alpha, Complex64::new(4.0, 0.0), order);
    let size = recurrence_majorant(params.c1t.norm(), params.big_c().norm(), order);
    let mut pow = Complex64::new(1.0, 0.0);
    for (m, (d, b)) in direct.iter().zip(&base).enumerate() {
        let s = b * pow;
        if (d - s).norm() > 1e-12 * size[m] {
            return Err(NumError::RouteMismatch { m, direct: *d, scaled: s });
        }
        pow *= alpha;
    }
    Ok(direct)
}

/// `u(tau) = -(b/2a) tau (1 + sum c~_m tau^m)` to `O(tau^(order+1))`.
pub fn series_u(params: &SolutionParams, order: usize) -> Result<ComplexSeries, NumError> {
    if order < 2 {
        return Err(NumError::InvalidParams(format!("series order must be at least 2, got {order}")));
    }
    let c = tilde_coeffs(params, order)?;
    let lead = -params.b / (2.0 * params.a());
    Ok(ComplexSeries::new(c.iter().map(|x| x * lead).collect()).shift_up(1))
}

/// `tau u u'' - tau u'^2 + u u' - u (-8 eps u^2 + 2 a b) - tau b^2`, the
/// equation multiplied through by `tau u`.
pub fn ode_residual_series(u: &ComplexSeries, a: Complex64, eps: f64, b: f64) -> ComplexSeries {
    let du = u.derivative();
    let ddu = du.derivative();
    let n = ddu.len();
    let trunc = |s: ComplexSeries| ComplexSeries::new(s.coeffs.into_iter().take(n).collect());
    let u = trunc(u.clone());
    let du = trunc(du);
    let tau_b2 = ComplexSeries::constant(Complex64::new(b * b, 0.0), n).shift_up(1);
    let bracket = u.mul(&u).scale(Complex64::new(-8.0 * eps, 0.0)).add(&ComplexSeries::constant(2.0 * a * b, n));
    u.mul(&ddu)
        .shift_up(1)
        .sub(&du.mul(&du).shift_up(1))
        .add(&u.mul(&du))
        .sub(&u.mul(&bracket))
        .sub(&tau_b2)
}

/// The transformed solution `eps b tau (i u' + b) / (8 u^2)`.
pub fn backlund_series(params: &SolutionParams, order: usize) -> Result<ComplexSeries, NumError> {
    let u = series_u(params, order)?;
    let num = u.derivative().scale(I).add(&ComplexSeries::constant(Complex64::new(params.b, 0.0), order + 1));
    let num = num.shift_up(1).scale(Complex64::new(params.eps * params.b / 8.0, 0.0));
    let den = u.mul(&u);
    num.shift_down(2, 1e-13)?.div(&den.shift_down(2, 1e-13)?)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BacklundCheck {
    /// Largest mismatch against the closed-form first three coefficients.
    pub printed: f64,
    /// Largest coefficient of the a = -i/2 equation residual, relative to
    /// the size of its terms.
    pub equation: f64,
}

/// Compares the transformed series with its printed expansion through
/// `tau^2` and checks that it solves the equation with `a = -i/2`.
pub fn backlund_series_check(params: &SolutionParams, order: usize) -> Result<BacklundCheck, NumError> {
    if params.kappa != 1 {
        return Err(NumError::InvalidParams("the Bäcklund transformation is applied to kappa = +1".into()));
    }
    if order < 3 {
        return Err(NumError::InvalidParams(format!("order must be at least 3, got {order}")));
    }
    let uh = backlund_series(params, order)?;
    let c = tilde_coeffs(params, order)?;
    let (c1, c2, c3) = (c[1], c[2], c[3]);
    let eps = params.eps;
    let expect = [
        eps * c1 / 4.0,
        eps * (3.0 * c2 / 8.0 - c1 * c1 / 2.0),
        eps * (c3 / 2.0 + 3.0 * c1 * c1 * c1 / 4.0 - 5.0 * c1 * c2 / 4.0),
    ];
    let printed = (0..3).map(|k| (uh.coeff(k) - expect[k]).norm()).fold(0.0, f64::max);
    let ahat = Complex64::new(0.0, -0.5);
    let res = ode_residual_series(&uh, ahat, eps, params.b);
    let size = term_scale(&uh, ahat, eps, params.b);
    let valid = res.len().saturating_sub(1);
    let equation =
        (0..valid).map(|k| res.coeff(k).norm() / size.get(k).copied().unwrap_or(1.0).max(1e-300)).fold(0.0, f64::max);
    Ok(BacklundCheck { printed, equation })
}

/// Per-coefficient size of the individual terms of the residual, used to
/// make residuals relative.
fn term_scale(u: &ComplexSeries, a: Complex64, eps: f64, b: f64) -> Vec<f64> {
    let abs = |s: &ComplexSeries| ComplexSeries::new(s.coeffs().iter().map(|c| Complex64::new(c.norm(), 0.0)).collect());
    let re = |x: f64| Complex64::new(x, 0.0);
    let (u, du) = (abs(u), abs(&u.derivative()));
    let ddu = abs(&u.derivative().derivative());
    let n = ddu.len();
    let trunc = |s: ComplexSeries| ComplexSeries::new(s.coeffs.into_iter().take(n).collect());
    let (u, du) = (trunc(u), trunc(du));
    let bracket = u.mul(&u).scale(re(8.0 * eps.abs())).add(&ComplexSeries::constant(re(2.0 * a.norm() * b.abs()), n));
    let total = u
        .mul(&ddu)
        .shift_up(1)
        .add(&du.mul(&du).shift_up(1))
        .add(&u.mul(&du))
        .add(&u.mul(&bracket))
        .add(&ComplexSeries::constant(re(b * b), n).shift_up(1));
    total.coeffs().iter().map(|c| c.re).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::compute_cm;
    use crate::coeffs::CoeffCache;
    use crate::par::ExecMode;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn params(kappa: i8, eps: f64, b: f64, c1t: Complex64) -> SolutionParams {
        SolutionParams { kappa, eps, b, c1t }
    }

    #[test]
    fn second_and_fourth_coefficients() {
        for (kappa, eps, b) in [(1, 1.0, 0.5), (-1, 1.0, 0.7), (1, -1.0, -2.0)] {
            let p = params(kappa, eps, b, c(0.3, -1.1));
            let t = tilde_coeffs(&p, 6).unwrap();
            let big = p.big_c();
            assert!((t[2] - big / 3.0).norm() < 1e-14);
            assert!((t[4] - big / 3.0 * (t[1] * t[1] / 3.0 + big / 5.0)).norm() < 1e-13);
        }
        let p = params(1, 1.0, 0.5, c(0.0, 0.0));
        assert!((p.alpha() - Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4)).norm() < 1e-15);
        assert!((tilde_coeffs(&p, 2).unwrap()[2] - c(0.0, -4.0 / 3.0)).norm() < 1e-15);
    }


    #[test]
    fn series_solves_the_equation() {
        for (kappa, eps, b, c1) in [(1, 1.0, 0.5, c(1.0, -1.0)), (-1, 1.0, 0.5, c(-3.0, -2.0)), (1, -1.0, -0.8, c(0.2, 0.5))] {
            let p = params(kappa, eps, b, c1);
            let u = series_u(&p, 30).unwrap();
            let res = ode_residual_series(&u, p.a(), eps, b);
            let size = term_scale(&u, p.a(), eps, b);
            for (k, bound) in size.iter().enumerate().take(res.len() - 1) {
                assert!(res.coeff(k).norm() <= 1e-12 * bound, "k={k} {}", res.coeff(k));
            }
        }
    }

    #[test]
    fn odd_solution_when_c1_vanishes() {
        for kappa in [1, -1] {
            let t = tilde_coeffs(&params(kappa, 1.0, 0.5, c(0.0, 0.0)), 40).unwrap();
            for m in (1..=40).step_by(2) {
                assert_eq!(t[m], c(0.0, 0.0), "m={m}");
            }
        }
    }

    #[test]
    fn backlund_constant_term() {
        let p = params(1, 1.0, 0.5, c(1.0, -1.0));
        let uh = backlund_series(&p, 10).unwrap();
        assert!((uh.coeff(0) - c(0.25, -0.25)).norm() < 1e-15);
        let chk = backlund_series_check(&p, 20).unwrap();
        assert!(chk.printed < 1e-12 && chk.equation < 1e-11, "{chk:?}");
        let p0 = params(1, 1.0, 0.5, c(0.0, 0.0));
        let uh = backlund_series(&p0, 10).unwrap();
        assert_eq!(uh.coeff(0), c(0.0, 0.0));
        let t = tilde_coeffs(&p0, 3).unwrap();
        assert!((uh.coeff(1) - 3.0 * t[2] / 8.0).norm() < 1e-15);
        assert!(backlund_series_check(&params(-1, 1.0, 0.5, c(1.0, 0.0)), 10).is_err());
    }

    #[test]
    fn series_arithmetic() {
        let a = ComplexSeries::new(vec![c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let q = ComplexSeries::constant(c(1.0, 0.0), 4).div(&a).unwrap();
        assert!(q.coeffs().iter().all(|x| *x == c(1.0, 0.0)));
        assert!(ComplexSeries::constant(c(1.0, 0.0), 3).div(&a.shift_up(1)).is_err());
        assert!(a.shift_down(1, 1e-15).is_err());
        assert_eq!(a.shift_up(2).shift_down(2, 0.0).unwrap(), a);
        assert!((a.eval(0.5) - c(0.5, 0.0)).norm() < 1e-16);
    }

    fn exact_cache() -> &'static CoeffCache {
        static CACHE: std::sync::OnceLock<CoeffCache> = std::sync::OnceLock::new();
        CACHE.get_or_init(|| compute_cm(30, CoeffCache::new(), ExecMode::Sequential).unwrap())
    }

    proptest! {
        #[test]
        fn exact_polynomials_evaluate_to_the_numeric_recurrence(re in -2.0f64..2.0, im in -2.0f64..2.0) {
            let x = c(re, im);
            let f = recurrence_coeffs(x, c(4.0, 0.0), 30);
            let size = recurrence_majorant(x.norm(), 4.0, 30);
            for (m, fm) in f.iter().enumerate() {
                let exact = exact_cache().poly(m).unwrap().eval_complex(x);
                prop_assert!((fm - exact).norm() <= 1e-12 * size[m].max(exact.norm()), "m={} {} {}", m, fm, exact);
            }
            let (sf, se): (Complex64, Complex64) = (0..=30).fold((c(0.0, 0.0), c(0.0, 0.0)), |(a, b), m| {
                let t = 0.05f64.powi(m as i32);
                (a + f[m] * t, b + exact_cache().poly(m).unwrap().eval_complex(x) * t)
            });
            prop_assert!((sf - se).norm() <= 1e-12 * se.norm());
        }

        #[test]
        fn backlund_identity_for_random_parameters(
            re in -2.0f64..2.0, im in -2.0f64..2.0, b in 0.2f64..1.5, neg in any::<bool>()
        ) {
            let eps = if neg { -1.0 } else { 1.0 };
            let p = params(1, eps, eps * b, c(re, im));
            let chk = backlund_series_check(&p, 16).unwrap();
            prop_assert!(chk.printed < 1e-11, "{:?}", chk);
            prop_assert!(chk.equation < 1e-10, "{:?}", chk);
        }

        #[test]
        fn both_coefficient_routes_agree(
            re in -3.0f64..3.0, im in -3.0f64..3.0, b in 0.1f64..3.0, neg in any::<bool>(), plus in any::<bool>()
        ) {
            let eps = if neg { -1.0 } else { 1.0 };
            let p = params(if plus { 1 } else { -1 }, eps, eps * b, c(re, im));
            prop_assert!(tilde_coeffs(&p, 60).is_ok());
        }
    }
}
