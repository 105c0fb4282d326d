use std::time::{Duration, Instant};

use serde::Serialize;

use super::scaled::ScaledPoly;
use super::CoeffError;
use crate::exact::{Rational, RationalPoly};
use crate::par::{self, ExecMode};

/// Per-step profiling record emitted while the cache grows.
#[derive(Clone, Debug, Serialize)]
pub struct StepReport {
    pub m: usize,
    pub elapsed: Duration,
    /// Size of the largest integer stored for `c_m`, in decimal digits.
    pub max_digits: usize,
    /// Number of polynomial products evaluated in this step.
    pub products: usize,
}

/// Append-only store of the coefficient polynomials `c_0 .. c_M`.
///
/// `c_0 = 1` and `c_1` is the formal parameter; every later entry is
/// produced by the recurrence. The partial squares
/// `d_p = sum_{q=0}^{p} c_q c_{p-q}` are kept alongside so each new step
/// costs `O(m)` polynomial products.
#[derive(Clone, Debug)]
pub struct CoeffCache {
    polys: Vec<ScaledPoly>,
    squares: Vec<ScaledPoly>,
    timings: Vec<StepReport>,
}

impl Default for CoeffCache {
    fn default() -> Self {
        Self::new()
    }
}

impl CoeffCache {
    /// Cache holding only `c_0 = 1` and `c_1 = c1`.
    pub fn new() -> Self {
        Self {
            polys: vec![
                ScaledPoly::from_poly(&RationalPoly::one()),
                ScaledPoly::from_poly(&RationalPoly::x()),
            ],
            squares: Vec::new(),
            timings: Vec::new(),
        }
    }

    /// Rebuilds a cache from stored polynomials (`c_0 ..= c_M`). The caller
    /// is responsible for validating the entries.
    pub fn from_polys(polys: Vec<RationalPoly>) -> Result<Self, CoeffError> {
        if polys.len() < 2 || polys[0] != RationalPoly::one() || polys[1] != RationalPoly::x() {
            return Err(CoeffError::Corrupt {
                m: if polys.first() == Some(&RationalPoly::one()) { 1 } else { 0 },
                reason: "c_0 must be 1 and c_1 the formal parameter".into(),
            });
        }
        Ok(Self {
            polys: polys.iter().map(ScaledPoly::from_poly).collect(),
            squares: Vec::new(),
            timings: Vec::new(),
        })
    }

    pub fn max_m(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn poly(&self, m: usize) -> Result<RationalPoly, CoeffError> {
        self.polys
            .get(m)
            .map(ScaledPoly::to_poly)
            .ok_or(CoeffError::NotComputed { m, max: self.max_m() })
    }

    /// Coefficient of `c1^k` in `c_m`.
    pub fn coeff(&self, m: usize, k: usize) -> Result<Rational, CoeffError> {
        self.polys
            .get(m)
            .map(|p| p.coeff(k))
            .ok_or(CoeffError::NotComputed { m, max: self.max_m() })
    }

    pub fn degree(&self, m: usize) -> Result<Option<usize>, CoeffError> {
        Ok(self.poly(m)?.degree())
    }

    pub fn timings(&self) -> &[StepReport] {
        &self.timings
    }

    pub(crate) fn scaled(&self, m: usize) -> &ScaledPoly {
        &self.polys[m]
    }

    /// Makes `d_0 ..= d_upto` available; missing entries are independent of
    /// each other and computed in one parallel sweep.
    fn ensure_squares(&mut self, upto: usize, mode: ExecMode) {
        let have = self.squares.len();
        if upto < have {
            return;
        }
        let polys = &self.polys;
        let fresh = par::map_collect(mode, upto + 1 - have, |i| square_coeff(polys, have + i, mode));
        self.squares.extend(fresh);
    }

    /// Computes the next polynomial `c_m`, `m = max_m() + 1`.
    fn step(&mut self, mode: ExecMode) -> StepReport {
        let start = Instant::now();
        let m = self.polys.len();
        self.ensure_squares(m - 2, mode);
        let (value, products) = recurrence_rhs(&self.polys, &self.squares, m, mode);
        let mm1 = (m * m - 1) as i64;
        let cm = value.div_int(mm1).reduced();
        let report = StepReport { m, elapsed: start.elapsed(), max_digits: cm.max_digits(), products };
        self.polys.push(cm);
        report
    }

    /// Extends the cache to `max_m`, calling `on_step` after every new entry.
    /// Entries already present are kept; extension resumes from `max_m() + 1`.
    pub fn extend_with<F>(&mut self, max_m: usize, mode: ExecMode, mut on_step: F)
    where
        F: FnMut(&CoeffCache, &StepReport),
    {
        while self.max_m() < max_m {
            let report = self.step(mode);
            on_step(self, &report);
            self.timings.push(report);
        }
    }

    pub fn extend_to(&mut self, max_m: usize, mode: ExecMode) {
        self.extend_with(max_m, mode, |_, _| {});
    }

    /// Recomputes `c_m` from the stored `c_0 .. c_{m-1}` and compares it with
    /// the stored entry.
    pub fn recompute_matches(&self, m: usize, mode: ExecMode) -> Result<bool, CoeffError> {
        if m > self.max_m() {
            return Err(CoeffError::NotComputed { m, max: self.max_m() });
        }
        if m < 2 {
            return Ok(true);
        }
        let squares: Vec<ScaledPoly> =
            par::map_collect(mode, m - 1, |p| square_coeff(&self.polys, p, mode));
        let (value, _) = recurrence_rhs(&self.polys, &squares, m, mode);
        let fresh = value.div_int((m * m - 1) as i64).reduced();
        Ok(fresh == self.polys[m])
    }
}

/// `d_p = sum_{q=0}^{p} c_q c_{p-q}`, using the symmetry of the sum.
fn square_coeff(polys: &[ScaledPoly], p: usize, mode: ExecMode) -> ScaledPoly {
    let half = p.div_ceil(2);
    let paired = par::map_reduce(
        mode,
        half,
        |q| polys[q].mul(&polys[p - q]),
        ScaledPoly::zero,
        ScaledPoly::add,
    )
    .scale_int(2);
    let total = if p.is_multiple_of(2) {
        paired.add(polys[p / 2].mul(&polys[p / 2]))
    } else {
        paired
    };
    total.reduced()
}

/// Right-hand side of the recurrence for index `m`:
/// `-sum_{p<=(m-2)/2} (m-2p-2)^2 c_{p+1} c_{m-p-1} + 4 sum_{p=0}^{m-2} c_{m-p-2} d_p`.
fn recurrence_rhs(
    polys: &[ScaledPoly],
    squares: &[ScaledPoly],
    m: usize,
    mode: ExecMode,
) -> (ScaledPoly, usize) {
    let n_first = (m - 2) / 2 + 1;
    let n_second = m - 1;
    let value = par::map_reduce(
        mode,
        n_first + n_second,
        |i| {
            if i < n_first {
                let p = i;
                let w = (m - 2 * p - 2) as i64;
                if w == 0 {
                    return ScaledPoly::zero();
                }
                polys[p + 1].mul(&polys[m - p - 1]).scale_int(-w * w)
            } else {
                let p = i - n_first;
                polys[m - p - 2].mul(&squares[p]).scale_int(4)
            }
        },
        ScaledPoly::zero,
        ScaledPoly::add,
    );
    (value, n_first + n_second)
}

/// Extends `cache` to `max_m` (the `compute_cm` operation).
pub fn compute_cm(max_m: usize, mut cache: CoeffCache, mode: ExecMode) -> Result<CoeffCache, CoeffError> {
    if max_m < 2 {
        return Err(CoeffError::InvalidArgument(format!("max_m must be at least 2, got {max_m}")));
    }
    cache.extend_to(max_m, mode);
    Ok(cache)
}
