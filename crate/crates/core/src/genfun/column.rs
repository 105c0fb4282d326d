use std::io::{self, Write};

use num_traits::Zero;

use super::{a_series, GenfunError};
use crate::coeffs::{coeff_table, CoeffCache};
use crate::exact::{format_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnRow {
    pub m: usize,
    /// `p_{m,j}` read from the recurrence cache (zero when `r_m < j`).
    pub recurrence: Rational,
    /// Coefficient of `z^m` in the matching generating function.
    pub closed: Rational,
}

impl ColumnRow {
    pub fn matches(&self) -> bool {
        self.recurrence == self.closed
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnReport {
    pub j: usize,
    pub rows: Vec<ColumnRow>,
    /// Nonzero generating-function coefficients at exponents outside the
    /// residue class the function is responsible for, as `(n, exponent)`.
    pub stray_terms: Vec<(usize, i64)>,
}

impl ColumnReport {
    pub fn mismatches(&self) -> Vec<&ColumnRow> {
        self.rows.iter().filter(|r| !r.matches()).collect()
    }

    pub fn passed(&self) -> bool {
        self.stray_terms.is_empty() && self.rows.iter().all(ColumnRow::matches)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "m,p_mj_recurrence,p_mj_closed,match")?;
        for r in &self.rows {
            writeln!(out, "{},{},{},{}", r.m, format_rational(&r.recurrence), format_rational(&r.closed), r.matches())?;
        }
        Ok(())
    }
}

/// Generating function index responsible for `p_{m,j}`.
fn function_for(m: usize, j: usize) -> usize {
    3 * j
        + match m % 3 {
            1 => 0,
            0 => 1,
            _ => 2,
        }
}

/// Compares column `j` (`0` or `1`) of the structured coefficients with the
/// Taylor coefficients of the matching generating functions, for every
/// `m < order` held by the cache.
pub fn check_column(j: usize, cache: &CoeffCache, order: usize) -> Result<ColumnReport, GenfunError> {
    if j > 1 {
        return Err(GenfunError::InvalidArgument(format!("column {j} has no transcribed generating functions")));
    }
    let series: Vec<_> = (0..3).map(|i| a_series(3 * j + i, order)).collect::<Result<_, _>>()?;
    let upper = cache.max_m().min(order.saturating_sub(1));
    let mut rows = Vec::with_capacity(upper + 1);
    for m in 0..=upper {
        let table = coeff_table(m, cache)?;
        let recurrence = table.p(j).cloned().unwrap_or_else(Rational::zero);
        let closed = series[function_for(m, j) - 3 * j].coeff(m as i64).unwrap_or_else(Rational::zero);
        rows.push(ColumnRow { m, recurrence, closed });
    }
    let stray_terms = series
        .iter()
        .enumerate()
        .flat_map(|(i, s)| {
            let n = 3 * j + i;
            s.terms()
                .filter(move |(k, _)| function_for(*k as usize, j) != n)
                .map(move |(k, _)| (n, k))
        })
        .collect();
    Ok(ColumnReport { j, rows, stray_terms })
}
