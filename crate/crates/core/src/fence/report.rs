use std::ops::RangeInclusive;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::formulas::z_formula;
use super::FenceError;
use crate::coeffs::{coeff_table, CoeffCache};
use crate::exact::{odd_part, val2};
use crate::par::{self, ExecMode};

/// 2-adic valuation of the content of `c_m`, together with whether the rest
/// of the content is free of odd primes in the numerator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Content {
    pub z: i64,
    pub odd_numerator_is_one: bool,
}

pub fn content_val2(m: usize, cache: &CoeffCache) -> Result<Content, FenceError> {
    if m < 2 {
        return Err(FenceError::InvalidIndex(format!("content is tracked from m = 2 (got {m})")));
    }
    let table = coeff_table(m, cache)?;
    let mut z: Option<i64> = None;
    let mut g = BigInt::zero();
    for (_, p) in table.entries.iter().filter(|(_, p)| !p.is_zero()) {
        let v = val2(p).expect("nonzero");
        z = Some(z.map_or(v, |z| z.min(v)));
        g = g.gcd(p.numer());
    }
    let z = z.ok_or_else(|| FenceError::Internal(format!("c_{m} is the zero polynomial")))?;
    Ok(Content { z, odd_numerator_is_one: odd_part(&g).is_one() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FenceEntry {
    pub m: usize,
    pub computed: i64,
    pub predicted: u64,
    pub rule: String,
    /// Whether the content has no odd prime in its numerator.
    pub pure_power_of_two: bool,
    #[serde(rename = "match")]
    pub matched: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FenceReport {
    pub range: [usize; 2],
    pub entries: Vec<FenceEntry>,
    pub mismatches: usize,
    pub elapsed_seconds: f64,
}

impl FenceReport {
    pub fn all_match(&self) -> bool {
        self.mismatches == 0
    }

    pub fn mismatched(&self) -> impl Iterator<Item = &FenceEntry> {
        self.entries.iter().filter(|e| !e.matched)
    }

    /// Indices whose content carries an odd prime in the numerator.
    pub fn impure_contents(&self) -> Vec<usize> {
        self.entries.iter().filter(|e| !e.pure_power_of_two).map(|e| e.m).collect()
    }
}

/// Compares the content of every `c_m` in `range` with the fence formulas.
/// Disagreements are recorded in the report, never raised.
pub fn verify_fence(range: RangeInclusive<usize>, cache: &CoeffCache, mode: ExecMode) -> Result<FenceReport, FenceError> {
    let (lo, hi) = (*range.start(), *range.end());
    if lo < 2 || hi < lo {
        return Err(FenceError::InvalidIndex(format!("fence range must satisfy 2 <= start <= end, got {lo}..={hi}")));
    }
    if hi > cache.max_m() {
        return Err(FenceError::Coeffs(crate::coeffs::CoeffError::NotComputed { m: hi, max: cache.max_m() }));
    }
    let start = Instant::now();
    let entries = par::map_collect(mode, hi - lo + 1, |i| {
        let m = lo + i;
        let content = content_val2(m, cache)?;
        let pred = z_formula(m as u64)?;
        let matched = content.z == pred.z as i64;
        Ok(FenceEntry {
            m,
            computed: content.z,
            predicted: pred.z,
            rule: pred.rule.to_string(),
            pure_power_of_two: content.odd_numerator_is_one,
            matched,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>, FenceError>>()?;
    let mismatches = entries.iter().filter(|e| !e.matched).count();
    Ok(FenceReport { range: [lo, hi], entries, mismatches, elapsed_seconds: start.elapsed().as_secs_f64() })
}
