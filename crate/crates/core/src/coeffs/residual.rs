//! Independent evaluations of the recurrence used to validate the engine.
//!
//! Everything here works on [`RationalPoly`] with the sums written out as
//! printed (no symmetry folding, no cached squares), so it shares no code
//! path with the production step beyond reading the stored polynomials.

use num_traits::Zero;

use super::{CoeffCache, CoeffError};
use crate::exact::{rat, RationalPoly};

fn get(cache: &CoeffCache, m: usize) -> Result<RationalPoly, CoeffError> {
    cache.poly(m)
}

/// `sum_{p=0}^{m-2} (p+2)(m-2(p+1)) c_{p+1} c_{m-p-1}`.
pub fn first_sum_direct(m: usize, cache: &CoeffCache) -> Result<RationalPoly, CoeffError> {
    let mut acc = RationalPoly::zero();
    for p in 0..=m - 2 {
        let w = (p as i64 + 2) * (m as i64 - 2 * (p as i64 + 1));
        if w != 0 {
            let t = &get(cache, p + 1)? * &get(cache, m - p - 1)?;
            acc = &acc + &t.scale(&rat(w, 1));
        }
    }
    Ok(acc)
}

/// The same sum after pairing `p` with `m-2-p`:
/// `-sum_{p=0}^{floor((m-2)/2)} (m-2p-2)^2 c_{p+1} c_{m-p-1}`.
pub fn first_sum_converted(m: usize, cache: &CoeffCache) -> Result<RationalPoly, CoeffError> {
    let mut acc = RationalPoly::zero();
    for p in 0..=(m - 2) / 2 {
        let w = m as i64 - 2 * p as i64 - 2;
        let t = &get(cache, p + 1)? * &get(cache, m - p - 1)?;
        acc = &acc - &t.scale(&rat(w * w, 1));
    }
    Ok(acc)
}

/// `4 sum_{p=0}^{m-2} sum_{q=0}^{p} c_{m-p-2} c_q c_{p-q}`.
pub fn double_sum(m: usize, cache: &CoeffCache) -> Result<RationalPoly, CoeffError> {
    let mut acc = RationalPoly::zero();
    for p in 0..=m - 2 {
        let outer = get(cache, m - p - 2)?;
        for q in 0..=p {
            let t = &(&outer * &get(cache, q)?) * &get(cache, p - q)?;
            acc = &acc + &t;
        }
    }
    Ok(acc.scale(&rat(4, 1)))
}

/// `(m^2-1) c_m - (first sum + double sum)`; the zero polynomial when the
/// stored `c_m` satisfies the recurrence.
pub fn recurrence_residual(m: usize, cache: &CoeffCache) -> Result<RationalPoly, CoeffError> {
    if m < 2 {
        return Err(CoeffError::InvalidArgument("the recurrence starts at m = 2".into()));
    }
    let lhs = get(cache, m)?.scale(&rat((m * m - 1) as i64, 1));
    let rhs = &first_sum_direct(m, cache)? + &double_sum(m, cache)?;
    Ok(&lhs - &rhs)
}

/// Checks that both forms of the first sum agree exactly.
pub fn first_sum_forms_agree(m: usize, cache: &CoeffCache) -> Result<bool, CoeffError> {
    let d = &first_sum_direct(m, cache)? - &first_sum_converted(m, cache)?;
    Ok(d.coeffs().iter().all(|c| c.is_zero()))
}
