use super::formulas::z_odd_formula;
use super::FenceError;

/// `(S_n, S̃_n)`: the area of the `n`-th part of the odd fence and the same
/// area without its unit-height base, `S̃_n = S_n - 2^n`.
pub fn fence_area(n: u32) -> Result<(u64, u64), FenceError> {
    let s = match n {
        0 => return Err(FenceError::InvalidIndex("fence parts are numbered from 1".into())),
        1 => 5,
        2 => 6,
        _ => (2 * n as u64 + 3) << (n - 2),
    };
    Ok((s, s - (1u64 << n)))
}

/// Area under the odd fence on the part `[2^n + 1, 2^(n+1) + 1]` (`[1, 5]`
/// for `n = 1`), from the heights themselves by the trapezoid rule.
pub fn fence_area_from_heights(n: u32) -> Result<u64, FenceError> {
    if n == 0 {
        return Err(FenceError::InvalidIndex("fence parts are numbered from 1".into()));
    }
    let (lo, hi) = if n == 1 { (1, 5) } else { ((1u64 << n) + 1, (1u64 << (n + 1)) + 1) };
    let height = |x: u64| if x == 1 { Ok(0) } else { z_odd_formula(x).map(|p| p.z) };
    let mut area = 0;
    let mut x = lo;
    while x < hi {
        // Width 2, so each trapezoid contributes the sum of its two sides.
        area += height(x)? + height(x + 2)?;
        x += 2;
    }
    Ok(area)
}

/// `S_{n+1} = 2^n + 2 S_n`, `n >= 3`.
pub fn area_recurrence_holds(n: u32) -> Result<bool, FenceError> {
    let (s_n, _) = fence_area(n)?;
    let (s_next, _) = fence_area(n + 1)?;
    Ok(s_next == (1u64 << n) + 2 * s_n)
}

/// `S_{n+1} = 2^(n+1) - 1 + sum_{k<=n} S_k`, `n >= 2`.
pub fn area_sum_holds(n: u32) -> Result<bool, FenceError> {
    let total: u64 = (1..=n).map(|k| fence_area(k).map(|a| a.0)).sum::<Result<_, _>>()?;
    Ok(fence_area(n + 1)?.0 == (1u64 << (n + 1)) - 1 + total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_areas() {
        let s: Vec<u64> = (1..=7).map(|n| fence_area(n).unwrap().0).collect();
        assert_eq!(s, vec![5, 6, 18, 44, 104, 240, 544]);
        assert_eq!(fence_area(3).unwrap(), (18, 10));
        assert_eq!(fence_area(4).unwrap(), (44, 28));
        assert!(fence_area(0).is_err());
    }

    #[test]
    fn relations_and_geometry() {
        for n in 3..=20 {
            assert!(area_recurrence_holds(n).unwrap());
            assert_eq!(fence_area(n).unwrap().1, (2 * n as u64 - 1) << (n - 2));
        }
        for n in 2..=20 {
            assert!(area_sum_holds(n).unwrap(), "n = {n}");
        }
        for n in 1..=20 {
            assert_eq!(fence_area_from_heights(n).unwrap(), fence_area(n).unwrap().0, "n = {n}");
        }
    }
}
