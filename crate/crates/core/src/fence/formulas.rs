use std::fmt;

use serde::Serialize;

use super::sequences::{l_tower, m_tower, r_tower, s2};
use super::FenceError;

/// Which closed formula produced a prediction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FenceRule {
    /// `s_2(k) + q(p)` with `k = n / 8`, `p = n mod 8`.
    Odd { k: u64, p: u64 },
    /// `z_2 = z_4 = 2`, `z_6 = 8`.
    EvenOffset,
    /// `z_{base+24k} = value + 8k`.
    Regular { base: u64, k: u64 },
    /// `z_{base+48k}` or `z_{base+24(2k+1)}`; `tower` is the `l`, `r` or
    /// `m` value used, if any.
    Singular { base: u64, k: u64, odd_block: bool, tower: Option<u64> },
}

impl fmt::Display for FenceRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FenceRule::Odd { k, p } => write!(f, "odd(k={k},p={p})"),
            FenceRule::EvenOffset => write!(f, "even-offset"),
            FenceRule::Regular { base, k } => write!(f, "regular({base}+24k,k={k})"),
            FenceRule::Singular { base, k, odd_block: false, tower } => {
                let name = match base {
                    14 => "l",
                    30 => "r",
                    _ => "",
                };
                match tower {
                    Some(t) => write!(f, "singular({base}+48k,k={k},{name}={t})"),
                    None => write!(f, "singular({base}+48k,k={k})"),
                }
            }
            FenceRule::Singular { base, k, odd_block: true, tower } => match tower {
                Some(t) => write!(f, "singular({base}+24(2k+1),k={k},m={t})"),
                None => write!(f, "singular({base}+24(2k+1),k={k})"),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FencePrediction {
    pub m: u64,
    pub z: u64,
    pub rule: FenceRule,
}

fn q(p: u64) -> u64 {
    match p {
        1 => 0,
        3 => 2,
        5 => 1,
        7 => 2,
        _ => unreachable!("odd residue expected"),
    }
}

pub fn z_odd_formula(n: u64) -> Result<FencePrediction, FenceError> {
    if n.is_multiple_of(2) || n < 3 {
        return Err(FenceError::InvalidIndex(format!("odd formula needs odd n >= 3, got {n}")));
    }
    let (k, p) = (n / 8, n % 8);
    Ok(FencePrediction { m: n, z: s2(k) + q(p), rule: FenceRule::Odd { k, p } })
}

const REGULAR: [(u64, u64); 9] =
    [(8, 4), (10, 5), (12, 7), (16, 6), (18, 9), (20, 8), (24, 10), (26, 12), (28, 10)];

pub fn z_even_formula(n: u64) -> Result<FencePrediction, FenceError> {
    if n % 2 == 1 || n < 2 {
        return Err(FenceError::InvalidIndex(format!("even formula needs even n >= 2, got {n}")));
    }
    if n < 8 {
        let z = if n == 6 { 8 } else { 2 };
        return Ok(FencePrediction { m: n, z, rule: FenceRule::EvenOffset });
    }
    let r = n % 24;
    let base = if r < 8 { r + 24 } else { r };
    let big_k = (n - base) / 24;
    if let Some(&(_, value)) = REGULAR.iter().find(|(b, _)| *b == base) {
        return Ok(FencePrediction { m: n, z: value + 8 * big_k, rule: FenceRule::Regular { base, k: big_k } });
    }
    let (k, odd_block) = (big_k / 2, big_k % 2 == 1);
    let (z, tower) = match (base, odd_block) {
        (14, false) => {
            let l = l_tower(k + 1);
            (7 + l + 16 * k, Some(l))
        }
        (14, true) => (18 + 16 * k, None),
        (30, false) => {
            let r = r_tower(k + 1);
            (10 + r + 16 * k, Some(r))
        }
        (30, true) => (23 + 16 * k, None),
        (22, false) => (10 + 16 * k, None),
        (22, true) => {
            let m = m_tower(k + 1);
            (19 + m + 16 * k, Some(m))
        }
        _ => return Err(FenceError::Internal(format!("no even family covers n = {n}"))),
    };
    Ok(FencePrediction { m: n, z, rule: FenceRule::Singular { base, k, odd_block, tower } })
}

/// Dispatches on parity; `m >= 2`.
pub fn z_formula(m: u64) -> Result<FencePrediction, FenceError> {
    if m % 2 == 1 {
        z_odd_formula(m)
    } else {
        z_even_formula(m)
    }
}
