//! Fast probabilistic validation of a whole cache: every polynomial is
//! evaluated at fixed points modulo the Mersenne prime `2^61 - 1` and the
//! recurrence is checked on those residues. A tampered coefficient survives
//! only if the tampering polynomial vanishes at every sample point.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{CoeffCache, CoeffError};

const P: u64 = (1 << 61) - 1;

/// Sample points for `c1`; fixed so reports are reproducible.
const POINTS: [u64; 2] = [0x0f3a_91c2_5d7e_4b61 % P, 0x1b84_e2d9_7a05_c3f7 % P];

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn addmod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

fn submod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn reduce(n: &BigInt) -> u64 {
    let p = BigInt::from(P);
    let mut r = n % &p;
    if r < BigInt::zero() {
        r += &p;
    }
    r.to_u64().expect("residue fits in u64")
}

fn from_i64(k: i64) -> u64 {
    if k >= 0 {
        (k as u64) % P
    } else {
        P - ((-k) as u64 % P)
    }
}

/// Residues `c_m(x) mod P` for `m = 0..=max_m`.
fn evaluate(cache: &CoeffCache, x: u64) -> Result<Vec<u64>, CoeffError> {
    (0..=cache.max_m())
        .map(|m| {
            let sp = cache.scaled(m);
            let den = reduce(&sp.den);
            if den == 0 {
                return Err(CoeffError::Corrupt { m, reason: "denominator vanishes modulo the check prime".into() });
            }
            let inv = powmod(den, P - 2);
            let mut acc = 0u64;
            for c in sp.num.iter().rev() {
                acc = addmod(mulmod(acc, x), reduce(c));
            }
            Ok(mulmod(acc, inv))
        })
        .collect()
}

/// Returns the first index whose stored polynomial violates the recurrence.
pub fn first_violation(cache: &CoeffCache) -> Result<Option<usize>, CoeffError> {
    let mut worst: Option<usize> = None;
    for &x in &POINTS {
        let c = evaluate(cache, x)?;
        if c[0] != 1 {
            return Ok(Some(0));
        }
        if c[1] != x {
            return Ok(Some(1));
        }
        let mut squares: Vec<u64> = Vec::with_capacity(c.len());
        for m in 2..c.len() {
            let p = m - 2;
            let d = (0..=p).fold(0, |acc, q| addmod(acc, mulmod(c[q], c[p - q])));
            squares.push(d);
            let mut first = 0u64;
            for p in 0..=m - 2 {
                let w = (p as i64 + 2) * (m as i64 - 2 * (p as i64 + 1));
                first = addmod(first, mulmod(from_i64(w), mulmod(c[p + 1], c[m - p - 1])));
            }
            let mut second = 0u64;
            for (p, d) in squares.iter().enumerate().take(m - 1) {
                second = addmod(second, mulmod(c[m - p - 2], *d));
            }
            let rhs = addmod(first, mulmod(4, second));
            let lhs = mulmod(from_i64((m * m - 1) as i64), c[m]);
            if submod(lhs, rhs) != 0 {
                worst = Some(worst.map_or(m, |w| w.min(m)));
                break;
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::compute_cm;
    use crate::exact::{rat, RationalPoly};
    use crate::par::ExecMode;

    #[test]
    fn clean_cache_passes_and_tampering_is_located() {
        let cache = compute_cm(30, CoeffCache::new(), ExecMode::Parallel).unwrap();
        assert_eq!(first_violation(&cache).unwrap(), None);
        let mut polys: Vec<_> = (0..=30).map(|m| cache.poly(m).unwrap()).collect();
        polys[17] = &polys[17] + &RationalPoly::monomial(rat(1, 3), 3);
        let bad = CoeffCache::from_polys(polys).unwrap();
        assert_eq!(first_violation(&bad).unwrap(), Some(17));
    }
}
