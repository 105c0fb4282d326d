use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ExactError;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator (`num_rational` normalizes on construction).
pub type Rational = num_rational::BigRational;

/// Builds `num/den` from machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"` or `"p"` into a normalized rational.
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let s = s.trim();
    let bad = || ExactError::Parse(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Writes a rational as `numerator/denominator`, always with the slash.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// 2-adic valuation of a nonzero integer.
pub fn val2_int(n: &BigInt) -> Option<u64> {
    n.trailing_zeros()
}

/// 2-adic valuation of a rational: `e` with `q = 2^e * (odd/odd)`.
///
/// Reads the stored (reduced) form directly, so at most one of the two
/// terms is nonzero.
pub fn val2(q: &Rational) -> Result<i64, ExactError> {
    if q.is_zero() {
        return Err(ExactError::ValuationOfZero);
    }
    let num = val2_int(q.numer()).unwrap_or(0) as i64;
    let den = val2_int(q.denom()).unwrap_or(0) as i64;
    Ok(num - den)
}

/// Strips every factor of two from a nonzero integer.
pub fn odd_part(n: &BigInt) -> BigInt {
    match n.trailing_zeros() {
        Some(tz) => n.abs() >> tz as usize,
        None => BigInt::zero(),
    }
}

/// Accurate conversion for rationals whose numerator and denominator may
/// individually overflow `f64`.
pub fn rational_to_f64(q: &Rational) -> f64 {
    if let Some(x) = q.to_f64() {
        if x.is_finite() {
            return x;
        }
    }
    // Fallback: scale both parts down to 60 significant bits.
    let (n, d) = (q.numer(), q.denom());
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    let ns = (nb - 60).max(0);
    let ds = (db - 60).max(0);
    let nf = (n.abs() >> ns as usize).to_f64().unwrap_or(0.0);
    let df = (d >> ds as usize).to_f64().unwrap_or(1.0);
    let sign = if n.sign() == Sign::Minus { -1.0 } else { 1.0 };
    sign * nf / df * 2f64.powi((ns - ds) as i32)
}

/// Least common multiple of two positive integers.
pub fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_one() {
        return b.clone();
    }
    if b.is_one() {
        return a.clone();
    }
    a.lcm(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Trial division, independent of `trailing_zeros`.
    fn val2_trial(mut n: i64) -> i64 {
        let mut e = 0;
        while n % 2 == 0 {
            n /= 2;
            e += 1;
        }
        e
    }

    #[test]
    fn val2_examples() {
        assert_eq!(val2(&rat(4, 3)).unwrap(), 2);
        assert_eq!(val2(&rat(253774, 212625)).unwrap(), val2_trial(253774) - val2_trial(212625));
        assert_eq!(val2(&rat(253774, 212625)).unwrap(), 1);
        assert_eq!(val2(&rat(1, 1)).unwrap(), 0);
        assert_eq!(val2(&rat(3, 8)).unwrap(), -3);
        assert!(matches!(val2(&rat(0, 5)), Err(ExactError::ValuationOfZero)));
    }

    #[test]
    fn normalized_storage() {
        let q = rat(6, -4);
        assert_eq!(q.numer(), &BigInt::from(-3));
        assert_eq!(q.denom(), &BigInt::from(2));
        assert_eq!(format_rational(&q), "-3/2");
        assert_eq!(parse_rational("-3/2").unwrap(), q);
        assert_eq!(parse_rational("7").unwrap(), rat(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x/2").is_err());
    }

    #[test]
    fn f64_conversion_of_huge_parts() {
        let big = BigInt::from(3) * (BigInt::one() << 2000usize);
        let q = Rational::new(big.clone() + 1, BigInt::from(2) * (BigInt::one() << 2000usize));
        assert!((rational_to_f64(&q) - 1.5).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn val2_is_additive(a in 1i64..1_000_000, b in 1i64..1_000_000, c in 1i64..1_000_000, d in 1i64..1_000_000) {
            let p = rat(a, b);
            let q = rat(-c, d);
            prop_assert_eq!(val2(&(&p * &q)).unwrap(), val2(&p).unwrap() + val2(&q).unwrap());
        }
    }
}
