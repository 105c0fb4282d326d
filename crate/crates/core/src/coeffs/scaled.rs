use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::{lcm, Rational, RationalPoly};

/// Polynomial stored as integer numerators over one positive denominator.
///
/// This is the working representation of the recurrence: products convolve
/// plain integers and sums only touch the denominators once per operand.
/// Values produced by [`ScaledPoly::reduced`] have `gcd(numerators, den) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ScaledPoly {
    pub num: Vec<BigInt>,
    pub den: BigInt,
}

impl ScaledPoly {
    pub fn zero() -> Self {
        Self { num: Vec::new(), den: BigInt::one() }
    }

    pub fn from_poly(p: &RationalPoly) -> Self {
        let (num, den) = p.to_integer_form();
        Self { num, den }.reduced()
    }

    pub fn to_poly(&self) -> RationalPoly {
        RationalPoly::from_integer_form(&self.num, &self.den)
    }

    /// Largest numerator or denominator size in decimal digits (approximate).
    pub fn max_digits(&self) -> usize {
        let bits = self
            .num
            .iter()
            .map(|c| c.bits())
            .chain(std::iter::once(self.den.bits()))
            .max()
            .unwrap_or(0);
        (bits as f64 * std::f64::consts::LOG10_2).ceil() as usize
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.num.is_empty() || rhs.num.is_empty() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.num.len() + rhs.num.len() - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.num.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self { num: out, den: &self.den * &rhs.den }
    }

    pub fn scale_int(mut self, k: i64) -> Self {
        if k == 0 {
            return Self::zero();
        }
        if k != 1 {
            let k = BigInt::from(k);
            for c in &mut self.num {
                *c *= &k;
            }
        }
        self
    }

    /// Exact sum over the least common denominator.
    pub fn add(self, rhs: Self) -> Self {
        if rhs.num.is_empty() {
            return self;
        }
        if self.num.is_empty() {
            return rhs;
        }
        let den = lcm(&self.den, &rhs.den);
        let fa = &den / &self.den;
        let fb = &den / &rhs.den;
        let n = self.num.len().max(rhs.num.len());
        let mut out = Vec::with_capacity(n);
        let mut ia = self.num.into_iter();
        let mut ib = rhs.num.into_iter();
        for _ in 0..n {
            let a = ia.next().map(|a| if fa.is_one() { a } else { a * &fa });
            let b = ib.next().map(|b| if fb.is_one() { b } else { b * &fb });
            out.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a,
                (None, Some(b)) => b,
                (None, None) => BigInt::zero(),
            });
        }
        Self { num: out, den }
    }

    /// Divides by a nonzero integer (folded into the denominator).
    pub fn div_int(mut self, k: i64) -> Self {
        debug_assert!(k != 0);
        self.den *= BigInt::from(k.abs());
        if k < 0 {
            for c in &mut self.num {
                *c = -&*c;
            }
        }
        self
    }

    /// Cancels the common factor of numerators and denominator and trims
    /// trailing zeros.
    pub fn reduced(mut self) -> Self {
        while self.num.last().is_some_and(|c| c.is_zero()) {
            self.num.pop();
        }
        if self.num.is_empty() {
            return Self::zero();
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if !g.is_one() {
            for c in &mut self.num {
                *c /= &g;
            }
            self.den /= &g;
        }
        if self.den.is_negative() {
            self.den = -self.den;
            for c in &mut self.num {
                *c = -&*c;
            }
        }
        self
    }

    pub fn coeff(&self, k: usize) -> Rational {
        match self.num.get(k) {
            Some(n) => Rational::new(n.clone(), self.den.clone()),
            None => Rational::zero(),
        }
    }
}
