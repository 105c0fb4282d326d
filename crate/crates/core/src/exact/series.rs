use std::fmt;

use num_traits::{One, Zero};

use super::rational::Rational;
use super::ExactError;

/// Truncated Laurent series in `z` with rational coefficients.
///
/// The series stores the coefficients of `z^start, z^(start+1), ...` and is
/// known exactly for every exponent below `prec`; everything from `z^prec`
/// on is unknown. The truncation order is carried explicitly and every
/// operation derives the order of its result from the orders of its inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSeries {
    start: i64,
    coeffs: Vec<Rational>,
    prec: i64,
}

impl RationalSeries {
    /// Power series `sum coeffs[k] z^k + O(z^prec)`.
    pub fn from_coeffs(coeffs: Vec<Rational>, prec: i64) -> Self {
        Self::new(0, coeffs, prec)
    }

    /// Series `sum coeffs[k] z^(start+k) + O(z^prec)`; coefficients at or
    /// beyond `prec` are dropped.
    pub fn new(start: i64, mut coeffs: Vec<Rational>, prec: i64) -> Self {
        let keep = (prec - start).max(0) as usize;
        coeffs.truncate(keep);
        let mut s = Self { start, coeffs, prec };
        s.normalize();
        s
    }

    pub fn zero(prec: i64) -> Self {
        Self { start: prec, coeffs: Vec::new(), prec }
    }

    pub fn one(prec: i64) -> Self {
        Self::monomial(Rational::one(), 0, prec)
    }

    pub fn monomial(c: Rational, power: i64, prec: i64) -> Self {
        Self::new(power, vec![c], prec)
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.start = self.prec;
            return;
        }
        self.coeffs.drain(..lead);
        self.start += lead as i64;
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    /// Absolute truncation order: the series is known modulo `z^prec`.
    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Exponent of the first nonzero coefficient; `None` when the series
    /// vanishes to its truncation order.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.start)
    }

    /// Lower bound for the exponent of any nonzero term.
    fn low(&self) -> i64 {
        self.valuation().unwrap_or(self.prec)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `z^k`; `None` when `k` is at or past the truncation order.
    pub fn coeff(&self, k: i64) -> Option<Rational> {
        if k >= self.prec {
            return None;
        }
        let idx = k - self.start;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            Some(Rational::zero())
        } else {
            Some(self.coeffs[idx as usize].clone())
        }
    }

    fn at(&self, k: i64) -> Rational {
        self.coeff(k).unwrap_or_else(Rational::zero)
    }

    /// Nonzero terms `(exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.start + i as i64, c))
    }

    /// Drops terms at or above `prec` (never raises the order).
    pub fn truncate(&self, prec: i64) -> Self {
        let prec = prec.min(self.prec);
        Self::new(self.start, self.coeffs.clone(), prec)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let prec = self.prec.min(rhs.prec);
        let lo = self.low().min(rhs.low()).min(prec);
        let coeffs = (lo..prec).map(|k| self.at(k) + rhs.at(k)).collect();
        Self::new(lo, coeffs, prec)
    }

    pub fn neg(&self) -> Self {
        Self { start: self.start, coeffs: self.coeffs.iter().map(|c| -c).collect(), prec: self.prec }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.start, self.coeffs.iter().map(|c| c * s).collect(), self.prec)
    }

    /// Multiplication by `z^j`.
    pub fn shift(&self, j: i64) -> Self {
        Self { start: self.start + j, coeffs: self.coeffs.clone(), prec: self.prec + j }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let (va, vb) = (self.low(), rhs.low());
        let prec = (va + rhs.prec).min(vb + self.prec);
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(prec);
        }
        let len = (prec - va - vb).max(0) as usize;
        let mut out = vec![Rational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::new(va + vb, out, prec)
    }

    /// Exact quotient. The divisor's valuation is shifted out explicitly, so
    /// the result may carry negative powers.
    pub fn div(&self, rhs: &Self) -> Result<Self, ExactError> {
        let vb = rhs.valuation().ok_or(ExactError::DivisionByZeroSeries)?;
        let rel_b = rhs.prec - vb;
        if self.is_zero() {
            return Ok(Self::zero(self.prec - vb));
        }
        let va = self.start;
        let rel = (self.prec - va).min(rel_b);
        let lead = &rhs.coeffs[0];
        let mut q: Vec<Rational> = Vec::with_capacity(rel as usize);
        for k in 0..rel as usize {
            let mut acc = self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero);
            for j in 1..=k.min(rhs.coeffs.len().saturating_sub(1)) {
                let b = &rhs.coeffs[j];
                if !b.is_zero() {
                    acc -= b * &q[k - j];
                }
            }
            q.push(acc / lead);
        }
        Ok(Self::new(va - vb, q, va - vb + rel))
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        let v = self.valuation().ok_or(ExactError::DivisionByZeroSeries)?;
        Self::one(self.prec - v).div(self)
    }

    /// Term-wise derivative in `z`.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * Rational::from_integer((self.start + i as i64).into()))
            .collect();
        Self::new(self.start - 1, coeffs, self.prec - 1)
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one(i64::MAX / 4);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.terms() {
            write!(f, "({c})*z^{k} + ")?;
        }
        write!(f, "O(z^{})", self.prec)
    }
}
