use num_traits::Zero;

use super::{CoeffCache, CoeffError};
use crate::exact::{Rational, RationalPoly};

/// Coefficients of `c_m` in the structured layout
/// `c_m = sum_{n=0}^{r_m} p_{m,n} c1^([m/3] + delta - 2n)`,
/// where `delta = 1` exactly when `m = 3k+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffTable {
    pub m: usize,
    pub delta: usize,
    pub r_m: usize,
    /// `(n, p_{m,n})` for `n = 0..=r_m`.
    pub entries: Vec<(usize, Rational)>,
}

impl CoeffTable {
    pub fn delta_for(m: usize) -> usize {
        usize::from(m % 3 == 1)
    }

    /// Exponent of `c1` in front of the highest coefficient.
    pub fn top_power_for(m: usize) -> usize {
        m / 3 + Self::delta_for(m)
    }

    pub fn r_for(m: usize) -> usize {
        Self::top_power_for(m) / 2
    }

    pub fn power(&self, n: usize) -> usize {
        Self::top_power_for(self.m) - 2 * n
    }

    pub fn from_poly(m: usize, poly: &RationalPoly) -> Result<Self, CoeffError> {
        let top = Self::top_power_for(m);
        let r_m = Self::r_for(m);
        for k in poly.support() {
            if k > top || (top - k) % 2 == 1 {
                return Err(CoeffError::Unstructured { m });
            }
        }
        let entries = (0..=r_m).map(|n| (n, poly.coeff(top - 2 * n))).collect();
        Ok(Self { m, delta: Self::delta_for(m), r_m, entries })
    }

    pub fn to_poly(&self) -> RationalPoly {
        let top = Self::top_power_for(self.m);
        let mut coeffs = vec![Rational::zero(); top + 1];
        for (n, p) in &self.entries {
            coeffs[top - 2 * n] = p.clone();
        }
        RationalPoly::from_coeffs(coeffs)
    }

    pub fn p(&self, n: usize) -> Option<&Rational> {
        self.entries.get(n).map(|(_, p)| p)
    }
}

pub fn coeff_table(m: usize, cache: &CoeffCache) -> Result<CoeffTable, CoeffError> {
    CoeffTable::from_poly(m, &cache.poly(m)?)
}
