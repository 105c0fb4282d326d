use std::fmt;

use num_traits::{One, Zero};

use super::GenfunError;
use crate::exact::{format_rational, rat, Rational, RationalSeries};

/// `coeff * z^j / (1 - 2z^3/9)^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: Rational,
    pub j: usize,
    pub e: usize,
}

/// Finite sum of [`Term`]s. Every closed form is kept in this single basis;
/// `note` records how a printed form was brought into it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunctionExpr {
    pub terms: Vec<Term>,
    pub note: Option<&'static str>,
}

impl RationalFunctionExpr {
    fn new(terms: &[(Rational, usize, usize)], note: Option<&'static str>) -> Self {
        let terms = terms
            .iter()
            .filter(|(c, _, _)| !c.is_zero())
            .map(|(coeff, j, e)| Term { coeff: coeff.clone(), j: *j, e: *e })
            .collect();
        Self { terms, note }
    }

    /// Terms with `e = 0`.
    pub fn polynomial_part(&self) -> impl Iterator<Item = &Term> {
        self.terms.iter().filter(|t| t.e == 0)
    }

    /// Taylor expansion about `z = 0`, exact below `z^order`.
    pub fn expand(&self, order: usize) -> RationalSeries {
        let mut coeffs = vec![Rational::zero(); order];
        let w = rat(2, 9);
        for t in &self.terms {
            // (1 - w z^3)^(-e) = sum_k binom(e+k-1, k) w^k z^(3k)
            let mut b = Rational::one();
            let mut k = 0usize;
            while t.j + 3 * k < order {
                coeffs[t.j + 3 * k] += &t.coeff * &b;
                if t.e == 0 {
                    break;
                }
                k += 1;
                b = b * &w * rat((t.e + k - 1) as i64, k as i64);
            }
        }
        RationalSeries::from_coeffs(coeffs, order as i64)
    }
}

impl fmt::Display for RationalFunctionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})*z^{}", format_rational(&t.coeff), t.j)?;
            if t.e > 0 {
                write!(f, "/(1-2z^3/9)^{}", t.e)?;
            }
        }
        Ok(())
    }
}

fn q(n: i64, d: i64) -> Rational {
    rat(n, d)
}

fn big(n: &str, d: &str) -> Rational {
    Rational::new(n.parse().unwrap(), d.parse().unwrap())
}

/// Closed form of `A_n`, `0 <= n <= 5`.
pub fn a_closed(n: usize) -> Result<RationalFunctionExpr, GenfunError> {
    let expr = match n {
        0 => RationalFunctionExpr::new(&[(q(1, 1), 1, 2)], None),
        1 => {
            // (2w+45)(4w^2-252w-405) = 8w^3 - 324w^2 - 12150w - 18225, w = z^3,
            // and 25(2z^3-9)^3 = -18225 (1-2z^3/9)^3.
            let s = -18225;
            RationalFunctionExpr::new(
                &[(q(8, s), 9, 3), (q(-324, s), 6, 3), (q(-12150, s), 3, 3), (q(-18225, s), 0, 3)],
                Some("printed over 25(2z^3-9)^3 = -18225(1-2z^3/9)^3"),
            )
        }
        2 => {
            // 30625 (2z^3-9)^4 = 30625 * 6561 (1-2z^3/9)^4.
            let d = 30625 * 6561;
            RationalFunctionExpr::new(
                &[
                    (q(-8, 16875), 5, 0),
                    (q(1108, 91875), 2, 0),
                    (q(-162 * 340, d), 11, 4),
                    (q(162 * 14112, d), 8, 4),
                    (q(162 * 436509, d), 5, 4),
                    (q(162 * 1638792, d), 2, 4),
                ],
                Some("printed over 30625(2z^3-9)^4 = 200930625(1-2z^3/9)^4"),
            )
        }
        3 => RationalFunctionExpr::new(
            &[
                (q(-32, 2953125), 7, 0),
                (q(-8752, 4134375), 4, 0),
                (q(68258, 2296875), 1, 0),
                (q(116878, 459375), 1, 2),
                (q(8086604, 2296875), 1, 3),
                (q(-9771516, 765625), 1, 4),
                (q(139968, 15625), 1, 5),
            ],
            None,
        ),
        4 => RationalFunctionExpr::new(
            &[
                (big("256", "13953515625"), 12, 0),
                (big("-78928", "45581484375"), 9, 0),
                (big("-17694848", "1838453203125"), 6, 0),
                (big("-330698309", "81709031250"), 3, 0),
                (big("61927956", "3242421875"), 0, 0),
                (big("48238574611", "453939062500"), 0, 1),
                (big("-1400615705869", "453939062500"), 0, 2),
                (big("1407265401", "2316015625"), 0, 3),
                (big("59441369643", "1875781250"), 0, 4),
                (big("-1024460784", "19140625"), 0, 5),
                (big("1889568", "78125"), 0, 6),
            ],
            None,
        ),
        5 => RationalFunctionExpr::new(
            &[
                (big("131072", "197791083984375"), 14, 0),
                (big("90116032", "564070869140625"), 11, 0),
                (big("-324630499328", "23302394349609375"), 8, 0),
                (big("4366976622", "9785166015625"), 5, 0),
                (big("-385406999424", "68496162109375"), 2, 0),
                (big("4531503785253", "479473134765625"), 2, 1),
                (big("59545228803909", "479473134765625"), 2, 2),
                (big("-37276082380518", "13699232421875"), 2, 3),
                (big("14383449268992", "2837119140625"), 2, 4),
                (big("268395996744", "23447265625"), 2, 5),
                (big("-13329012672", "478515625"), 2, 6),
                (big("136048896", "9765625"), 2, 7),
            ],
            None,
        ),
        _ => return Err(GenfunError::NotTranscribed(n)),
    };
    Ok(expr)
}

/// Taylor coefficients of `A_n` below `z^order`.
pub fn a_series(n: usize, order: usize) -> Result<RationalSeries, GenfunError> {
    if order == 0 {
        return Err(GenfunError::InvalidArgument("order must be at least 1".into()));
    }
    Ok(a_closed(n)?.expand(order))
}
