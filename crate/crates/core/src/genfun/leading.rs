use num_traits::{One, Pow};

use super::GenfunError;
use crate::exact::{rat, Rational};

fn two_ninths_pow(k: usize) -> Rational {
    Pow::pow(rat(2, 9), k)
}

fn sq(x: i64) -> Rational {
    rat(x * x, 1)
}

fn kr(k: usize) -> Rational {
    rat(k as i64, 1)
}

fn horner(cs: &[Rational], k: usize) -> Rational {
    cs.iter().fold(Rational::from_integer(0.into()), |acc, c| acc * kr(k) + c)
}

/// Leading structured coefficient `p_{m,0}`.
pub fn p_m0_closed(m: usize) -> Rational {
    let k = m / 3;
    let ki = k as i64;
    match (m % 3, m) {
        (1, _) => kr(k + 1) * two_ninths_pow(k),
        (0, 0) => Rational::one(),
        (0, _) => rat(6, 25) * sq(3 * ki + 2) * two_ninths_pow(k),
        (_, 2) => rat(4, 3),
        (_, 5) => rat(206, 135),
        _ => rat(9, 30625) * rat(196 * ki + 281, 1) * sq(3 * ki + 4) * two_ninths_pow(k),
    }
}

/// Second structured coefficient `p_{m,1}`, including the small cases the
/// general formulas do not cover.
pub fn p_m1_closed(m: usize) -> Result<Rational, GenfunError> {
    let exceptional = match m {
        4 => Some(rat(16, 15)),
        7 => Some(rat(1336, 945)),
        6 => Some(rat(256, 315)),
        9 => Some(rat(253774, 212625)),
        12 => Some(rat(4788251008, 4862521125)),
        8 => Some(rat(4864, 8505)),
        11 => Some(rat(3958936, 4209975)),
        14 => Some(Rational::new(44744664088576i64.into(), 51771262417875i64.into())),
        _ => None,
    };
    if let Some(p) = exceptional {
        return Ok(p);
    }
    let k = m / 3;
    let ki = k as i64;
    let value = match m % 3 {
        1 if k >= 3 => {
            let poly = horner(&[rat(2916, 1), rat(328779, 49), rat(-34129, 147)], k);
            rat(2, 15625) * poly * sq(ki + 1) * two_ninths_pow(k)
        }
        0 if k >= 5 => {
            let poly = horner(&[rat(8748, 5), rat(223074, 49), rat(-281982223, 48020), rat(-15481989, 41503)], k);
            rat(1, 78125) * poly * sq(3 * ki + 2) * two_ninths_pow(k)
        }
        2 if k >= 5 => {
            let poly = horner(
                &[
                    rat(34992, 5),
                    rat(10865016, 245),
                    rat(86107493, 12005),
                    rat(-86860273454, 1452605),
                    rat(8029312488, 7014007),
                ],
                k,
            );
            rat(3, 9765625) * poly * sq(3 * ki + 4) * two_ninths_pow(k)
        }
        _ => {
            return Err(GenfunError::InvalidArgument(format!("p_{{{m},1}} is not covered by the closed forms")));
        }
    };
    Ok(value)
}
