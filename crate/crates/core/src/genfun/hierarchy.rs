use super::{a_series, GenfunError};
use crate::exact::{rat, Rational, RationalSeries};

const MARGIN: usize = 12;

/// `(coef * z * s')'`.
fn zd(s: &RationalSeries, coef: Rational) -> RationalSeries {
    s.derivative().shift(1).scale(&coef).derivative()
}

/// Left side minus right side of the `n`-th equation of the hierarchy,
/// exact below `z^order`. A correct transcription gives the zero series.
pub fn verify_genfun_ode(n: usize, order: usize) -> Result<RationalSeries, GenfunError> {
    if order < 6 {
        return Err(GenfunError::InvalidArgument("order must be at least 6".into()));
    }
    if n == 5 {
        return Err(GenfunError::InvalidArgument(
            "the right side for n = 5 is not available; A_5 is checked through its column only".into(),
        ));
    }
    if n > 5 {
        return Err(GenfunError::NotTranscribed(n));
    }
    let work = order + MARGIN;
    let a: Vec<RationalSeries> = (0..=n.max(1)).map(|i| a_series(i, work)).collect::<Result<_, _>>()?;
    let a0 = &a[0];
    let one = RationalSeries::one(i64::MAX / 4);
    let z = RationalSeries::monomial(rat(1, 1), 1, i64::MAX / 4);
    let four_z = z.scale(&rat(4, 1));
    let za0 = z.mul(a0);
    let za0_2 = za0.mul(a0);
    let lhs = |an: &RationalSeries| -> Result<RationalSeries, GenfunError> {
        Ok(zd(&an.div(a0)?, rat(1, 1)).sub(&four_z.mul(an)))
    };
    let ratio = |num: &RationalSeries, pow: u32| -> Result<RationalSeries, GenfunError> {
        Ok(num.div(&a0.powi(pow))?)
    };

    let residual = match n {
        0 => a0.derivative().div(a0)?.shift(1).derivative().sub(&four_z.mul(a0)),
        1 => lhs(&a[1])?.sub(&one.div(&za0)?),
        2 => {
            let (a1, a2) = (&a[1], &a[2]);
            let rhs = zd(&ratio(&a1.powi(2), 2)?, rat(1, 2)).sub(&a1.add(&one).div(&za0_2)?);
            lhs(a2)?.sub(&rhs)
        }
        3 => {
            let (a1, a2) = (&a[1], &a[2]);
            let inner = a2.neg().add(&a1.powi(2).add(&a1.scale(&rat(2, 1))).div(a0)?);
            let rhs = zd(&ratio(&a1.mul(a2), 2)?, rat(1, 1))
                .sub(&zd(&ratio(&a1.powi(3), 3)?, rat(1, 3)))
                .add(&inner.div(&za0_2)?);
            lhs(&a[3])?.sub(&rhs)
        }
        4 => {
            let (a1, a2, a3) = (&a[1], &a[2], &a[3]);
            let inner = a3
                .neg()
                .add(&a2.mul(&a1.add(&one)).scale(&rat(2, 1)).div(a0)?)
                .sub(&a1.powi(3).add(&a1.powi(2).scale(&rat(3, 1))).div(&a0.powi(2))?);
            let rhs = zd(&ratio(&a1.mul(a3), 2)?, rat(1, 1))
                .add(&zd(&ratio(&a2.powi(2), 2)?, rat(1, 2)))
                .add(&zd(&ratio(&a1.powi(4), 4)?, rat(1, 4)))
                .sub(&zd(&ratio(&a1.powi(2).mul(a2), 3)?, rat(1, 1)))
                .add(&inner.div(&za0_2)?);
            lhs(&a[4])?.sub(&rhs)
        }
        _ => unreachable!(),
    };
    if residual.prec() < order as i64 {
        return Err(GenfunError::InvalidArgument(format!(
            "working precision exhausted: residual known below z^{} only",
            residual.prec()
        )));
    }
    Ok(residual.truncate(order as i64))
}
