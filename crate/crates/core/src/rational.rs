//! Exact rationals and their `p/q` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn qf(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

pub fn half(x: &Q) -> Q {
    x / q(2)
}

pub fn format_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_q(s: &str) -> Result<Q> {
    let bad = || Error::MalformedInput(format!("not a rational: {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let num: BigInt = a.trim().parse().map_err(|_| bad())?;
            let den: BigInt = b.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(num, den))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Bit length of the largest denominator, used to track coordinate growth.
pub fn denom_bits(x: &Q) -> u64 {
    x.denom().bits()
}

pub fn is_negative(x: &Q) -> bool {
    x.is_negative()
}

pub fn is_positive(x: &Q) -> bool {
    x.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        for x in [qf(-7, 3), q(0), q(5), qf(1, 1024)] {
            assert_eq!(parse_q(&format_q(&x)).unwrap(), x);
        }
        assert_eq!(parse_q("4").unwrap(), q(4));
        assert_eq!(format_q(&qf(6, -4)), "-3/2");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }
}
