//! Serialization helpers shared by reports: rationals as `"num/den"` strings.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::{Error, Result};

/// `"num/den"` with the denominator always present.
pub fn rat_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_rat(s: &str) -> Result<BigRational> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.trim().parse().map_err(|_| Error::InvalidParams(format!("bad rational {s:?}")))?;
    let d: BigInt = d.trim().parse().map_err(|_| Error::InvalidParams(format!("bad rational {s:?}")))?;
    if d == BigInt::from(0) {
        return Err(Error::DivisionByZero);
    }
    Ok(BigRational::new(n, d))
}

pub fn rat_int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn rat(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn is_integer(x: &BigRational) -> bool {
    x.denom().is_one()
}
