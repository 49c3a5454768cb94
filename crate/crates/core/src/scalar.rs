//! Exact rational scalars and the handful of integer helpers the formulas need.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational. Every value in this crate is exact.
pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

/// `base^exp` for any signed exponent. A negative exponent of zero is a domain error.
pub fn pow(base: &Scalar, exp: i64) -> Result<Scalar> {
    if exp < 0 && base.is_zero() {
        return Err(Error::Domain(format!("0 raised to negative power {exp}")));
    }
    let e = exp.unsigned_abs();
    let mut acc = Scalar::one();
    let mut sq = base.clone();
    let mut rem = e;
    while rem > 0 {
        if rem & 1 == 1 {
            acc *= &sq;
        }
        rem >>= 1;
        if rem > 0 {
            sq = &sq * &sq;
        }
    }
    Ok(if exp < 0 { acc.recip() } else { acc })
}

/// `(-1)^exp` as a scalar.
pub fn sign_power(exp: i64) -> Scalar {
    if exp.rem_euclid(2) == 0 {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

/// Binomial coefficient with the convention `C(m, j) = 0` outside `0 <= j <= m`.
pub fn binomial(m: i64, j: i64) -> i64 {
    if j < 0 || m < 0 || j > m {
        return 0;
    }
    let j = j.min(m - j);
    let mut acc: i64 = 1;
    for t in 0..j {
        acc = acc * (m - t) / (t + 1);
    }
    acc
}

/// `prod_{i=0}^{r} C(r, i)`.
pub fn binomial_row_product(r: u32) -> BigInt {
    (0..=i64::from(r)).fold(BigInt::one(), |acc, i| acc * binomial(i64::from(r), i))
}

/// Renders `n` or `n/d` (denominator omitted when it is 1).
pub fn format_scalar(v: &Scalar) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Parses `n`, `-n`, or `n/d`.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Scalar::new(n, d))
        }
        None => BigInt::from_str(s)
            .map(Scalar::from_integer)
            .map_err(|_| bad()),
    }
}

/// Bit length of the larger of numerator and denominator magnitudes.
pub fn bit_size(v: &Scalar) -> u64 {
    v.numer().abs().bits().max(v.denom().bits())
}
