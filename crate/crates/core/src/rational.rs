//! Helpers around exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Formats as `"p/q"` (denominator always present).
pub fn to_str(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-0.25"`.
pub fn parse(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Argument(format!("not a rational number: {s:?}"));
    if let Some((p, d)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Q::new(p, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let num: BigInt = digits.parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let v = Q::new(num, den);
        return Ok(if neg { -v } else { v });
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Q::from_integer(p))
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a finite float.
pub fn from_f64(x: f64) -> Result<Q> {
    Q::from_float(x).ok_or_else(|| Error::Argument(format!("non-finite value {x}")))
}

/// Rational bounds `lo <= sqrt(x) <= hi` with relative gap about 1e-12.
pub fn sqrt_bounds(x: &Q) -> (Q, Q) {
    assert!(!x.is_negative(), "sqrt of negative rational");
    if x.is_zero() {
        return (Q::zero(), Q::zero());
    }
    let s = to_f64(x).sqrt();
    let mut lo = Q::from_float(s * (1.0 - 1e-12)).unwrap();
    let mut hi = Q::from_float(s * (1.0 + 1e-12)).unwrap();
    let shrink = qf(999, 1000);
    let grow = qf(1001, 1000);
    while &(&lo * &lo) > x {
        lo *= &shrink;
    }
    while &(&hi * &hi) < x {
        hi *= &grow;
    }
    (lo, hi)
}

pub fn is_one(x: &Q) -> bool {
    x.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse("-1/2").unwrap(), qf(-1, 2));
        assert_eq!(parse("3").unwrap(), q(3));
        assert_eq!(parse("-0.25").unwrap(), qf(-1, 4));
        assert_eq!(parse("1.5").unwrap(), qf(3, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
        assert_eq!(to_str(&q(3)), "3/1");
    }

    #[test]
    fn sqrt_bounds_bracket() {
        for v in [qf(1, 3), q(2), q(12), qf(49, 4)] {
            let (lo, hi) = sqrt_bounds(&v);
            assert!(&lo * &lo <= v && &hi * &hi >= v);
            assert!(to_f64(&(&hi - &lo)) < 1e-9);
        }
    }
}
