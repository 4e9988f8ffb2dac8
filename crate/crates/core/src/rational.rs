//! Exact rationals and their string form.

use num::bigint::BigInt;
use num::{BigRational, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational; every coefficient in the crate is one of these.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Malformed(format!("not a rational: {s:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Malformed(format!("not a rational: {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Malformed(format!("zero denominator: {s:?}")));
    }
    Ok(Q::new(n, d))
}

/// `"p/q"`, or `"p"` for integers.
pub fn fmt_q(x: &Q) -> String {
    x.to_string()
}

/// Exact square root, if `x` is the square of a rational.
pub fn sqrt_q(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer();
    let d = x.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        Some(Q::new(rn, rd))
    } else {
        None
    }
}
