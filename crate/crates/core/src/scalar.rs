//! Exact rational scalars.
//!
//! `BigRational` already keeps numerator and denominator coprime with a
//! positive denominator, and represents zero as `0/1`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_bigint(n: BigInt) -> Scalar {
    BigRational::from_integer(n)
}

/// `3`, `-3`, `1/2`, `-1/2`.
pub fn fmt_scalar(c: &Scalar) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Formats `coeff * body` as a term; `first` controls whether a leading
/// `+` is emitted. An empty body means the term is a bare constant.
pub(crate) fn push_term(out: &mut String, coeff: &Scalar, body: &str, first: bool) {
    let neg = coeff.is_negative();
    let mag = coeff.abs();
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if body.is_empty() {
        out.push_str(&fmt_scalar(&mag));
    } else if mag.is_one() {
        out.push_str(body);
    } else {
        out.push_str(&fmt_scalar(&mag));
        out.push('*');
        out.push_str(body);
    }
}
