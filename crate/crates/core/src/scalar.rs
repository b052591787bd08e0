//! Exact rational scalars.
//!
//! `Scalar` is a thin alias for `num::BigRational`, which already maintains
//! the invariants we need (lowest terms, positive denominator, canonical
//! zero). The helpers here fix the serialized form used everywhere in this
//! crate: the string `"num"` or `"num/den"`.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    assert!(den != 0, "zero denominator");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Double factorial (2k-1)!! style products, used by moment oracles in tests
/// and by the Gaussian acceptance criterion.
pub fn double_factorial(n: u64) -> Scalar {
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= BigInt::from(k);
        k -= 2;
    }
    BigRational::from_integer(acc)
}

pub fn factorial(n: u64) -> Scalar {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    BigRational::from_integer(acc)
}

/// Canonical `"num/den"` (or bare `"num"` when the denominator is 1).
pub fn to_string(s: &Scalar) -> String {
    if s.denom().is_one() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// Parses `"num"` or `"num/den"`.
pub fn parse(text: &str) -> Option<Scalar> {
    let mut parts = text.splitn(2, '/');
    let numer: BigInt = parts.next()?.trim().parse().ok()?;
    match parts.next() {
        None => Some(BigRational::from_integer(numer)),
        Some(d) => {
            let denom: BigInt = d.trim().parse().ok()?;
            if denom.is_zero() {
                None
            } else {
                Some(BigRational::new(numer, denom))
            }
        }
    }
}

pub fn is_negative(s: &Scalar) -> bool {
    s.numer().is_negative()
}
