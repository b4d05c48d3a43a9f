//! Exact rational arithmetic and the combinatorial primitives built on it.
//!
//! Every scalar in the crate is a [`Rational`]: an arbitrary-precision
//! fraction kept in lowest terms with a positive denominator. Rationals cross
//! text boundaries only as `"a/b"` strings.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand for `num / den`. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `C(n, k)`, zero when `k` is outside `0..=n`.
pub fn binomial_coefficient(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// The elementary symmetric polynomial `σ_j(xs)`, with `σ_0 = 1`.
///
/// One pass over `xs`, updating `σ_0..σ_j` of the prefix in place.
pub fn elementary_symmetric(xs: &[Rational], j: usize) -> Result<Rational> {
    if j > xs.len() {
        return Err(Error::Range(format!("sigma index {j} exceeds the number of variables {}", xs.len())));
    }
    Ok(elementary_symmetric_all(xs).swap_remove(j))
}

/// All of `σ_0(xs), …, σ_m(xs)` where `m = xs.len()`.
pub fn elementary_symmetric_all(xs: &[Rational]) -> Vec<Rational> {
    let mut sigma = vec![Rational::zero(); xs.len() + 1];
    sigma[0] = Rational::one();
    for (seen, x) in xs.iter().enumerate() {
        for i in (1..=seen + 1).rev() {
            let term = &sigma[i - 1] * x;
            sigma[i] += term;
        }
    }
    sigma
}

/// Parses `"a/b"`, `"a"`, or `"-a/b"`. Decimal notation is rejected.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("invalid rational {text:?}, expected \"a/b\" or \"a\""));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Canonical `"a/b"` rendering; integers come out as `"a/1"`.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub(crate) fn in_unit_interval(x: &Rational) -> bool {
    !x.is_negative() && x <= &Rational::one()
}

/// Serde adapter storing a [`Rational`] as its `"a/b"` string.
pub mod serde_rational {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(D::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>` as a string array.
pub mod serde_rational_vec {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de::Error as _, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format_rational(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts.iter().map(|t| parse_rational(t).map_err(D::Error::custom)).collect()
    }
}
