//! Rational scalars and their `"p/q"` text form.

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar used everywhere in the crate.
pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"` (surrounding whitespace allowed).
pub fn parse_q(text: &str) -> Result<Q> {
    let t = text.trim();
    let bad = || Error::Parse(format!("not a rational: {text:?}"));
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = n.parse().map_err(|_| bad())?;
    let den: BigInt = d.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(Q::new(num, den))
}

/// Canonical text form: `"p/q"`, or `"p"` for integers.
pub fn fmt_q(x: &Q) -> String {
    x.to_string()
}

pub fn lcm_denominators<'a>(xs: impl IntoIterator<Item = &'a Q>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| num::integer::lcm(acc, x.denom().clone()))
}

/// Scales a rational vector to the primitive integer vector on the same ray.
/// The zero vector is returned unchanged.
pub fn primitive_integer(v: &[Q]) -> Vec<BigInt> {
    let den = lcm_denominators(v);
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect();
    let g = ints
        .iter()
        .fold(BigInt::zero(), |acc, x| num::integer::gcd(acc, x.clone()));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn floor_q(x: &Q) -> BigInt {
    x.floor().to_integer()
}

/// `x - floor(x)`, always in `[0, 1)`.
pub fn frac_q(x: &Q) -> Q {
    x - x.floor()
}

pub fn abs_q(x: &Q) -> Q {
    x.abs()
}

pub mod serde_q {
    use super::{fmt_q, parse_q, Q};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let text = String::deserialize(d)?;
        parse_q(&text).map_err(serde::de::Error::custom)
    }
}

pub mod serde_qvec {
    use super::{fmt_q, parse_q, Q};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> Result<S::Ok, S::Error> {
        xs.iter().map(fmt_q).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| parse_q(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub mod serde_opt_q {
    use super::{fmt_q, Q};
    use serde::{Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        x.as_ref().map(fmt_q).serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("2/4").unwrap(), q(1, 2));
        assert_eq!(parse_q(" -3 ").unwrap(), qi(-3));
        assert_eq!(fmt_q(&q(6, 3)), "2");
        assert_eq!(fmt_q(&q(-1, 5)), "-1/5");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("abc").is_err());
    }

    #[test]
    fn primitive_vectors() {
        let v = primitive_integer(&[q(1, 2), q(3, 4), qi(0)]);
        assert_eq!(v, vec![BigInt::from(2), BigInt::from(3), BigInt::from(0)]);
        assert_eq!(frac_q(&q(-1, 3)), q(2, 3));
    }
}
