//! Exact rational scalars and their text/JSON encoding.
//!
//! Every coefficient in the crate is a [`Q`]. On the wire a rational is a
//! string `"p/q"` (or `"p"` when integral), so values of any size round-trip.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qvec(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

/// Integer value of `x`, if it is integral and fits in an `i64`.
pub fn to_i64(x: &Q) -> Option<i64> {
    if is_integer(x) {
        x.numer().to_i64()
    } else {
        None
    }
}

pub fn floor_i64(x: &Q) -> i64 {
    x.floor().numer().to_i64().expect("floor out of i64 range")
}

/// Parse `"p/q"`, `"p"` or a decimal such as `"-0.25"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        let neg = ip.starts_with('-');
        let digits = format!("{}{}", ip.trim_start_matches(['-', '+']), fp);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let v = Q::new(n, d);
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Q::from_integer(n))
}

pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_qvec(s: &str) -> Result<Vec<Q>> {
    let t = s.trim().trim_start_matches('[').trim_end_matches(']');
    if t.trim().is_empty() {
        return Ok(Vec::new());
    }
    t.split(',').map(|p| parse_q(p.trim().trim_matches('"'))).collect()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_iq(a: &[i64], b: &[Q]) -> Q {
    a.iter()
        .zip(b)
        .fold(Q::zero(), |acc, (&x, y)| acc + q(x) * y)
}

/// Falling factorial `a (a-1) ... (a-k+1)`; empty product for `k = 0`.
pub fn falling(a: &Q, k: i64) -> Q {
    let mut acc = Q::one();
    for l in 0..k {
        acc *= a - q(l);
    }
    acc
}

/// Rising factorial (Pochhammer symbol) `a (a+1) ... (a+k-1)`.
pub fn rising(a: &Q, k: i64) -> Q {
    let mut acc = Q::one();
    for l in 0..k {
        acc *= a + q(l);
    }
    acc
}

pub fn binomial(n: i64, k: i64) -> Q {
    if k < 0 || k > n {
        return Q::zero();
    }
    let mut acc = Q::one();
    for i in 0..k {
        acc = acc * q(n - i) / q(i + 1);
    }
    acc
}

/// Integer power with negative exponents allowed for nonzero bases.
pub fn pow_q(x: &Q, e: i64) -> Q {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

pub fn abs_q(x: &Q) -> Q {
    x.abs()
}

/// Serde adapters: rationals travel as strings.
pub mod serde_q {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(de::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for x in v {
                seq.serialize_element(&fmt_q(x))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Q>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter()
                .map(|s| parse_q(s).map_err(de::Error::custom))
                .collect()
        }
    }

    pub mod opt_vec {
        use super::*;

        pub fn serialize<S: Serializer>(
            v: &Option<Vec<Q>>,
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            match v {
                Some(v) => s.serialize_some(&v.iter().map(fmt_q).collect::<Vec<_>>()),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Option<Vec<Q>>, D::Error> {
            let v = Option::<Vec<String>>::deserialize(d)?;
            match v {
                None => Ok(None),
                Some(v) => v
                    .iter()
                    .map(|s| parse_q(s).map_err(de::Error::custom))
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map(Some),
            }
        }
    }

    pub mod vecvec {
        use super::*;

        pub fn serialize<S: Serializer>(
            v: &[Vec<Q>],
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            let strs: Vec<Vec<String>> =
                v.iter().map(|r| r.iter().map(fmt_q).collect()).collect();
            serde::Serialize::serialize(&strs, s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Vec<Q>>, D::Error> {
            let v = Vec::<Vec<String>>::deserialize(d)?;
            v.iter()
                .map(|r| {
                    r.iter()
                        .map(|s| parse_q(s).map_err(de::Error::custom))
                        .collect()
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_q("3/6").unwrap(), qf(1, 2));
        assert_eq!(parse_q("-7").unwrap(), q(-7));
        assert_eq!(parse_q("-0.25").unwrap(), qf(-1, 4));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("abc").is_err());
        assert_eq!(fmt_q(&qf(-2, 4)), "-1/2");
        assert_eq!(parse_qvec("[1/2, 1/3]").unwrap(), vec![qf(1, 2), qf(1, 3)]);
    }

    #[test]
    fn factorials() {
        assert_eq!(falling(&q(5), 3), q(60));
        assert_eq!(falling(&q(-2), 2), q(6));
        assert_eq!(rising(&qf(1, 2), 2), qf(3, 4));
        assert_eq!(binomial(5, 2), q(10));
        assert_eq!(pow_q(&q(2), -3), qf(1, 8));
    }
}
