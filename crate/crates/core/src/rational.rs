//! Exact rationals and their text form (`num/den`, or a bare integer).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serializer};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_text(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let num: BigInt = a.trim().parse().ok()?;
            let den: BigInt = b.trim().parse().ok()?;
            if den.is_zero() {
                None
            } else {
                Some(Q::new(num, den))
            }
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

/// Sign as -1, 0, 1.
pub fn signum(x: &Q) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Nearest rational with the given denominator.
pub fn from_f64(x: f64, denominator: i64) -> Q {
    frac((x * denominator as f64).round() as i64, denominator)
}

/// Positive factor turning `v` into a primitive integer vector (one for the
/// zero vector).
pub fn primitive_scale(v: &[Q]) -> Q {
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let num = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(&(x.numer() * &den / x.denom())));
    if num.is_zero() {
        Q::one()
    } else {
        Q::new(den, num.abs())
    }
}

pub fn ser_q<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&to_text(x))
}

pub fn de_q<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
    let s = String::deserialize(d)?;
    parse(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
}

pub fn ser_vec<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(to_text))
}

pub fn de_vec<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
    let v = Vec::<String>::deserialize(d)?;
    v.iter()
        .map(|s| parse(s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}"))))
        .collect()
}

pub fn ser_mat<S: Serializer>(m: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(m.iter().map(|row| row.iter().map(to_text).collect::<Vec<_>>()))
}

pub fn de_mat<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Q>>, D::Error> {
    let m = Vec::<Vec<String>>::deserialize(d)?;
    m.iter()
        .map(|row| {
            row.iter()
                .map(|s| parse(s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}"))))
                .collect()
        })
        .collect()
}
