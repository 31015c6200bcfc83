//! Exact nonnegative rationals.
//!
//! [`Rat`] wraps a [`BigRational`] that is always in lowest terms with a
//! positive denominator and a nonnegative numerator. Every element of a
//! Puiseux semialgebra is carried as a `Rat`.

use std::collections::BTreeSet;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::primes;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rat(BigRational);

fn to_int(n: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, n.clone())
}

fn to_uint(n: &BigInt) -> BigUint {
    n.to_biguint().expect("nonnegative by construction")
}

impl Rat {
    /// Builds `n/d` in lowest terms.
    pub fn new(n: impl Into<BigUint>, d: impl Into<BigUint>) -> Result<Rat> {
        let d = d.into();
        if d.is_zero() {
            return Err(Error::domain("denominator must be positive"));
        }
        Ok(Rat(BigRational::new(to_int(&n.into()), to_int(&d))))
    }

    pub fn from_ratio(q: BigRational) -> Result<Rat> {
        if q.is_negative() {
            return Err(Error::domain(format!("negative rational {q}")));
        }
        Ok(Rat(q))
    }

    pub fn int(n: impl Into<BigUint>) -> Rat {
        Rat(BigRational::from_integer(to_int(&n.into())))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> BigUint {
        to_uint(self.0.numer())
    }

    pub fn denom(&self) -> BigUint {
        to_uint(self.0.denom())
    }

    /// Numerator and denominator of a positive rational.
    pub fn num_den(&self) -> Result<(BigUint, BigUint)> {
        if self.is_zero() {
            return Err(Error::domain("numerator/denominator undefined for 0"));
        }
        Ok((self.numer(), self.denom()))
    }

    /// Primes dividing the numerator or the denominator.
    pub fn support(&self) -> Result<BTreeSet<BigUint>> {
        let (n, d) = self.num_den()?;
        let mut out: BTreeSet<BigUint> = primes::factorize(&n).into_iter().map(|(p, _)| p).collect();
        out.extend(primes::factorize(&d).into_iter().map(|(p, _)| p));
        Ok(out)
    }

    pub fn floor(&self) -> BigUint {
        to_uint(&self.0.floor().to_integer())
    }

    pub fn ceil(&self) -> BigUint {
        to_uint(&self.0.ceil().to_integer())
    }

    /// `self - other` when the result stays nonnegative.
    pub fn checked_sub(&self, other: &Rat) -> Option<Rat> {
        let diff = &self.0 - &other.0;
        (!diff.is_negative()).then_some(Rat(diff))
    }

    pub fn checked_div(&self, other: &Rat) -> Option<Rat> {
        (!other.is_zero()).then(|| Rat(&self.0 / &other.0))
    }

    pub fn recip(&self) -> Option<Rat> {
        (!self.is_zero()).then(|| Rat(self.0.recip()))
    }

    pub fn pow(&self, e: u32) -> Rat {
        Rat(Pow::pow(&self.0, e))
    }

    pub fn to_u64(&self) -> Option<u64> {
        if self.is_integer() {
            self.0.numer().to_u64()
        } else {
            None
        }
    }

    pub fn to_f64_lossy(&self) -> f64 {
        self.0.numer().to_f64().unwrap_or(f64::MAX) / self.0.denom().to_f64().unwrap_or(f64::MAX)
    }

    /// `(denominator, numerator)`: smaller height first.
    pub fn height_key(&self) -> (BigUint, BigUint) {
        (self.denom(), self.numer())
    }
}

/// `make_rat(n, d)` for machine integers.
pub fn make_rat(n: u64, d: u64) -> Result<Rat> {
    Rat::new(n, d)
}

impl From<u64> for Rat {
    fn from(n: u64) -> Rat {
        Rat::int(n)
    }
}

impl From<BigUint> for Rat {
    fn from(n: BigUint) -> Rat {
        Rat::int(n)
    }
}

impl Add for Rat {
    type Output = Rat;
    fn add(self, rhs: Rat) -> Rat {
        Rat(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn add(self, rhs: &Rat) -> Rat {
        Rat(&self.0 + &rhs.0)
    }
}

impl Mul for Rat {
    type Output = Rat;
    fn mul(self, rhs: Rat) -> Rat {
        Rat(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn mul(self, rhs: &Rat) -> Rat {
        Rat(&self.0 * &rhs.0)
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |a, b| &a + b)
    }
}

impl Product for Rat {
    fn product<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::one(), |a, b| a * b)
    }
}

impl<'a> Product<&'a Rat> for Rat {
    fn product<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::one(), |a, b| &a * b)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rat> {
        let s = s.trim();
        let parse = |t: &str| {
            t.trim()
                .parse::<BigUint>()
                .map_err(|_| Error::Parse(format!("bad rational {s:?}")))
        };
        match s.split_once('/') {
            Some((n, d)) => {
                Rat::new(parse(n)?, parse(d)?).map_err(|_| Error::Parse(format!("zero denominator in {s:?}")))
            }
            None => Ok(Rat::int(parse(s)?)),
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Exponent of the prime `p` in `n` (n > 0).
pub fn valuation(n: &BigUint, p: &BigUint) -> u32 {
    let mut n = n.clone();
    let mut v = 0;
    while !n.is_zero() && n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}
