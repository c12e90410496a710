//! Exact distances: nonnegative rationals extended with infinity.
//!
//! Every metric quantity in the workbench (distances, equation bounds,
//! declared chain limits) is a [`Dist`]. Arithmetic is exact; there is no
//! floating point anywhere.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

/// A nonnegative exact rational, or infinity.
///
/// Infinity absorbs addition and dominates every finite value in the order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Dist {
    Finite(BigRational),
    Infinity,
}

/// Attempted to build a `Dist` from a negative or malformed quantity.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DistError {
    #[error("distance must be nonnegative, got {0}")]
    Negative(String),
    #[error("zero denominator in rational")]
    ZeroDenominator,
    #[error("cannot parse {0:?} as a distance (expected `p`, `p/q` or `inf`)")]
    Parse(String),
}

impl Dist {
    pub const INF: Dist = Dist::Infinity;

    pub fn zero() -> Dist {
        Dist::Finite(BigRational::zero())
    }

    pub fn from_integer(n: u64) -> Dist {
        Dist::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    /// Exact rational `numer/denom`. Fails on negative values or zero denominator.
    pub fn ratio(numer: i64, denom: i64) -> Result<Dist, DistError> {
        if denom == 0 {
            return Err(DistError::ZeroDenominator);
        }
        let r = BigRational::new(BigInt::from(numer), BigInt::from(denom));
        Dist::rational(r)
    }

    pub fn rational(r: BigRational) -> Result<Dist, DistError> {
        if r.is_negative() {
            Err(DistError::Negative(r.to_string()))
        } else {
            Ok(Dist::Finite(r))
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Dist::Finite(r) if r.is_zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Dist::Finite(_))
    }

    pub fn min(self, other: Dist) -> Dist {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Dist) -> Dist {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Supremum of an iterator of distances; the empty sup is 0.
    pub fn sup<I: IntoIterator<Item = Dist>>(iter: I) -> Dist {
        iter.into_iter().fold(Dist::zero(), Dist::max)
    }
}

impl Add for Dist {
    type Output = Dist;

    fn add(self, rhs: Dist) -> Dist {
        match (self, rhs) {
            (Dist::Finite(a), Dist::Finite(b)) => Dist::Finite(a + b),
            _ => Dist::Infinity,
        }
    }
}

impl Add for &Dist {
    type Output = Dist;

    fn add(self, rhs: &Dist) -> Dist {
        match (self, rhs) {
            (Dist::Finite(a), Dist::Finite(b)) => Dist::Finite(a + b),
            _ => Dist::Infinity,
        }
    }
}

impl PartialOrd for Dist {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dist {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Dist::Finite(a), Dist::Finite(b)) => a.cmp(b),
            (Dist::Finite(_), Dist::Infinity) => Ordering::Less,
            (Dist::Infinity, Dist::Finite(_)) => Ordering::Greater,
            (Dist::Infinity, Dist::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dist::Infinity => write!(f, "inf"),
            Dist::Finite(r) => {
                if r.denom() == &BigInt::from(1) {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl FromStr for Dist {
    type Err = DistError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "inf" {
            return Ok(Dist::Infinity);
        }
        let parse_int = |t: &str| BigInt::from_str(t).map_err(|_| DistError::Parse(s.to_string()));
        let r = match s.split_once('/') {
            Some((n, d)) => {
                let numer = parse_int(n)?;
                let denom = parse_int(d)?;
                if denom.is_zero() {
                    return Err(DistError::ZeroDenominator);
                }
                BigRational::new(numer, denom)
            }
            None => BigRational::from_integer(parse_int(s)?),
        };
        Dist::rational(r)
    }
}

impl Serialize for Dist {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Dist {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(n: i64, m: i64) -> Dist {
        Dist::ratio(n, m).unwrap()
    }

    #[test]
    fn infinity_absorbs_addition() {
        assert_eq!(d(1, 2) + Dist::Infinity, Dist::Infinity);
        assert_eq!(Dist::Infinity + Dist::Infinity, Dist::Infinity);
        assert_eq!(d(1, 2) + d(1, 3), d(5, 6));
    }

    #[test]
    fn infinity_dominates_order() {
        assert!(d(1000, 1) < Dist::Infinity);
        assert_eq!(Dist::Infinity.min(d(3, 4)), d(3, 4));
        assert_eq!(Dist::Infinity.max(d(3, 4)), Dist::Infinity);
    }

    #[test]
    fn empty_sup_is_zero() {
        assert_eq!(Dist::sup(std::iter::empty()), Dist::zero());
        assert_eq!(Dist::sup(vec![d(1, 4), d(1, 2)]), d(1, 2));
    }

    #[test]
    fn negative_rejected() {
        assert!(Dist::ratio(-1, 2).is_err());
        assert!(Dist::ratio(1, -2).is_err());
        assert_eq!(Dist::ratio(-1, -2).unwrap(), d(1, 2));
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["0", "3", "1/2", "40/4", "inf"] {
            let v: Dist = s.parse().unwrap();
            let back: Dist = v.to_string().parse().unwrap();
            assert_eq!(v, back);
        }
        assert_eq!("10/4".parse::<Dist>().unwrap(), d(5, 2));
        assert!("-1/2".parse::<Dist>().is_err());
        assert!("1/0".parse::<Dist>().is_err());
    }
}
