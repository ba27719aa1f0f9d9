use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A nonnegative exact rational distance. All comparisons are exact.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Distance(Ratio<i64>);

impl Distance {
    pub const ZERO: Distance = Distance(Ratio::new_raw(0, 1));

    pub fn integer(value: u64) -> Self {
        Distance(Ratio::from_integer(value as i64))
    }

    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidDistance(format!("{numer}/{denom} has zero denominator")));
        }
        let ratio = Ratio::new(numer, denom);
        if ratio < Ratio::from_integer(0) {
            return Err(Error::InvalidDistance(format!("{numer}/{denom} is negative")));
        }
        Ok(Distance(ratio))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        *self.0.numer() == 0
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Largest integer not exceeding the distance.
    pub fn floor(&self) -> i64 {
        Integer::div_floor(&self.numer(), &self.denom())
    }

    pub fn checked_add(&self, other: &Distance) -> Option<Distance> {
        self.0.checked_add(&other.0).map(Distance)
    }

    pub fn checked_mul(&self, other: &Distance) -> Option<Distance> {
        self.0.checked_mul(&other.0).map(Distance)
    }

    pub fn saturating_add(&self, other: &Distance) -> Distance {
        self.checked_add(other).unwrap_or(Distance(Ratio::from_integer(i64::MAX)))
    }
}

impl From<u32> for Distance {
    fn from(value: u32) -> Self {
        Distance::integer(u64::from(value))
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Distance {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let bad = || Error::parse("distance", text);
        match text.split_once('/') {
            Some((n, d)) => {
                let n: i64 = n.trim().parse().map_err(|_| bad())?;
                let d: i64 = d.trim().parse().map_err(|_| bad())?;
                Distance::new(n, d)
            }
            None => {
                let n: i64 = text.parse().map_err(|_| bad())?;
                Distance::new(n, 1)
            }
        }
    }
}

impl Serialize for Distance {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Distance {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!("5".parse::<Distance>().unwrap(), Distance::integer(5));
        let half: Distance = "7/2".parse().unwrap();
        assert_eq!(half.to_string(), "7/2");
        assert_eq!(half.floor(), 3);
        assert_eq!("14/4".parse::<Distance>().unwrap(), half);
    }

    #[test]
    fn rejects_negative_and_garbage() {
        assert!("-1".parse::<Distance>().is_err());
        assert!("1/0".parse::<Distance>().is_err());
        assert!("x".parse::<Distance>().is_err());
    }

    #[test]
    fn ordering_is_exact() {
        let a: Distance = "1/3".parse().unwrap();
        let b: Distance = "333333333/1000000000".parse().unwrap();
        assert!(b < a);
    }
}
