//! Exact fixed-point currency amounts.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::Error;

/// Number of decimal places carried by [`Money`].
pub const DECIMALS: u32 = 4;

/// Atomic units per whole currency unit.
pub const SCALE: i64 = 10_i64.pow(DECIMALS);

/// A currency amount stored as an integer count of `1 / SCALE` units.
///
/// All arithmetic is exact, so balance identities can be checked with `==`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Money(i64);

impl Money {
    pub const ZERO: Money = Money(0);
    /// The smallest positive amount.
    pub const TICK: Money = Money(1);

    pub const fn from_atoms(atoms: i64) -> Money {
        Money(atoms)
    }

    /// Whole currency units.
    pub const fn from_int(units: i64) -> Money {
        Money(units * SCALE)
    }

    pub const fn atoms(self) -> i64 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / SCALE as f64
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }

    /// `self * count`, panicking on overflow.
    pub fn times(self, count: u64) -> Money {
        let count = i64::try_from(count).expect("unit count exceeds i64");
        Money(self.0.checked_mul(count).expect("money overflow"))
    }

    /// Midpoint of `self` and `other`, rounded toward negative infinity,
    /// together with a flag telling whether the result is exact.
    pub fn midpoint(self, other: Money) -> (Money, bool) {
        let sum = self.0 as i128 + other.0 as i128;
        let half = sum.div_euclid(2) as i64;
        (Money(half), sum.rem_euclid(2) == 0)
    }
}

impl Add for Money {
    type Output = Money;
    fn add(self, rhs: Money) -> Money {
        Money(self.0.checked_add(rhs.0).expect("money overflow"))
    }
}

impl Sub for Money {
    type Output = Money;
    fn sub(self, rhs: Money) -> Money {
        Money(self.0.checked_sub(rhs.0).expect("money overflow"))
    }
}

impl AddAssign for Money {
    fn add_assign(&mut self, rhs: Money) {
        *self = *self + rhs;
    }
}

impl SubAssign for Money {
    fn sub_assign(&mut self, rhs: Money) {
        *self = *self - rhs;
    }
}

impl Neg for Money {
    type Output = Money;
    fn neg(self) -> Money {
        Money(-self.0)
    }
}

impl Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        iter.fold(Money::ZERO, Add::add)
    }
}

impl<'a> Sum<&'a Money> for Money {
    fn sum<I: Iterator<Item = &'a Money>>(iter: I) -> Money {
        iter.copied().sum()
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        let whole = abs / SCALE as u64;
        let frac = abs % SCALE as u64;
        if frac == 0 {
            write!(f, "{sign}{whole}")
        } else {
            let digits = format!("{frac:0width$}", width = DECIMALS as usize);
            write!(f, "{sign}{whole}.{}", digits.trim_end_matches('0'))
        }
    }
}

impl FromStr for Money {
    type Err = Error;

    /// Parses a plain decimal literal such as `12`, `-0.5` or `7.0001`.
    fn from_str(s: &str) -> Result<Money, Error> {
        let bad = || Error::MoneyParse(s.to_string());
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (whole, frac) = match body.split_once('.') {
            Some((w, f)) => (w, f),
            None => (body, ""),
        };
        if whole.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        if !whole.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        if frac.len() > DECIMALS as usize {
            return Err(Error::TooManyDecimals(s.to_string()));
        }
        let whole: i64 = if whole.is_empty() {
            0
        } else {
            whole.parse().map_err(|_| bad())?
        };
        let mut frac_atoms: i64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        frac_atoms *= 10_i64.pow(DECIMALS - frac.len() as u32);
        let atoms = whole
            .checked_mul(SCALE)
            .and_then(|w| w.checked_add(frac_atoms))
            .ok_or_else(bad)?;
        Ok(Money(if negative { -atoms } else { atoms }))
    }
}

impl Serialize for Money {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        // Shortest round-trip formatting of the nearest f64 reproduces the
        // decimal exactly for |atoms| < 2^53.
        serializer.serialize_f64(self.to_f64())
    }
}

impl<'de> Deserialize<'de> for Money {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Money, D::Error> {
        let number = serde_json::Number::deserialize(deserializer)?;
        number.to_string().parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        assert_eq!("7.5".parse::<Money>().unwrap(), Money::from_atoms(75_000));
        assert_eq!("-0.0001".parse::<Money>().unwrap(), -Money::TICK);
        assert_eq!("50".parse::<Money>().unwrap(), Money::from_int(50));
        assert_eq!(Money::from_atoms(75_000).to_string(), "7.5");
        assert_eq!(Money::from_atoms(-12_340).to_string(), "-1.234");
        assert_eq!(Money::from_int(3).to_string(), "3");
    }

    #[test]
    fn rejects_extra_precision() {
        assert!(matches!(
            "1.23456".parse::<Money>(),
            Err(Error::TooManyDecimals(_))
        ));
        assert!("abc".parse::<Money>().is_err());
        assert!("1e3".parse::<Money>().is_err());
        assert!(".".parse::<Money>().is_err());
    }

    #[test]
    fn midpoint_rounds_down() {
        let (mid, exact) = Money::from_int(4).midpoint(Money::from_int(7));
        assert_eq!((mid, exact), (Money::from_atoms(55_000), true));
        let (mid, exact) = Money::from_atoms(1).midpoint(Money::from_atoms(2));
        assert_eq!((mid, exact), (Money::from_atoms(1), false));
    }

    #[test]
    fn json_round_trip_is_exact() {
        for atoms in [0, 1, 7, 123_456_789, -98_765, 7_500_000_000_001] {
            let m = Money::from_atoms(atoms);
            let text = serde_json::to_string(&m).unwrap();
            assert_eq!(serde_json::from_str::<Money>(&text).unwrap(), m, "{text}");
        }
        assert!(serde_json::from_str::<Money>("0.12345").is_err());
    }
}
