//! Exact fixed-point utility values.
//!
//! Profits may carry up to [`Utility::DECIMALS`] fractional digits. Every
//! utility is stored as an integer count of `10^-DECIMALS` currency units, so
//! sums and threshold comparisons are exact.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use serde::{Serialize, Serializer};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Utility(u64);

impl Utility {
    pub const DECIMALS: u32 = 4;
    pub const SCALE: u64 = 10u64.pow(Self::DECIMALS);
    pub const ZERO: Utility = Utility(0);

    /// A whole number of currency units.
    pub const fn from_units(units: u64) -> Self {
        Utility(units * Self::SCALE)
    }

    pub const fn from_raw(raw: u64) -> Self {
        Utility(raw)
    }

    pub const fn raw(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn is_whole(self) -> bool {
        self.0.is_multiple_of(Self::SCALE)
    }

    pub fn checked_add(self, rhs: Utility) -> Option<Utility> {
        self.0.checked_add(rhs.0).map(Utility)
    }

    pub fn checked_mul_qty(self, qty: u32) -> Option<Utility> {
        self.0.checked_mul(u64::from(qty)).map(Utility)
    }

    pub fn saturating_sub(self, rhs: Utility) -> Utility {
        Utility(self.0.saturating_sub(rhs.0))
    }
}

impl Add for Utility {
    type Output = Utility;

    fn add(self, rhs: Utility) -> Utility {
        Utility(self.0 + rhs.0)
    }
}

impl AddAssign for Utility {
    fn add_assign(&mut self, rhs: Utility) {
        self.0 += rhs.0;
    }
}

impl Sum for Utility {
    fn sum<I: Iterator<Item = Utility>>(iter: I) -> Utility {
        iter.fold(Utility::ZERO, Add::add)
    }
}

impl<'a> Sum<&'a Utility> for Utility {
    fn sum<I: Iterator<Item = &'a Utility>>(iter: I) -> Utility {
        iter.copied().sum()
    }
}

impl fmt::Display for Utility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let whole = self.0 / Self::SCALE;
        let frac = self.0 % Self::SCALE;
        if frac == 0 {
            return write!(f, "{whole}");
        }
        let digits = format!("{frac:0width$}", width = Self::DECIMALS as usize);
        write!(f, "{whole}.{}", digits.trim_end_matches('0'))
    }
}

impl Serialize for Utility {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseUtilityError {
    #[error("empty number")]
    Empty,
    #[error("'{0}' is not a non-negative decimal")]
    Invalid(String),
    #[error("'{0}' has more than {max} fractional digits", max = Utility::DECIMALS)]
    TooPrecise(String),
    #[error("'{0}' is out of range")]
    Overflow(String),
}

impl FromStr for Utility {
    type Err = ParseUtilityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(ParseUtilityError::Empty);
        }
        let (whole, frac) = match s.split_once('.') {
            Some((w, f)) => (w, f),
            None => (s, ""),
        };
        let all_digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
        if whole.is_empty() || !all_digits(whole) || !all_digits(frac) || (s.contains('.') && frac.is_empty()) {
            return Err(ParseUtilityError::Invalid(s.to_owned()));
        }
        if frac.len() > Self::DECIMALS as usize {
            return Err(ParseUtilityError::TooPrecise(s.to_owned()));
        }
        let overflow = || ParseUtilityError::Overflow(s.to_owned());
        let whole: u64 = whole.parse().map_err(|_| overflow())?;
        let mut frac_raw: u64 = 0;
        for (k, b) in frac.bytes().enumerate() {
            frac_raw += u64::from(b - b'0') * 10u64.pow(Self::DECIMALS - 1 - k as u32);
        }
        whole
            .checked_mul(Self::SCALE)
            .and_then(|w| w.checked_add(frac_raw))
            .map(Utility)
            .ok_or_else(overflow)
    }
}
