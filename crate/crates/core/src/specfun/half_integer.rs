use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// An integer or half-odd-integer stored as twice its value, so 3/2 is held as 3.
///
/// All comparisons and arithmetic are exact integer operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfInteger {
    twice_value: i32,
}

impl HalfInteger {
    pub const ZERO: HalfInteger = HalfInteger { twice_value: 0 };
    pub const HALF: HalfInteger = HalfInteger { twice_value: 1 };

    pub const fn from_twice(twice_value: i32) -> Self {
        Self { twice_value }
    }

    pub const fn from_int(value: i32) -> Self {
        Self {
            twice_value: 2 * value,
        }
    }

    pub const fn twice(self) -> i32 {
        self.twice_value
    }

    pub const fn is_integer(self) -> bool {
        self.twice_value % 2 == 0
    }

    pub const fn is_half_odd(self) -> bool {
        self.twice_value % 2 != 0
    }

    /// The integer value, if this is an integer.
    pub const fn to_integer(self) -> Option<i32> {
        if self.is_integer() {
            Some(self.twice_value / 2)
        } else {
            None
        }
    }

    pub fn to_f64(self) -> f64 {
        f64::from(self.twice_value) / 2.0
    }

    pub const fn abs(self) -> Self {
        Self {
            twice_value: self.twice_value.abs(),
        }
    }
}

impl From<i32> for HalfInteger {
    fn from(value: i32) -> Self {
        Self::from_int(value)
    }
}

impl Add for HalfInteger {
    type Output = HalfInteger;
    fn add(self, rhs: Self) -> Self {
        Self::from_twice(self.twice_value + rhs.twice_value)
    }
}

impl Sub for HalfInteger {
    type Output = HalfInteger;
    fn sub(self, rhs: Self) -> Self {
        Self::from_twice(self.twice_value - rhs.twice_value)
    }
}

impl Neg for HalfInteger {
    type Output = HalfInteger;
    fn neg(self) -> Self {
        Self::from_twice(-self.twice_value)
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice_value / 2)
        } else {
            write!(f, "{}/2", self.twice_value)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arithmetic() {
        let three_halves = HalfInteger::from_twice(3);
        let half = HalfInteger::HALF;
        assert_eq!(three_halves - half, HalfInteger::from_int(1));
        assert_eq!(three_halves + half, HalfInteger::from_int(2));
        assert_eq!(-half, HalfInteger::from_twice(-1));
        assert!(half < three_halves);
        assert!(!three_halves.is_integer());
        assert!((three_halves + half).is_integer());
        assert_eq!(three_halves.to_integer(), None);
        assert_eq!(HalfInteger::from_int(4).to_integer(), Some(4));
    }

    #[test]
    fn display() {
        assert_eq!(HalfInteger::from_twice(5).to_string(), "5/2");
        assert_eq!(HalfInteger::from_twice(-1).to_string(), "-1/2");
        assert_eq!(HalfInteger::from_twice(4).to_string(), "2");
    }
}
