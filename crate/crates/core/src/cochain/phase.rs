use std::fmt;
use std::ops::{Div, Mul};
use std::str::FromStr;

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{Error, Result};

/// An element of ℚ/ℤ, read as `e^{2πi p/q}`. Stored reduced with `0 ≤ p < q`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Phase {
    num: i64,
    den: i64,
}

impl Default for Phase {
    fn default() -> Self {
        Self::ZERO
    }
}

impl Phase {
    /// The trivial phase `0/1`, i.e. the value 1.
    pub const ZERO: Phase = Phase { num: 0, den: 1 };
    /// `1/2`, i.e. the value −1.
    pub const HALF: Phase = Phase { num: 1, den: 2 };

    /// `p/q mod 1`; panics if `q = 0`.
    pub fn new(p: i64, q: i64) -> Self {
        assert!(q != 0, "phase with zero denominator");
        Self::reduce(p as i128, q as i128)
    }

    fn reduce(p: i128, q: i128) -> Self {
        let (p, q) = if q < 0 { (-p, -q) } else { (p, q) };
        let p = p.rem_euclid(q);
        let g = p.gcd(&q);
        let (p, q) = (p / g, q / g);
        Self {
            num: i64::try_from(p).expect("phase numerator overflow"),
            den: i64::try_from(q).expect("phase denominator overflow"),
        }
    }

    pub fn numerator(self) -> i64 {
        self.num
    }

    pub fn denominator(self) -> i64 {
        self.den
    }

    pub fn is_trivial(self) -> bool {
        self.num == 0
    }

    pub fn inv(self) -> Self {
        Self::reduce(-(self.num as i128), self.den as i128)
    }

    pub fn pow(self, k: i64) -> Self {
        Self::reduce(self.num as i128 * k as i128, self.den as i128)
    }

    /// `self`, or its inverse when `negative`.
    pub fn signed(self, negative: bool) -> Self {
        if negative {
            self.inv()
        } else {
            self
        }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(1.0, std::f64::consts::TAU * self.num as f64 / self.den as f64)
    }
}

impl Mul for Phase {
    type Output = Phase;

    fn mul(self, rhs: Phase) -> Phase {
        let (a, b) = (self.den as i128, rhs.den as i128);
        let l = a.lcm(&b);
        Self::reduce(self.num as i128 * (l / a) + rhs.num as i128 * (l / b), l)
    }
}

impl Div for Phase {
    type Output = Phase;

    fn div(self, rhs: Phase) -> Phase {
        self * rhs.inv()
    }
}

impl std::iter::Product for Phase {
    fn product<I: Iterator<Item = Phase>>(iter: I) -> Phase {
        iter.fold(Phase::ZERO, |a, b| a * b)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Phase {
    type Err = Error;

    /// Accepts `p/q` or an integer `p`; any sign, reduced mod 1.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a phase: {s:?}"));
        let s = s.trim();
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim().parse::<i64>().map_err(|_| bad())?, q.trim().parse::<i64>().map_err(|_| bad())?),
            None => (s.parse::<i64>().map_err(|_| bad())?, 1),
        };
        if q == 0 {
            return Err(bad());
        }
        Ok(Phase::new(p, q))
    }
}

impl serde::Serialize for Phase {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Phase {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
