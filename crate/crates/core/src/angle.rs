//! Exact non-negative rational multiples of π.

use std::fmt;
use std::ops::Add;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AngleError {
    #[error("angle numerator must be non-negative, got {0}")]
    Negative(i64),
    #[error("angle denominator must be at least 1, got {0}")]
    BadDenominator(i64),
}

/// A duration or phase `num·π/den`, always reduced and non-negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct RationalAngle(Ratio<i64>);

impl RationalAngle {
    pub const ZERO: Self = Self(Ratio::new_raw(0, 1));
    pub const PI: Self = Self(Ratio::new_raw(1, 1));
    pub const TWO_PI: Self = Self(Ratio::new_raw(2, 1));

    /// `num·π/den`. Panics when `den` is zero.
    pub fn new(num: u32, den: u32) -> Self {
        assert!(den > 0, "angle denominator must be positive");
        Self(Ratio::new(i64::from(num), i64::from(den)))
    }

    /// Checked constructor for untrusted input.
    pub fn try_new(num: i64, den: i64) -> Result<Self, AngleError> {
        if den < 1 {
            return Err(AngleError::BadDenominator(den));
        }
        if num < 0 {
            return Err(AngleError::Negative(num));
        }
        Ok(Self(Ratio::new(num, den)))
    }

    pub(crate) fn from_ratio(r: Ratio<i64>) -> Self {
        debug_assert!(r >= Ratio::from_integer(0));
        Self(r)
    }

    /// Value as a multiple of π.
    pub fn ratio(&self) -> Ratio<i64> {
        self.0
    }

    pub fn num(&self) -> i64 {
        *self.0.numer()
    }

    pub fn den(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.num() == 0
    }

    pub fn radians(&self) -> f64 {
        self.num() as f64 * std::f64::consts::PI / self.den() as f64
    }

    /// `self - rhs`, or `None` if the result would be negative.
    pub fn checked_sub(&self, rhs: Self) -> Option<Self> {
        (self.0 >= rhs.0).then(|| Self(self.0 - rhs.0))
    }

    /// `|self - rhs|`.
    pub fn abs_diff(&self, rhs: Self) -> Self {
        if self.0 >= rhs.0 {
            Self(self.0 - rhs.0)
        } else {
            Self(rhs.0 - self.0)
        }
    }

    /// Multiplies by the non-negative rational `num/den`.
    pub fn scale(&self, num: i64, den: i64) -> Self {
        assert!(num >= 0 && den > 0, "scale factor must be non-negative");
        Self(self.0 * Ratio::new(num, den))
    }

    /// Remainder modulo `modulus`; a zero modulus maps everything to zero.
    pub fn rem(&self, modulus: Self) -> Self {
        if modulus.is_zero() {
            return Self::ZERO;
        }
        let q = (self.0 / modulus.0).floor();
        Self(self.0 - q * modulus.0)
    }

    /// Least common multiple of two positive rationals.
    pub fn lcm(&self, other: Self) -> Self {
        let (a, b) = (self.0, other.0);
        Self(Ratio::new(a.numer().lcm(b.numer()), a.denom().gcd(b.denom())))
    }

    /// Recovers `θ ∈ [0, 2π)` with `e^{-iθ} = z` when θ is `kπ/d` for some `d ≤ max_den`.
    pub fn from_unit_phase(z: num_complex::Complex64, max_den: i64, tol: f64) -> Option<Self> {
        if (z.norm() - 1.0).abs() > tol {
            return None;
        }
        let mut theta = -z.arg();
        if theta < 0.0 {
            theta += 2.0 * std::f64::consts::PI;
        }
        let x = theta / std::f64::consts::PI;
        for den in 1..=max_den {
            let num = (x * den as f64).round();
            let candidate = Self(Ratio::new(num as i64, den)).rem(Self::TWO_PI);
            let back = num_complex::Complex64::from_polar(1.0, -candidate.radians());
            if (back - z).norm() <= tol {
                return Some(candidate);
            }
        }
        None
    }
}

impl Add for RationalAngle {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl std::iter::Sum for RationalAngle {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}

impl fmt::Display for RationalAngle {
    /// Exact form such as `0`, `π`, `3π/2`, `π/4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = (self.num(), self.den());
        match (n, d) {
            (0, _) => write!(f, "0"),
            (1, 1) => write!(f, "π"),
            (n, 1) => write!(f, "{n}π"),
            (1, d) => write!(f, "π/{d}"),
            (n, d) => write!(f, "{n}π/{d}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AngleRepr {
    pi_num: i64,
    pi_den: i64,
}

impl Serialize for RationalAngle {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        AngleRepr { pi_num: self.num(), pi_den: self.den() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalAngle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = AngleRepr::deserialize(d)?;
        Self::try_new(repr.pi_num, repr.pi_den).map_err(serde::de::Error::custom)
    }
}
