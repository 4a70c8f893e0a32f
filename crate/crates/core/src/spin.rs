//! Exact half-integer spin and magnetic labels.
//!
//! Both are stored as twice their physical value so that `j = 3/2` is the
//! integer `3` and no floating-point label ever needs comparing.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpinError {
    #[error("invalid spin label `{0}`: expected a non-negative integer or half-integer such as 1, 3/2 or 2.5")]
    Parse(String),
    #[error("dimension {0} does not correspond to a spin (must be at least 1)")]
    BadDimension(usize),
    #[error("magnetic label m={m} is not admissible for j={j}")]
    InvalidMagnetic { j: Spin, m: Magnetic },
}

/// Spin quantum number `j`, stored as `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Spin(u32);

impl Spin {
    pub const ZERO: Spin = Spin(0);
    pub const HALF: Spin = Spin(1);

    pub const fn from_twice(twice: u32) -> Self {
        Spin(twice)
    }

    /// Spin whose multiplet has `dim = 2j + 1` levels.
    pub fn from_dim(dim: usize) -> Result<Self, SpinError> {
        if dim == 0 || dim > u32::MAX as usize {
            return Err(SpinError::BadDimension(dim));
        }
        Ok(Spin(dim as u32 - 1))
    }

    pub const fn twice(self) -> u32 {
        self.0
    }

    pub const fn dim(self) -> usize {
        self.0 as usize + 1
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// Magnetic labels in basis order, `m = j, j-1, ..., -j`.
    pub fn magnetic_labels(self) -> impl DoubleEndedIterator<Item = Magnetic> + ExactSizeIterator {
        let j2 = self.0 as i32;
        (0..self.dim()).map(move |i| Magnetic(j2 - 2 * i as i32))
    }

    /// Basis position of `m` (0 for `m = j`).
    pub fn index_of(self, m: Magnetic) -> Result<usize, SpinError> {
        let j2 = self.0 as i32;
        if m.0.abs() > j2 || (j2 - m.0) % 2 != 0 {
            return Err(SpinError::InvalidMagnetic { j: self, m });
        }
        Ok(((j2 - m.0) / 2) as usize)
    }

    pub fn magnetic_at(self, index: usize) -> Magnetic {
        debug_assert!(index < self.dim());
        Magnetic(self.0 as i32 - 2 * index as i32)
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_halves(i64::from(self.0), f)
    }
}

impl FromStr for Spin {
    type Err = SpinError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let twice = parse_halves(s).ok_or_else(|| SpinError::Parse(s.to_owned()))?;
        u32::try_from(twice)
            .map(Spin)
            .map_err(|_| SpinError::Parse(s.to_owned()))
    }
}

/// Magnetic quantum number `m`, stored as `2m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Magnetic(i32);

impl Magnetic {
    pub const fn from_twice(twice: i32) -> Self {
        Magnetic(twice)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }
}

impl fmt::Display for Magnetic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_halves(i64::from(self.0), f)
    }
}

impl FromStr for Magnetic {
    type Err = SpinError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let twice = parse_halves(s).ok_or_else(|| SpinError::Parse(s.to_owned()))?;
        i32::try_from(twice)
            .map(Magnetic)
            .map_err(|_| SpinError::Parse(s.to_owned()))
    }
}

fn fmt_halves(twice: i64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if twice % 2 == 0 {
        write!(f, "{}", twice / 2)
    } else {
        write!(f, "{twice}/2")
    }
}

/// Accepts `3`, `-1/2`, `2.5`, `-0.5`.
fn parse_halves(s: &str) -> Option<i64> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().ok()?;
        return match den.trim() {
            "1" => num.checked_mul(2),
            "2" => Some(num),
            _ => None,
        };
    }
    if let Ok(int) = s.parse::<i64>() {
        return int.checked_mul(2);
    }
    let x: f64 = s.parse().ok()?;
    let twice = 2.0 * x;
    if twice.is_finite() && twice == twice.round() && twice.abs() < 1e9 {
        Some(twice as i64)
    } else {
        None
    }
}
