use std::fmt;
use std::str::FromStr;

use thiserror::Error;

const SCALE: u32 = 1_000_000;
const FRACTION_DIGITS: usize = 6;

/// A confidence degree in `[0, 1]`, stored as an exact count of millionths so
/// that threshold comparisons never depend on float rounding.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Degree(u32);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DegreeError {
    #[error("malformed confidence degree `{0}`")]
    Malformed(String),
    #[error("confidence degree `{0}` is outside [0, 1]")]
    OutOfRange(String),
    #[error("confidence degree `{0}` has more than 6 decimal places")]
    TooPrecise(String),
}

impl Degree {
    pub const ZERO: Degree = Degree(0);
    pub const ONE: Degree = Degree(SCALE);

    pub fn from_millionths(m: u32) -> Option<Degree> {
        (m <= SCALE).then_some(Degree(m))
    }

    pub fn millionths(self) -> u32 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / SCALE as f64
    }

    /// Converts a float by way of its shortest decimal representation, so
    /// `0.75_f64` becomes exactly `0.75`.
    pub fn from_f64(x: f64) -> Result<Degree, DegreeError> {
        if !x.is_finite() {
            return Err(DegreeError::Malformed(x.to_string()));
        }
        format!("{x}").parse()
    }
}

impl FromStr for Degree {
    type Err = DegreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || DegreeError::Malformed(s.to_string());
        let (int, frac) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        if int.is_empty() || !int.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        if !frac.bytes().all(|b| b.is_ascii_digit()) || (s.contains('.') && frac.is_empty()) {
            return Err(malformed());
        }
        let frac_trimmed = frac.trim_end_matches('0');
        if frac_trimmed.len() > FRACTION_DIGITS {
            return Err(DegreeError::TooPrecise(s.to_string()));
        }
        let int_val: u64 = int
            .parse()
            .map_err(|_| DegreeError::OutOfRange(s.to_string()))?;
        let mut frac_val: u64 = 0;
        for (i, b) in frac_trimmed.bytes().enumerate() {
            frac_val += u64::from(b - b'0') * 10u64.pow((FRACTION_DIGITS - 1 - i) as u32);
        }
        let total = int_val
            .checked_mul(SCALE as u64)
            .and_then(|v| v.checked_add(frac_val))
            .ok_or_else(|| DegreeError::OutOfRange(s.to_string()))?;
        if total > SCALE as u64 {
            return Err(DegreeError::OutOfRange(s.to_string()));
        }
        Ok(Degree(total as u32))
    }
}

impl fmt::Display for Degree {
    /// Shortest decimal with at least one fractional digit: `0.8`, `0.95`, `1.0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let int = self.0 / SCALE;
        let frac = self.0 % SCALE;
        let digits = format!("{frac:06}");
        let digits = digits.trim_end_matches('0');
        if digits.is_empty() {
            write!(f, "{int}.0")
        } else {
            write!(f, "{int}.{digits}")
        }
    }
}
