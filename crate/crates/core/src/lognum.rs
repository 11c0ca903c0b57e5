//! Nonnegative reals carried as their natural logarithm.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A nonnegative real `x` stored as `ln x`; zero is `-inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogNumber {
    ln: f64,
}

impl LogNumber {
    pub fn from_ln(ln: f64) -> Self {
        assert!(!ln.is_nan(), "NaN log value");
        LogNumber { ln }
    }

    pub fn zero() -> Self {
        LogNumber { ln: f64::NEG_INFINITY }
    }

    pub fn one() -> Self {
        LogNumber { ln: 0.0 }
    }

    pub fn from_f64(x: f64) -> Result<Self> {
        if !(x >= 0.0) || !x.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "LogNumber needs a finite x >= 0, got {x}"
            )));
        }
        Ok(LogNumber { ln: x.ln() })
    }

    pub fn from_u64(n: u64) -> Self {
        LogNumber { ln: (n as f64).ln() }
    }

    pub fn ln(&self) -> f64 {
        self.ln
    }

    pub fn log10(&self) -> f64 {
        self.ln / std::f64::consts::LN_10
    }

    pub fn is_zero(&self) -> bool {
        self.ln == f64::NEG_INFINITY
    }

    /// The plain value; `inf` once it leaves the `f64` range.
    pub fn to_f64(&self) -> f64 {
        self.ln.exp()
    }

    pub fn powf(&self, p: f64) -> Self {
        if self.is_zero() {
            return if p == 0.0 { LogNumber::one() } else { LogNumber::zero() };
        }
        LogNumber { ln: self.ln * p }
    }

    pub fn powi(&self, p: u64) -> Self {
        self.powf(p as f64)
    }

    /// Scientific notation with `digits` digits after the point, e.g.
    /// `1.500000E+00`.
    pub fn to_scientific(&self, digits: usize) -> String {
        if self.is_zero() {
            return format!("{:.*}E+00", digits, 0.0);
        }
        let l10 = self.log10();
        let mut exp = l10.floor();
        let mut mant = 10f64.powf(l10 - exp);
        // rounding may carry the mantissa to 10.000
        let scale = 10f64.powi(digits as i32);
        if (mant * scale).round() / scale >= 10.0 {
            mant /= 10.0;
            exp += 1.0;
        }
        let e = exp as i64;
        let sign = if e < 0 { '-' } else { '+' };
        format!("{:.*}E{}{:02}", digits, mant, sign, e.unsigned_abs())
    }
}

impl Default for LogNumber {
    fn default() -> Self {
        LogNumber::zero()
    }
}

impl Mul for LogNumber {
    type Output = LogNumber;

    fn mul(self, rhs: LogNumber) -> LogNumber {
        if self.is_zero() || rhs.is_zero() {
            return LogNumber::zero();
        }
        LogNumber { ln: self.ln + rhs.ln }
    }
}

impl Add for LogNumber {
    type Output = LogNumber;

    /// log-sum-exp
    fn add(self, rhs: LogNumber) -> LogNumber {
        let (hi, lo) = if self.ln >= rhs.ln {
            (self.ln, rhs.ln)
        } else {
            (rhs.ln, self.ln)
        };
        if lo == f64::NEG_INFINITY {
            return LogNumber { ln: hi };
        }
        LogNumber {
            ln: hi + (lo - hi).exp().ln_1p(),
        }
    }
}

impl PartialOrd for LogNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.ln.partial_cmp(&other.ln)
    }
}

impl fmt::Display for LogNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(3);
        f.write_str(&self.to_scientific(digits))
    }
}

impl FromStr for LogNumber {
    type Err = Error;

    /// Accepts `m.mmmE+e` (any float syntax Rust parses for the mantissa)
    /// without overflowing for large exponents.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (mant, exp) = match s.find(['E', 'e']) {
            Some(i) => (&s[..i], &s[i + 1..]),
            None => (s, "0"),
        };
        let mant: f64 = mant
            .parse()
            .map_err(|_| Error::Parse(format!("bad mantissa in {s:?}")))?;
        let exp: i64 = exp
            .trim_start_matches('+')
            .parse()
            .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
        if mant < 0.0 || !mant.is_finite() {
            return Err(Error::Parse(format!("negative or non-finite mantissa in {s:?}")));
        }
        if mant == 0.0 {
            return Ok(LogNumber::zero());
        }
        Ok(LogNumber {
            ln: mant.ln() + exp as f64 * std::f64::consts::LN_10,
        })
    }
}
