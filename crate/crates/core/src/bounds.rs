//! Headline counting bounds, evaluated in log space.
//!
//! A surface of genus `g` with `m + 1` holes has a free fundamental group on
//! `2g + m` generators; every bound below is a power with that exponent.

use std::f64::consts::{LN_2, PI};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lognum::LogNumber;

/// Genus `g` with `m + 1` holes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SurfaceTopology {
    pub g: u32,
    pub m: u32,
}

impl SurfaceTopology {
    pub fn new(g: u32, m: u32) -> Self {
        SurfaceTopology { g, m }
    }

    /// `2g + m`, the rank of the fundamental group.
    pub fn rank(&self) -> u64 {
        2 * u64::from(self.g) + u64::from(self.m)
    }

    pub fn is_torus_with_hole(&self) -> bool {
        self.g == 1 && self.m == 0
    }
}

/// Which extremal length feeds [`thm1_bound_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lambda {
    Four,
    /// Only for a torus with one hole.
    Three,
}

fn check_lambda(name: &str, v: f64) -> Result<()> {
    if !(v >= 0.0 && v.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "{name} must be finite and >= 0, got {v}"
        )));
    }
    Ok(())
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "{name} must be finite and > 0, got {v}"
        )));
    }
    Ok(())
}

fn check_alpha_sigma(alpha: f64, sigma: f64) -> Result<()> {
    if !(alpha >= 1.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!("alpha must be >= 1, got {alpha}")));
    }
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(Error::InvalidArgument(format!("sigma must lie in (0, 1), got {sigma}")));
    }
    Ok(())
}

/// `3 (3/2 e^{24 pi lambda4})^{2g+m}`.
pub fn thm1_bound(t: SurfaceTopology, lambda4: f64) -> Result<LogNumber> {
    thm1_bound_with(t, lambda4, Lambda::Four)
}

/// As [`thm1_bound`], with `lambda3` allowed in place of `lambda4` on a
/// torus with one hole.
pub fn thm1_bound_with(t: SurfaceTopology, lambda: f64, kind: Lambda) -> Result<LogNumber> {
    check_lambda("lambda", lambda)?;
    if kind == Lambda::Three && !t.is_torus_with_hole() {
        return Err(Error::InvalidArgument(
            "lambda3 may replace lambda4 only for a torus with one hole (g = 1, m = 0)".into(),
        ));
    }
    let factor = 1.5f64.ln() + 24.0 * PI * lambda;
    Ok(LogNumber::from_ln(3f64.ln() + t.rank() as f64 * factor))
}

/// Maps to the thrice punctured sphere: same value as [`thm1_bound`].
pub fn cor1a_bound(t: SurfaceTopology, lambda4: f64) -> Result<LogNumber> {
    thm1_bound(t, lambda4)
}

/// `(2 3^6 5^6 e^{36 pi lambda8})^{2g+m}`.
pub fn thm2_bound(t: SurfaceTopology, lambda8: f64) -> Result<LogNumber> {
    check_lambda("lambda8", lambda8)?;
    let factor = LN_2 + 6.0 * 3f64.ln() + 6.0 * 5f64.ln() + 36.0 * PI * lambda8;
    Ok(LogNumber::from_ln(t.rank() as f64 * factor))
}

/// Non-trivial (1,1)-bundles over punctured surfaces: same value as
/// [`thm2_bound`].
pub fn cor1b_bound(t: SurfaceTopology, lambda8: f64) -> Result<LogNumber> {
    thm2_bound(t, lambda8)
}

/// `(15 e^{6 pi lambda8})^{6(2g+m)}`.
pub fn thm3_bound(t: SurfaceTopology, lambda8: f64) -> Result<LogNumber> {
    check_lambda("lambda8", lambda8)?;
    Ok(LogNumber::from_ln(
        6.0 * t.rank() as f64 * (15f64.ln() + 6.0 * PI * lambda8),
    ))
}

/// [`thm3_bound`] written as `(3^6 5^6 e^{36 pi lambda8})^{2g+m}`.
pub fn thm3_bound_expanded(t: SurfaceTopology, lambda8: f64) -> Result<LogNumber> {
    check_lambda("lambda8", lambda8)?;
    let factor = 6.0 * 3f64.ln() + 6.0 * 5f64.ln() + 36.0 * PI * lambda8;
    Ok(LogNumber::from_ln(t.rank() as f64 * factor))
}

/// `2^{2g+m}`, for reducible (1,1)-bundles.
pub fn reducible11_bound(t: SurfaceTopology) -> LogNumber {
    LogNumber::from_ln(t.rank() as f64 * LN_2)
}

/// `L-` budget `factors * 2 pi lambda` for a product of `factors` elements,
/// each of `L-` at most `2 pi lambda`.
pub fn lemma3_product_budget(lambda: f64, factors: u32) -> Result<f64> {
    check_lambda("lambda", lambda)?;
    if ![2, 4, 6].contains(&factors) {
        return Err(Error::InvalidArgument(format!(
            "factor count must be 2, 4 or 6, got {factors}"
        )));
    }
    Ok(f64::from(factors) * 2.0 * PI * lambda)
}

/// `7 e^{192 pi (2 alpha + 1) / sigma}` on `T^{alpha,sigma}`.
pub fn prop1a_upper(alpha: f64, sigma: f64) -> Result<LogNumber> {
    check_alpha_sigma(alpha, sigma)?;
    Ok(LogNumber::from_ln(7f64.ln() + 192.0 * PI * (2.0 * alpha + 1.0) / sigma))
}

/// `c e^{C alpha / sigma}`; `C` and `c` are not known numerically and must
/// be supplied.
pub fn prop1a_lower(alpha: f64, sigma: f64, big_c: f64, small_c: f64) -> Result<LogNumber> {
    check_alpha_sigma(alpha, sigma)?;
    check_positive("C", big_c)?;
    check_positive("c", small_c)?;
    Ok(LogNumber::from_ln(small_c.ln() + big_c * alpha / sigma))
}

/// `2^{alpha / (10 C delta) - 1}`, the count produced by the lower-bound
/// construction with slalom constant `C`.
pub fn prop1a_lower_slalom(alpha: f64, delta: f64, c_slalom: f64) -> Result<LogNumber> {
    if !(alpha >= 1.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!("alpha must be >= 1, got {alpha}")));
    }
    check_positive("delta", delta)?;
    check_positive("C", c_slalom)?;
    Ok(LogNumber::from_ln(LN_2 * (alpha / (10.0 * c_slalom * delta) - 1.0)))
}

/// `(C1 e^{C2/sigma}, C1' e^{C2'/sigma})`, upper and lower.
pub fn prop1b_bounds(sigma: f64, c1: f64, c2: f64, c1p: f64, c2p: f64) -> Result<(LogNumber, LogNumber)> {
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(Error::InvalidArgument(format!("sigma must lie in (0, 1), got {sigma}")));
    }
    for (name, v) in [("C1", c1), ("C2", c2), ("C1'", c1p), ("C2'", c2p)] {
        check_positive(name, v)?;
    }
    Ok((
        LogNumber::from_ln(c1.ln() + c2 / sigma),
        LogNumber::from_ln(c1p.ln() + c2p / sigma),
    ))
}

/// `{"ln": .., "decimal": "d.dddE+e"}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundValue {
    pub ln: f64,
    pub decimal: String,
}

impl From<LogNumber> for BoundValue {
    fn from(x: LogNumber) -> Self {
        BoundValue {
            ln: x.ln(),
            decimal: x.to_scientific(3),
        }
    }
}

/// A bound with its formula and inputs, as printed by the command line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub bound: BoundValue,
    pub formula: String,
    pub inputs: Value,
}

impl BoundReport {
    pub fn new(x: LogNumber, formula: &str, inputs: Value) -> Self {
        BoundReport {
            bound: x.into(),
            formula: formula.to_string(),
            inputs,
        }
    }
}

pub fn thm1_report(t: SurfaceTopology, lambda: f64, kind: Lambda) -> Result<BoundReport> {
    let (formula, key) = match kind {
        Lambda::Four => ("3*(3/2*exp(24*pi*lambda4))^(2g+m)", "lambda4"),
        Lambda::Three => ("3*(3/2*exp(24*pi*lambda3))^(2g+m)", "lambda3"),
    };
    Ok(BoundReport::new(
        thm1_bound_with(t, lambda, kind)?,
        formula,
        json!({"g": t.g, "m": t.m, key: lambda}),
    ))
}

pub fn thm2_report(t: SurfaceTopology, lambda8: f64) -> Result<BoundReport> {
    Ok(BoundReport::new(
        thm2_bound(t, lambda8)?,
        "(2*3^6*5^6*exp(36*pi*lambda8))^(2g+m)",
        json!({"g": t.g, "m": t.m, "lambda8": lambda8}),
    ))
}

pub fn thm3_report(t: SurfaceTopology, lambda8: f64) -> Result<BoundReport> {
    Ok(BoundReport::new(
        thm3_bound(t, lambda8)?,
        "(15*exp(6*pi*lambda8))^(6*(2g+m))",
        json!({"g": t.g, "m": t.m, "lambda8": lambda8}),
    ))
}

pub fn prop1a_upper_report(alpha: f64, sigma: f64) -> Result<BoundReport> {
    Ok(BoundReport::new(
        prop1a_upper(alpha, sigma)?,
        "7*exp(192*pi*(2*alpha+1)/sigma)",
        json!({"alpha": alpha, "sigma": sigma}),
    ))
}

pub fn prop1a_lower_report(alpha: f64, sigma: f64, big_c: f64, small_c: f64) -> Result<BoundReport> {
    Ok(BoundReport::new(
        prop1a_lower(alpha, sigma, big_c, small_c)?,
        "c*exp(C*alpha/sigma)",
        json!({"alpha": alpha, "sigma": sigma, "C": big_c, "c": small_c}),
    ))
}

pub fn prop1b_reports(sigma: f64, c1: f64, c2: f64, c1p: f64, c2p: f64) -> Result<[BoundReport; 2]> {
    let (hi, lo) = prop1b_bounds(sigma, c1, c2, c1p, c2p)?;
    let inputs = json!({"sigma": sigma, "C1": c1, "C2": c2, "C1'": c1p, "C2'": c2p});
    Ok([
        BoundReport::new(hi, "C1*exp(C2/sigma)", inputs.clone()),
        BoundReport::new(lo, "C1'*exp(C2'/sigma)", inputs),
    ])
}
