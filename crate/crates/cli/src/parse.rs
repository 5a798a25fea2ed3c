//! Number and list parsing for command-line values.

use num_rational::Ratio;
use num_traits::ToPrimitive;

use crate::error::CliError;

/// Parses a decimal (`0.25`) or an exact fraction (`1/3`).
pub fn parse_number(s: &str) -> Result<f64, CliError> {
    let s = s.trim();
    let bad = || CliError::Usage(format!("not a number: {s:?}"));
    if s.contains('/') {
        let r: Ratio<i64> = s.parse().map_err(|_| bad())?;
        return r.to_f64().ok_or_else(bad);
    }
    let v: f64 = s.parse().map_err(|_| bad())?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

/// Parses a list separated by `sep`; empty input gives an empty list.
pub fn parse_list(s: &str, sep: char) -> Result<Vec<f64>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(sep).map(parse_number).collect()
}

/// Renders a float with 17 significant digits, which round-trips exactly.
pub fn render_f64(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{x:.16e}")
}

/// Inverse of [`render_f64`]; also accepts plain decimals.
pub fn parse_rendered(s: &str) -> Result<f64, CliError> {
    match s.trim() {
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        t => t.parse().map_err(|_| CliError::Usage(format!("not a number: {t:?}"))),
    }
}
