use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::linear_fit;

/// One `ν` value of a complexity scan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcRow {
    pub nu: f64,
    pub sep: u64,
    pub span: u64,
}

/// Growth exponents of `Sep` and `Span` in `1/ν` at fixed `δ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexityFit {
    pub delta: f64,
    pub rows: Vec<AcRow>,
    /// Slope of `ln sep` against `-ln ν`.
    pub slope_lower: f64,
    /// Slope of `ln span` against `-ln ν`.
    pub slope_upper: f64,
    /// r² of the upper (span) regression.
    pub r_squared: f64,
    pub r_squared_lower: f64,
}

pub const MIN_ROWS: usize = 4;
pub const MIN_DECADES: f64 = 1.5;

pub fn ac_fit(delta: f64, rows: &[AcRow]) -> Result<ComplexityFit> {
    if rows.len() < MIN_ROWS {
        return Err(Error::invalid(format!(
            "complexity fit needs {MIN_ROWS} rows, got {}",
            rows.len()
        )));
    }
    if rows.iter().any(|r| r.sep == 0 || r.span == 0 || !(r.nu > 0.0)) {
        return Err(Error::invalid("complexity rows need positive ν and counts"));
    }
    let lo = rows.iter().map(|r| r.nu).fold(f64::INFINITY, f64::min);
    let hi = rows.iter().map(|r| r.nu).fold(0.0, f64::max);
    if (hi / lo).log10() < MIN_DECADES - 1e-9 {
        return Err(Error::invalid(format!(
            "ν range [{lo}, {hi}] spans fewer than {MIN_DECADES} decades"
        )));
    }
    let fit = |count: fn(&AcRow) -> u64| {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .map(|r| (-r.nu.ln(), (count(r) as f64).ln()))
            .collect();
        linear_fit(&pts).ok_or_else(|| Error::Undefined("repeated ν values only".into()))
    };
    let lower = fit(|r| r.sep)?;
    let upper = fit(|r| r.span)?;
    Ok(ComplexityFit {
        delta,
        rows: rows.to_vec(),
        slope_lower: lower.slope,
        slope_upper: upper.slope,
        r_squared: upper.r_squared,
        r_squared_lower: lower.r_squared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nus() -> Vec<f64> {
        (0..=16).map(|i| 1e-3 * 10f64.powf(i as f64 / 8.0)).collect()
    }

    #[test]
    fn constant_counts_have_zero_slope() {
        let rows: Vec<AcRow> = nus().into_iter().map(|nu| AcRow { nu, sep: 1, span: 1 }).collect();
        let f = ac_fit(0.2, &rows).unwrap();
        assert_eq!(f.slope_lower, 0.0);
        assert_eq!(f.slope_upper, 0.0);
    }

    #[test]
    fn inverse_counts_have_unit_slope() {
        let rows: Vec<AcRow> = nus()
            .into_iter()
            .map(|nu| AcRow {
                nu,
                sep: (1.0 / nu).ceil() as u64,
                span: (1.0 / nu).ceil() as u64,
            })
            .collect();
        let f = ac_fit(0.2, &rows).unwrap();
        assert!((f.slope_lower - 1.0).abs() < 0.01);
    }

    #[test]
    fn rejects_short_or_bad_input() {
        let rows = [AcRow { nu: 0.1, sep: 1, span: 1 }; 4];
        assert!(ac_fit(0.2, &rows).is_err());
        let mut rows: Vec<AcRow> = nus().into_iter().map(|nu| AcRow { nu, sep: 1, span: 1 }).collect();
        rows[3].sep = 0;
        assert!(ac_fit(0.2, &rows).is_err());
    }
}
