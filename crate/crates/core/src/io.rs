//! Text formats shared by the library and the command-line harness.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Format a float with 17 significant digits, `%.17g` style.
///
/// Seventeen digits round-trip every finite `f64`; trailing zeros are
/// dropped so that simple values stay readable (`0.25`, `1`, `-3.5e-07`).
pub fn fmt17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        let m = trim_zeros(mantissa.to_string());
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

/// One value per line.
pub fn points_to_csv(points: &[f64]) -> String {
    let mut out = String::with_capacity(points.len() * 24);
    for p in points {
        let _ = writeln!(out, "{}", fmt17(*p));
    }
    out
}

pub fn points_from_csv(text: &str) -> Result<Vec<f64>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.parse::<f64>()
                .map_err(|e| Error::invalid(format!("bad point `{l}`: {e}")))
        })
        .collect()
}
