//! Log-gamma and the beta function on the positive reals.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;

// Lanczos coefficients for g = 7, n = 9.
#[allow(clippy::excessive_precision, clippy::unreadable_literal)]
const LANCZOS: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

fn ln_gamma_lanczos(x: f64) -> f64 {
    // Valid for x >= 0.5.
    let z = x - 1.0;
    let mut series = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + series.ln()
}

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("log_gamma needs a finite x > 0, got {x}")));
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    if x < 0.5 {
        // Reflection: Γ(x)Γ(1-x) = π / sin(πx).
        return Ok((PI / (PI * x).sin()).ln() - ln_gamma_lanczos(1.0 - x));
    }
    Ok(ln_gamma_lanczos(x))
}

/// `ln B(x, y)`.
pub fn log_beta(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) {
        return Err(Error::Domain(format!("beta needs x, y > 0, got ({x}, {y})")));
    }
    Ok(log_gamma(x)? + log_gamma(y)? - log_gamma(x + y)?)
}

/// `B(x, y) = Γ(x)Γ(y)/Γ(x+y)`, evaluated in log space.
pub fn beta(x: f64, y: f64) -> Result<f64> {
    log_beta(x, y).map(f64::exp)
}
