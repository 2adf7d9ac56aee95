//! Modified Bessel function of the first kind, order zero.

use std::f64::consts::TAU;

/// Power series for `x ≤ SWITCH`, asymptotic expansion above. Both branches
/// agree to a few ulps at the switch point.
const SWITCH: f64 = 15.0;

/// `I₀(x)` for `x ≥ 0`. Overflows to `+∞` above `x ≈ 713`; use
/// [`log_bessel_i0`] for large arguments.
pub fn bessel_i0(x: f64) -> f64 {
    let x = x.abs();
    if x <= SWITCH {
        series(x)
    } else {
        let (scale_log, s) = asymptotic(x);
        scale_log.exp() * s
    }
}

/// `log I₀(x)` without overflow.
pub fn log_bessel_i0(x: f64) -> f64 {
    let x = x.abs();
    if x <= SWITCH {
        series(x).ln()
    } else {
        let (scale_log, s) = asymptotic(x);
        scale_log + s.ln()
    }
}

/// `Σ (x/2)^{2m} / (m!)²`; all terms positive.
fn series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut m = 1.0;
    loop {
        term *= q / (m * m);
        sum += term;
        if term <= sum * 1e-17 {
            return sum;
        }
        m += 1.0;
    }
}

/// Returns `(x − ½ log(2πx), Σ_k ((2k−1)!!)² / (k! (8x)^k))`, truncated at
/// the smallest term.
fn asymptotic(x: f64) -> (f64, f64) {
    let mut term = 1.0_f64;
    let mut sum = 1.0;
    let mut k = 1.0_f64;
    loop {
        let next = term * (2.0 * k - 1.0).powi(2) / (k * 8.0 * x);
        if next >= term || next <= sum * 1e-17 {
            if next < term {
                sum += next;
            }
            break;
        }
        sum += next;
        term = next;
        k += 1.0;
    }
    (x - 0.5 * (TAU * x).ln(), sum)
}
