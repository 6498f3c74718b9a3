//! Modified Bessel function of the first kind, order zero.

use std::f64::consts::PI;

/// Below this argument the power series is used, above it the asymptotic expansion.
pub const I0_SWITCH: f64 = 16.0;

/// `I₀(x)` to about 1e-15 relative accuracy.
pub fn bessel_i0(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= I0_SWITCH {
        i0_series(ax)
    } else {
        i0_asymptotic(ax)
    }
}

/// `e^{-|x|} I₀(x)`, finite for large arguments.
pub fn bessel_i0_scaled(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= I0_SWITCH {
        i0_series(ax) * (-ax).exp()
    } else {
        i0_asymptotic_scaled(ax)
    }
}

fn i0_series(x: f64) -> f64 {
    let y = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= y / (k * k);
        sum += term;
        if term < 1e-17 * sum {
            return sum;
        }
    }
}

fn i0_asymptotic_scaled(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k: f64 = 0.0;
    loop {
        k += 1.0;
        let next = term * (2.0 * k - 1.0).powi(2) / (k * 8.0 * x);
        // stop at the smallest term of the divergent series
        if next >= term || next < 1e-17 * sum {
            break;
        }
        term = next;
        sum += term;
    }
    sum / (2.0 * PI * x).sqrt()
}

fn i0_asymptotic(x: f64) -> f64 {
    i0_asymptotic_scaled(x) * x.exp()
}
