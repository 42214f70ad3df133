//! Modified Bessel functions of the first kind, integer order.

use std::f64::consts::PI;

use crate::{Error, Result};

/// Below this argument the power series is summed directly; above it the
/// large-argument expansion of `e^{-x} I_p(x)` is used.
const SERIES_LIMIT: f64 = 15.0;

fn check_arg(x: f64) -> Result<()> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!(
            "Bessel argument must be finite and non-negative, got {x}"
        )));
    }
    Ok(())
}

/// `Σ_k (x/2)^{2k+p} / (k! (k+p)!)`
fn series(order: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=order {
        term *= half / k as f64;
    }
    if term == 0.0 {
        return 0.0;
    }
    let q = half * half;
    let p = order as f64;
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (k + p));
        sum += term;
        if term <= sum * 1e-17 {
            return sum;
        }
    }
}

/// Large-argument expansion of `e^{-x} I_p(x)`, truncated at the smallest term.
fn asymptotic_scaled(order: u32, x: f64) -> f64 {
    let mu = 4.0 * (order as f64).powi(2);
    let mut term = 1.0_f64;
    let mut sum = 1.0;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        let next = -term * (mu - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum / (2.0 * PI * x).sqrt()
}

/// `I_p(x)` for integer order `p` and `x ≥ 0`.
///
/// Overflows to `+∞` once `e^x` does (x ≳ 709); use [`bessel_i_scaled`] there.
pub fn bessel_i(order: u32, x: f64) -> Result<f64> {
    check_arg(x)?;
    if x <= SERIES_LIMIT {
        Ok(series(order, x))
    } else {
        Ok(asymptotic_scaled(order, x) * x.exp())
    }
}

/// Exponentially scaled `e^{-x} I_p(x)`; finite for every finite `x ≥ 0`.
pub fn bessel_i_scaled(order: u32, x: f64) -> Result<f64> {
    check_arg(x)?;
    if x <= SERIES_LIMIT {
        Ok(series(order, x) * (-x).exp())
    } else {
        Ok(asymptotic_scaled(order, x))
    }
}

/// Trigonometric moment `φ_p = E[e^{ipθ}] = I_p(κ)/I_0(κ)` of a zero-mean von
/// Mises angle with concentration `κ`.
pub fn trig_moment(order: u32, kappa: f64) -> Result<f64> {
    if !kappa.is_finite() || kappa < 0.0 {
        return Err(Error::Domain(format!(
            "concentration must be finite and non-negative, got {kappa}"
        )));
    }
    if order == 0 {
        return Ok(1.0);
    }
    if kappa == 0.0 {
        return Ok(0.0);
    }
    let ratio = if kappa <= SERIES_LIMIT {
        series(order, kappa) / series(0, kappa)
    } else {
        asymptotic_scaled(order, kappa) / asymptotic_scaled(0, kappa)
    };
    Ok(ratio.min(1.0))
}
