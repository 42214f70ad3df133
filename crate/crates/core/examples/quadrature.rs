// Gauss-Laguerre rules and the adaptive cross-check on an MGF integrand.

use star_secrecy::numerics::{integrate_exp_weighted, integrate_exp_weighted_adaptive, laguerre_rule};
use star_secrecy::Result;

/// Returns `(laguerre, adaptive)` values of `∫ (1 - (1 + 4z)^-3)/z e^{-z} dz`.
pub fn run_example() -> Result<(f64, f64)> {
    for order in [5, 30, 300] {
        let rule = laguerre_rule(order)?;
        let mass: f64 = rule.weights().iter().sum();
        let first: f64 = rule.iter().map(|(z, w)| z * w).sum();
        println!("L = {order:>3}: Σw = {mass:.15}, Σwz = {first:.12}, largest node {:.1}", rule.nodes()[order - 1]);
    }

    let f = |z: f64| -(-3.0 * (4.0 * z).ln_1p()).exp_m1() / z;
    let lag = integrate_exp_weighted(f, &laguerre_rule(300)?)?;
    let ada = integrate_exp_weighted_adaptive(f);
    println!("Gamma(3) MGF integrand: Laguerre {lag:.12}, adaptive {:.12} ({} subdivisions)", ada.value, ada.subdivisions);
    Ok((lag, ada.value))
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
