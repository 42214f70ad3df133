//! Special functions and quadrature behind the closed-form capacities.

mod adaptive;
mod bessel;
mod gamma;
mod laguerre;

pub use adaptive::{integrate_exp_weighted_adaptive, AdaptiveIntegrator, AdaptiveResult};
pub use bessel::{bessel_i, bessel_i_scaled, trig_moment};
pub use gamma::{gamma, gamma_p, ln_gamma};
pub use laguerre::{
    integrate_exp_weighted, laguerre_rule, QuadratureRule, DEFAULT_LAGUERRE_ORDER,
    MAX_LAGUERRE_ORDER,
};

use crate::Result;

/// Anything that can evaluate `∫₀^∞ f(z) e^{-z} dz`.
///
/// Implemented by [`QuadratureRule`] (the closed-form path) and by
/// [`AdaptiveIntegrator`] (the cross-check path), so capacity formulas can be
/// run through either.
pub trait ExpWeightedIntegral {
    fn integrate(&self, f: &dyn Fn(f64) -> f64) -> Result<f64>;
}
