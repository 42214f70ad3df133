//! Ergodic secrecy analysis for a UAV-mounted STAR-RIS serving a two-user
//! uplink NOMA pair, with von Mises distributed phase-shift errors.
//!
//! The crate is organised bottom-up:
//!
//! - [`numerics`]: modified Bessel functions, the Gamma function,
//!   Gauss-Laguerre rules and an adaptive integrator over `(0, ∞)`.
//! - [`scenario`]: geometry, path loss and the four SNR scale factors.
//! - [`fading`]: Nakagami moments, the Gamma approximation of the cascaded
//!   legitimate gains and the exponential eavesdropper gain.
//! - [`rates`]: MGF-based closed-form ergodic capacities and secrecy rates.
//! - [`monte_carlo`]: the brute-force oracle for everything in [`rates`].
//! - [`optimizer`]: alternating grid search over the UAV position.
//! - [`experiments`]: figure-style sweeps and the validation report that back
//!   the `star-secrecy` binary.
//!
//! ```
//! use star_secrecy::{numerics::laguerre_rule, rates::evaluate_scenario, scenario::ScenarioConfig};
//!
//! let rule = laguerre_rule(300).unwrap();
//! let report = evaluate_scenario(&ScenarioConfig::default(), &rule).unwrap();
//! assert!(report.wssr > 0.0);
//! ```

pub mod error;
pub mod experiments;
pub mod fading;
pub mod monte_carlo;
pub mod numerics;
pub mod optimizer;
mod output;
pub mod rates;
pub mod scenario;

pub use error::{Error, Result};
