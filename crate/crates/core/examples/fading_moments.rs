// Phase-error moments and the Gamma approximation of the cascaded gain for
// a few concentrations.

use star_secrecy::fading::{alpha, cascaded_gamma_params, real_part_stats, GammaApprox, PhaseErrorModel};
use star_secrecy::Result;

pub fn run_example() -> Result<Vec<(f64, GammaApprox)>> {
    let a = alpha(2.0, 2.0)?;
    println!("alpha(2, 2) = {a:.10}");
    let mut fits = Vec::new();
    for kappa in [2.0, 5.0, 8.0, 50.0] {
        let phase = PhaseErrorModel::von_mises(kappa)?;
        let fit = cascaded_gamma_params(40, 0.5, a, &phase)?;
        let exact = real_part_stats(40, 0.5, a, &phase)?.second_moment();
        println!(
            "kappa {kappa:>4}: phi1 {:.6} phi2 {:.6} shape {:.3} fit mean {:.2} exact E[A] {:.2}",
            phase.phi1(),
            phase.phi2(),
            fit.shape,
            fit.mean,
            exact
        );
        fits.push((kappa, fit));
    }
    Ok(fits)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
