// Analytic rates against simulated channel realisations. Pass the trial
// count as the first argument (default 20000).

use star_secrecy::experiments::{validate, ValidationReport};
use star_secrecy::monte_carlo::McSettings;
use star_secrecy::numerics::laguerre_rule;
use star_secrecy::scenario::ScenarioConfig;
use star_secrecy::Result;

pub fn run_example(trials: u64) -> Result<ValidationReport> {
    let mc = McSettings {
        trials,
        seed: 1,
        ..McSettings::default()
    };
    let report = validate(&ScenarioConfig::default(), &mc, &laguerre_rule(300)?)?;
    for q in &report.quantities {
        println!(
            "{:<9} analytic {:.6}  simulated {:.6} ± {:.6}  gap {:.2}%",
            q.quantity,
            q.analytic,
            q.monte_carlo,
            q.std_error,
            100.0 * q.relative_gap
        );
    }
    println!(
        "eavesdropper gain mean supports {:?}; KS distance of A vs Gamma fit {:.4}",
        report.eaves_mean.supported, report.gamma_fit.ks_distance
    );
    Ok(report)
}

fn main() -> Result<()> {
    let trials = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(20_000);
    run_example(trials).map(|_| ())
}
