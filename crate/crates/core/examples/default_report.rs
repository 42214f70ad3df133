// Analytic capacities and secrecy rates of the default scenario, with the
// same scenario under swapped decode order.

use star_secrecy::numerics::{laguerre_rule, DEFAULT_LAGUERRE_ORDER};
use star_secrecy::rates::{evaluate_scenario, SecrecyReport};
use star_secrecy::scenario::{link_budget, ScenarioConfig, Side};
use star_secrecy::Result;

pub fn run_example() -> Result<SecrecyReport> {
    let s = ScenarioConfig::default();
    let rule = laguerre_rule(DEFAULT_LAGUERRE_ORDER)?;
    let lb = link_budget(&s)?;
    println!("SNR scales: {lb:?}");

    let report = evaluate_scenario(&s, &rule)?;
    println!("{}", serde_json::to_string_pretty(&report)?);

    let mut swapped = s.clone();
    swapped.decode_first = Side::Transmission;
    let other = evaluate_scenario(&swapped, &rule)?;
    for side in [Side::Reflection, Side::Transmission] {
        println!(
            "side {}: r_sec {:.6} decoding r first, {:.6} decoding t first",
            side.label(),
            report.secrecy_rate_of(side),
            other.secrecy_rate_of(side)
        );
    }
    Ok(report)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
