// Secrecy rate against transmit power for three phase-error concentrations,
// printed as CSV.

use star_secrecy::experiments::{sweep_secrecy, Curves, SweepSpec, Table};
use star_secrecy::numerics::laguerre_rule;
use star_secrecy::scenario::{ScenarioConfig, Side};
use star_secrecy::Result;

pub fn run_example(side: Side) -> Result<Table> {
    let sweep = SweepSpec::power(
        0.0,
        23.0,
        Some(Curves {
            parameter: "kappa".into(),
            values: vec![2.0, 8.0, 50.0],
        }),
    );
    let table = sweep_secrecy(&ScenarioConfig::default(), &sweep, side, &laguerre_rule(300)?, None)?;
    print!("{}", table.to_csv_string()?);
    Ok(table)
}

fn main() -> Result<()> {
    let side = match std::env::args().nth(1).as_deref() {
        Some("t") => Side::Transmission,
        _ => Side::Reflection,
    };
    run_example(side).map(|_| ())
}
