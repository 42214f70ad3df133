// Secrecy rate against the number of surface elements at 10, 15 and 20 dBm.

use star_secrecy::experiments::{sweep_secrecy, Curves, SweepSpec, Table};
use star_secrecy::numerics::laguerre_rule;
use star_secrecy::scenario::{ScenarioConfig, Side};
use star_secrecy::Result;

pub fn run_example(side: Side) -> Result<Table> {
    let sweep = SweepSpec {
        variable: "elements".into(),
        start: 10.0,
        stop: 100.0,
        step: 10.0,
        curves: Some(Curves {
            parameter: "power_dbm".into(),
            values: vec![10.0, 15.0, 20.0],
        }),
    };
    let table = sweep_secrecy(&ScenarioConfig::default(), &sweep, side, &laguerre_rule(300)?, None)?;
    print!("{}", table.to_csv_string()?);
    Ok(table)
}

fn main() -> Result<()> {
    let side = match std::env::args().nth(1).as_deref() {
        Some("r") => Side::Reflection,
        _ => Side::Transmission,
    };
    run_example(side).map(|_| ())
}
