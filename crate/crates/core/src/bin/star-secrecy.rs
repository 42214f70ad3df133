use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use star_secrecy::experiments::{execute, parse_override, Command, ExperimentSpec};
use star_secrecy::scenario::Side;
use star_secrecy::{Error, Result};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    SweepPower,
    SweepElements,
    OptimizePlacement,
    Surface,
    Validate,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::SweepPower => Command::SweepPower,
            Cmd::SweepElements => Command::SweepElements,
            Cmd::OptimizePlacement => Command::OptimizePlacement,
            Cmd::Surface => Command::Surface,
            Cmd::Validate => Command::Validate,
        }
    }
}

/// Ergodic secrecy rates of a UAV-mounted STAR-RIS uplink NOMA pair.
///
/// Exit status: 0 on success, 1 on invalid input, 2 on a runtime or
/// numerical failure.
#[derive(Debug, Parser)]
#[command(name = "star-secrecy", version)]
struct Cli {
    command: Cmd,
    /// Scenario JSON; absent fields take the built-in defaults.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Output file (CSV, or JSON for validate and optimize-placement).
    #[arg(long)]
    out: PathBuf,
    /// Experiment preset (sweep, curves, region, notes).
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Monte Carlo trials; enables simulation columns in sweeps.
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for Monte Carlo; results do not depend on it.
    #[arg(long)]
    workers: Option<usize>,
    /// Scenario override, repeatable, e.g. `--set kappa=8 --set uav.x=-20`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long)]
    laguerre_order: Option<usize>,
    #[arg(long, value_parser = parse_side)]
    side: Option<Side>,
}

fn parse_side(s: &str) -> std::result::Result<Side, String> {
    s.parse::<Side>().map_err(|e| e.to_string())
}

fn build_spec(cli: &Cli) -> Result<ExperimentSpec> {
    let command = Command::from(cli.command);
    let mut spec = match &cli.spec {
        Some(p) => ExperimentSpec::load(p)?,
        None => ExperimentSpec::new(command),
    };
    if spec.command != command {
        return Err(Error::Config(format!(
            "preset is for {} but {} was requested",
            spec.command.name(),
            command.name()
        )));
    }
    if cli.scenario.is_some() {
        spec.scenario = cli.scenario.clone();
    }
    for arg in &cli.set {
        let (k, v) = parse_override(arg)?;
        spec.overrides.insert(k, v);
    }
    if cli.trials.is_some() || cli.seed.is_some() || cli.workers.is_some() {
        let mut mc = spec.mc.unwrap_or_default();
        mc.trials = cli.trials.unwrap_or(mc.trials);
        mc.seed = cli.seed.unwrap_or(mc.seed);
        mc.workers = cli.workers.unwrap_or(mc.workers);
        spec.mc = Some(mc);
    }
    if let Some(l) = cli.laguerre_order {
        spec.laguerre_order = l;
    }
    if cli.side.is_some() {
        spec.side = cli.side;
    }
    Ok(spec)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match build_spec(&cli).and_then(|spec| execute(&spec, &cli.out)) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 1 } else { 2 })
        }
    }
}
