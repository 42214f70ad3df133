//! Scenario loading, figure-style sweeps and the analytic-vs-simulation
//! validation report. Everything here is what the `star-secrecy` binary runs.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::fading::{alpha, cascaded_gamma_params, eaves_exponential_mean, real_part_stats, EavesMeanModel, GammaApprox, PhaseErrorModel};
use crate::monte_carlo::{ks_distance_gamma, sample_cascaded_gain, simulate_rates, McEstimate, McReport, McSettings};
use crate::numerics::{laguerre_rule, AdaptiveIntegrator, QuadratureRule, DEFAULT_LAGUERRE_ORDER};
use crate::optimizer::{grid_search_placement, wssr_at, wssr_surface, GridSearchResult, SearchRegion, DEFAULT_EPS0, DEFAULT_K_MAX};
use crate::output::{create_file, number, write_csv, write_json};
use crate::rates::{evaluate_scenario, evaluate_scenario_with, SecrecyReport};
use crate::scenario::{validate_scenario, ScenarioConfig, Side, DEFAULT_SCENARIO_JSON};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    SweepPower,
    SweepElements,
    OptimizePlacement,
    Surface,
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::SweepPower => "sweep-power",
            Command::SweepElements => "sweep-elements",
            Command::OptimizePlacement => "optimize-placement",
            Command::Surface => "surface",
            Command::Validate => "validate",
        }
    }
}

/// Multi-curve parameter: one output column group per value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Curves {
    pub parameter: String,
    pub values: Vec<f64>,
}

/// `variable` runs over `start, start + step, …, stop`. `power_dbm` sets
/// both users; any other name is a scenario field (dotted paths allowed).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub variable: String,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    #[serde(default)]
    pub curves: Option<Curves>,
}

impl SweepSpec {
    pub fn power(start: f64, stop: f64, curves: Option<Curves>) -> Self {
        Self {
            variable: "power_dbm".into(),
            start,
            stop,
            step: 1.0,
            curves,
        }
    }

    pub fn points(&self) -> Result<Vec<f64>> {
        if ![self.start, self.stop, self.step].iter().all(|v| v.is_finite())
            || !(self.step > 0.0)
            || self.start > self.stop
        {
            return Err(Error::Config(format!(
                "sweep over {} needs finite start <= stop and step > 0",
                self.variable
            )));
        }
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        Ok((0..n).map(|i| self.start + i as f64 * self.step).collect())
    }

    fn curve_values(&self) -> Vec<Option<f64>> {
        match &self.curves {
            Some(c) => c.values.iter().copied().map(Some).collect(),
            None => vec![None],
        }
    }
}

/// One experiment. Preset files under `presets/` use this schema; `notes`
/// records the assumptions behind each preset and is otherwise ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub command: Command,
    /// Scenario file layered over the built-in defaults.
    #[serde(default)]
    pub scenario: Option<PathBuf>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// Scenario fields applied after the scenario file (dotted keys allowed).
    #[serde(default)]
    pub overrides: BTreeMap<String, Value>,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub mc: Option<McSettings>,
    #[serde(default = "default_order")]
    pub laguerre_order: usize,
    #[serde(default)]
    pub side: Option<Side>,
    #[serde(default)]
    pub region: Option<SearchRegion>,
    #[serde(default = "default_eps0")]
    pub eps0: f64,
    #[serde(default = "default_k_max")]
    pub k_max: usize,
    #[serde(default)]
    pub notes: Vec<String>,
}

fn default_order() -> usize {
    DEFAULT_LAGUERRE_ORDER
}

fn default_eps0() -> f64 {
    DEFAULT_EPS0
}

fn default_k_max() -> usize {
    DEFAULT_K_MAX
}

impl ExperimentSpec {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            scenario: None,
            out: None,
            overrides: BTreeMap::new(),
            sweep: None,
            mc: None,
            laguerre_order: DEFAULT_LAGUERRE_ORDER,
            side: None,
            region: None,
            eps0: DEFAULT_EPS0,
            k_max: DEFAULT_K_MAX,
            notes: Vec::new(),
        }
    }

    pub fn from_json(text: &str, origin: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|source| Error::Parse {
            origin: origin.to_string(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&read(path)?, &path.display().to_string())
    }

    /// The sweep to run, falling back to the command's standard one.
    pub fn sweep_or_default(&self) -> SweepSpec {
        if let Some(s) = &self.sweep {
            return s.clone();
        }
        match self.command {
            Command::SweepElements => SweepSpec {
                variable: "elements".into(),
                start: 10.0,
                stop: 100.0,
                step: 1.0,
                curves: Some(Curves {
                    parameter: "power_dbm".into(),
                    values: vec![10.0, 15.0, 20.0],
                }),
            },
            Command::SweepPower => SweepSpec::power(
                0.0,
                23.0,
                Some(Curves {
                    parameter: "kappa".into(),
                    values: vec![2.0, 8.0, 50.0],
                }),
            ),
            _ => SweepSpec::power(0.0, 23.0, None),
        }
    }

    pub fn side_or_default(&self) -> Side {
        self.side.unwrap_or(Side::Reflection)
    }

    pub fn scenario(&self) -> Result<ScenarioConfig> {
        let base = match &self.scenario {
            Some(p) => read_scenario_value(p)?,
            None => Value::Object(Map::new()),
        };
        scenario_from_layers(base, &self.overrides)
    }

    pub fn rule(&self) -> Result<QuadratureRule> {
        laguerre_rule(self.laguerre_order)
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn read_scenario_value(path: &Path) -> Result<Value> {
    serde_json::from_str(&read(path)?).map_err(|source| Error::Parse {
        origin: path.display().to_string(),
        source,
    })
}

/// Reads a (possibly partial) scenario file; absent fields take the built-in
/// defaults and the result is validated.
pub fn load_scenario(path: &Path) -> Result<ScenarioConfig> {
    scenario_from_layers(read_scenario_value(path)?, &BTreeMap::new())
}

/// Same as [`load_scenario`] for an in-memory document.
pub fn parse_scenario(text: &str) -> Result<ScenarioConfig> {
    let v = serde_json::from_str(text).map_err(|source| Error::Parse {
        origin: "scenario".into(),
        source,
    })?;
    scenario_from_layers(v, &BTreeMap::new())
}

/// Builds a scenario from a partial document plus overrides. When only one of
/// a complementary pair (`lambda_r`/`lambda_t`, `w1`/`w2`) is given, the other
/// is completed so that the pair sums to one.
pub fn scenario_from_layers(mut partial: Value, overrides: &BTreeMap<String, Value>) -> Result<ScenarioConfig> {
    if !partial.is_object() {
        return Err(Error::Config("scenario document must be a JSON object".into()));
    }
    for (k, v) in overrides {
        set_path(&mut partial, k, v.clone())?;
    }
    let obj = partial.as_object_mut().expect("checked above");
    for (a, b) in [("lambda_r", "lambda_t"), ("w1", "w2")] {
        match (obj.get(a).and_then(Value::as_f64), obj.get(b).and_then(Value::as_f64)) {
            (Some(x), None) if !obj.contains_key(b) => {
                obj.insert(b.into(), complement(x));
            }
            (None, Some(y)) if !obj.contains_key(a) => {
                obj.insert(a.into(), complement(y));
            }
            _ => {}
        }
    }
    let mut merged: Value = serde_json::from_str(DEFAULT_SCENARIO_JSON).expect("embedded default scenario is valid");
    merge(&mut merged, partial);
    let s: ScenarioConfig = serde_json::from_value(merged).map_err(|source| Error::Parse {
        origin: "scenario".into(),
        source,
    })?;
    validate_scenario(&s)?;
    Ok(s)
}

fn complement(x: f64) -> Value {
    serde_json::Number::from_f64(1.0 - x).map_or(Value::Null, Value::Number)
}

fn merge(base: &mut Value, top: Value) {
    match (base, top) {
        (Value::Object(b), Value::Object(t)) => {
            for (k, v) in t {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

fn set_path(root: &mut Value, key: &str, value: Value) -> Result<()> {
    let mut cur = root;
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::Config(format!("malformed override key {key:?}")));
    }
    for part in &parts[..parts.len() - 1] {
        let obj = cur
            .as_object_mut()
            .ok_or_else(|| Error::Config(format!("override {key:?} descends into a non-object")))?;
        cur = obj.entry(part.to_string()).or_insert_with(|| Value::Object(Map::new()));
    }
    cur.as_object_mut()
        .ok_or_else(|| Error::Config(format!("override {key:?} descends into a non-object")))?
        .insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

/// Parses `key=value`; the value is read as JSON and falls back to a plain
/// string (so `decode_first=t` works without quotes).
pub fn parse_override(arg: &str) -> Result<(String, Value)> {
    let (k, v) = arg
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override {arg:?} is not key=value")))?;
    let k = k.trim();
    if k.is_empty() {
        return Err(Error::Config(format!("override {arg:?} has an empty key")));
    }
    let v = serde_json::from_str(v.trim()).unwrap_or_else(|_| Value::String(v.trim().to_string()));
    Ok((k.to_string(), v))
}

fn numeric_value(x: f64) -> Value {
    if x.fract() == 0.0 && x.abs() < 9e15 {
        Value::from(x as i64)
    } else {
        serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
    }
}

/// Returns a copy of `s` with `parameter` set to `x`. `power_dbm` sets both
/// users' powers.
pub fn with_parameter(s: &ScenarioConfig, parameter: &str, x: f64) -> Result<ScenarioConfig> {
    if parameter == "power_dbm" {
        let s = s.clone().with_power_dbm(x);
        validate_scenario(&s)?;
        return Ok(s);
    }
    let mut v = serde_json::to_value(s)?;
    set_path(&mut v, parameter, numeric_value(x))?;
    let out: ScenarioConfig = serde_json::from_value(v).map_err(|source| Error::Parse {
        origin: format!("parameter {parameter}"),
        source,
    })?;
    validate_scenario(&out)?;
    Ok(out)
}

fn variable_column(name: &str) -> String {
    match name {
        "power_dbm" => "power_dBm".into(),
        "elements" => "M".into(),
        other => other.into(),
    }
}

fn curve_suffix(curves: &Option<Curves>, value: Option<f64>) -> String {
    match (curves, value) {
        (Some(c), Some(v)) => format!("_{}_{}", c.parameter, v),
        _ => String::new(),
    }
}

fn format_variable(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 9e15 {
        format!("{}", x as i64)
    } else {
        number(x)
    }
}

/// A sweep as an in-memory table (header plus rows of rendered cells).
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn write(&self, path: &Path) -> Result<()> {
        write_csv(create_file(path)?, &self.header, self.rows.iter().cloned())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        write_csv(&mut buf, &self.header, self.rows.iter().cloned())?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.header.iter().position(|h| h == name)?;
        self.rows.iter().map(|r| r[j].parse().ok()).collect()
    }
}

/// Secrecy-rate sweep: the first column is the swept variable, then for every
/// curve value the analytic secrecy rate of `side` and, when `mc` is given,
/// the simulated rate and its standard error.
pub fn sweep_secrecy(
    s: &ScenarioConfig,
    sweep: &SweepSpec,
    side: Side,
    rule: &QuadratureRule,
    mc: Option<&McSettings>,
) -> Result<Table> {
    let points = sweep.points()?;
    let curves = sweep.curve_values();
    let tag = side.label();
    let mut header = vec![variable_column(&sweep.variable)];
    for &c in &curves {
        let suffix = curve_suffix(&sweep.curves, c);
        header.push(format!("r_sec_{tag}{suffix}"));
        if mc.is_some() {
            header.push(format!("mc_r_sec_{tag}{suffix}"));
            header.push(format!("mc_std_error_{tag}{suffix}"));
        }
    }
    let mut rows = Vec::with_capacity(points.len());
    for &x in &points {
        let at_x = with_parameter(s, &sweep.variable, x)?;
        let mut row = vec![format_variable(x)];
        for &c in &curves {
            let point = match (&sweep.curves, c) {
                (Some(cv), Some(v)) => with_parameter(&at_x, &cv.parameter, v)?,
                _ => at_x.clone(),
            };
            row.push(number(evaluate_scenario(&point, rule)?.secrecy_rate_of(side)));
            if let Some(mc) = mc {
                let sim = simulate_rates(&point, mc)?;
                let est = if side == sim.report.q_side {
                    sim.estimates.r_sec_q
                } else {
                    sim.estimates.r_sec_qp
                };
                row.push(number(est.value));
                row.push(number(est.std_error));
            }
        }
        rows.push(row);
    }
    Ok(Table { header, rows })
}

pub fn run_sweep_power(spec: &ExperimentSpec) -> Result<Table> {
    let sweep = spec.sweep_or_default();
    sweep_secrecy(&spec.scenario()?, &sweep, spec.side_or_default(), &spec.rule()?, spec.mc.as_ref())
}

pub fn run_sweep_elements(spec: &ExperimentSpec) -> Result<Table> {
    let sweep = spec.sweep_or_default();
    sweep_secrecy(&spec.scenario()?, &sweep, spec.side_or_default(), &spec.rule()?, spec.mc.as_ref())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeOutput {
    pub search: GridSearchResult,
    /// Columns `power_dBm, wssr_fixed, wssr_optimized, x_opt, y_opt`.
    pub power_table: Vec<PowerRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerRow {
    pub power_dbm: f64,
    pub wssr_fixed: f64,
    pub wssr_optimized: f64,
    pub x_opt: f64,
    pub y_opt: f64,
}

/// Grid search at the scenario's own power, plus a fixed-vs-optimized WSSR
/// comparison across the sweep's powers.
pub fn run_optimize(spec: &ExperimentSpec) -> Result<OptimizeOutput> {
    let s = spec.scenario()?;
    let rule = spec.rule()?;
    let region = spec.region.unwrap_or_default();
    let search = grid_search_placement(&s, &region, spec.eps0, spec.k_max, &rule)?;
    let sweep = spec.sweep_or_default();
    let mut power_table = Vec::new();
    for x in sweep.points()? {
        let at = with_parameter(&s, &sweep.variable, x)?;
        let fixed = wssr_at(&at, at.uav.x, at.uav.y, &rule)?;
        let opt = grid_search_placement(&at, &region, spec.eps0, spec.k_max, &rule)?;
        power_table.push(PowerRow {
            power_dbm: x,
            wssr_fixed: fixed,
            wssr_optimized: opt.best_wssr,
            x_opt: opt.best_position.x,
            y_opt: opt.best_position.y,
        });
    }
    Ok(OptimizeOutput { search, power_table })
}

impl OptimizeOutput {
    pub fn power_csv(&self) -> Table {
        Table {
            header: ["power_dBm", "wssr_fixed", "wssr_optimized", "x_opt", "y_opt"].map(String::from).to_vec(),
            rows: self
                .power_table
                .iter()
                .map(|r| {
                    vec![
                        format_variable(r.power_dbm),
                        number(r.wssr_fixed),
                        number(r.wssr_optimized),
                        number(r.x_opt),
                        number(r.y_opt),
                    ]
                })
                .collect(),
        }
    }
}

pub fn run_surface(spec: &ExperimentSpec) -> Result<crate::optimizer::WssrSurface> {
    wssr_surface(&spec.scenario()?, &spec.region.unwrap_or_default(), &spec.rule()?)
}

/// Relative difference `|a - b| / |b|`; absolute when `b == 0`.
pub fn relative_gap(a: f64, reference: f64) -> f64 {
    let d = (a - reference).abs();
    if reference == 0.0 {
        d
    } else {
        d / reference.abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantityGap {
    pub quantity: String,
    pub analytic: f64,
    pub monte_carlo: f64,
    pub std_error: f64,
    pub relative_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCheckRow {
    pub quantity: String,
    pub laguerre: f64,
    pub adaptive: f64,
    pub relative_gap: f64,
}

/// Compares every capacity of `s` under the Laguerre rule against adaptive
/// integration of the same integrand.
pub fn quadrature_cross_check(s: &ScenarioConfig, rule: &QuadratureRule) -> Result<Vec<CrossCheckRow>> {
    let lag = evaluate_scenario(s, rule)?;
    let ada = evaluate_scenario_with(s, &AdaptiveIntegrator::default())?;
    Ok(capacity_fields(&lag)
        .into_iter()
        .zip(capacity_fields(&ada))
        .map(|((name, l), (_, a))| CrossCheckRow {
            quantity: name.into(),
            laguerre: l,
            adaptive: a,
            relative_gap: relative_gap(l, a),
        })
        .collect())
}

fn capacity_fields(r: &SecrecyReport) -> [(&'static str, f64); 4] {
    [("c_q", r.c_q), ("c_qp", r.c_qp), ("c_e_q", r.c_e_q), ("c_e_qp", r.c_e_qp)]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EavesMeanCheck {
    pub mean_c_q: McEstimate,
    pub mean_c_qp: McEstimate,
    pub element_count_q: f64,
    pub element_count_qp: f64,
    pub split_scaled_q: f64,
    pub split_scaled_qp: f64,
    pub gap_element_count: f64,
    pub gap_split_scaled: f64,
    pub supported: EavesMeanModel,
    pub configured: EavesMeanModel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaFitCheck {
    /// Gain of the side decoded first.
    pub side: Side,
    pub fit: GammaApprox,
    pub empirical_mean_a: McEstimate,
    /// `E[U]² + Var U + Var V`
    pub exact_mean_a: f64,
    pub relative_gap_exact_mean: f64,
    pub relative_gap_fit_mean: f64,
    pub samples: u64,
    pub ks_distance: f64,
    /// Same shape, scale chosen to match the exact mean.
    pub ks_distance_exact_mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub scenario: ScenarioConfig,
    pub mc: McSettings,
    pub laguerre_order: usize,
    pub analytic: SecrecyReport,
    pub monte_carlo: SecrecyReport,
    pub quantities: Vec<QuantityGap>,
    pub max_rate_gap: f64,
    pub eaves_mean: EavesMeanCheck,
    pub gamma_fit: GammaFitCheck,
    pub quadrature: Vec<CrossCheckRow>,
}

/// Analytic rates next to their Monte Carlo estimates, the eavesdropper-mean
/// diagnostic, the Gamma-fit check of `A` and the quadrature cross-check.
/// Never fails on large gaps; it only reports them.
pub fn validate(s: &ScenarioConfig, mc: &McSettings, rule: &QuadratureRule) -> Result<ValidationReport> {
    let analytic = evaluate_scenario(s, rule)?;
    let sim: McReport = simulate_rates(s, mc)?;
    let e = &sim.estimates;
    let quantities: Vec<QuantityGap> = [
        ("c_q", analytic.c_q, e.c_q),
        ("c_qp", analytic.c_qp, e.c_qp),
        ("c_e_q", analytic.c_e_q, e.c_e_q),
        ("c_e_qp", analytic.c_e_qp, e.c_e_qp),
        ("r_sec_q", analytic.r_sec_q, e.r_sec_q),
        ("r_sec_qp", analytic.r_sec_qp, e.r_sec_qp),
        ("r_sum", analytic.r_sum, e.r_sum),
        ("wssr", analytic.wssr, e.wssr),
    ]
    .into_iter()
    .map(|(name, a, m)| QuantityGap {
        quantity: name.into(),
        analytic: a,
        monte_carlo: m.value,
        std_error: m.std_error,
        relative_gap: relative_gap(a, m.value),
    })
    .collect();
    let max_rate_gap = quantities[..6].iter().map(|q| q.relative_gap).fold(0.0, f64::max);

    let q = s.decode_first;
    let d = &sim.diagnostics;
    let eaves_mean = EavesMeanCheck {
        mean_c_q: d.mean_c_q,
        mean_c_qp: d.mean_c_qp,
        element_count_q: eaves_exponential_mean(s.elements, s.lambda(q.other()), EavesMeanModel::ElementCount),
        element_count_qp: eaves_exponential_mean(s.elements, s.lambda(q), EavesMeanModel::ElementCount),
        split_scaled_q: eaves_exponential_mean(s.elements, s.lambda(q.other()), EavesMeanModel::SplitScaled),
        split_scaled_qp: eaves_exponential_mean(s.elements, s.lambda(q), EavesMeanModel::SplitScaled),
        gap_element_count: d.gap_element_count,
        gap_split_scaled: d.gap_split_scaled,
        supported: d.supported_eaves_mean,
        configured: s.eaves_mean,
    };

    let gamma_fit = gamma_fit_check(s, q, mc)?;

    Ok(ValidationReport {
        scenario: s.clone(),
        mc: *mc,
        laguerre_order: rule.order(),
        analytic,
        monte_carlo: sim.report,
        quantities,
        max_rate_gap,
        eaves_mean,
        gamma_fit,
        quadrature: quadrature_cross_check(s, rule)?,
    })
}

/// Samples `A` for `side` and compares it with its Gamma approximation.
pub fn gamma_fit_check(s: &ScenarioConfig, side: Side, mc: &McSettings) -> Result<GammaFitCheck> {
    let phase = PhaseErrorModel::von_mises(s.kappa)?;
    let a = alpha(s.m_ur, s.m_rs)?;
    let lambda = s.lambda(side);
    let fit = cascaded_gamma_params(s.elements, lambda, a, &phase)?;
    let exact_mean_a = real_part_stats(s.elements, lambda, a, &phase)?.second_moment();
    let samples = sample_cascaded_gain(s.elements, lambda, s.m_ur, s.m_rs, s.kappa, mc)?;
    let empirical_mean_a = McEstimate::from_samples(samples.iter().copied());
    Ok(GammaFitCheck {
        side,
        fit,
        empirical_mean_a,
        exact_mean_a,
        relative_gap_exact_mean: relative_gap(exact_mean_a, empirical_mean_a.value),
        relative_gap_fit_mean: relative_gap(fit.mean, empirical_mean_a.value),
        samples: mc.trials,
        ks_distance: ks_distance_gamma(&samples, fit.shape, fit.scale()),
        ks_distance_exact_mean: ks_distance_gamma(&samples, fit.shape, exact_mean_a / fit.shape),
    })
}

pub fn run_validate(spec: &ExperimentSpec) -> Result<ValidationReport> {
    validate(&spec.scenario()?, &spec.mc.unwrap_or_default(), &spec.rule()?)
}

/// Runs `spec` and writes its outputs. CSV commands write to `out`;
/// `optimize-placement` writes the search result as JSON next to a `.csv`
/// power table sharing the same stem; `validate` writes JSON. Returns the
/// paths written.
pub fn execute(spec: &ExperimentSpec, out: &Path) -> Result<Vec<PathBuf>> {
    match spec.command {
        Command::SweepPower => {
            run_sweep_power(spec)?.write(out)?;
            Ok(vec![out.to_path_buf()])
        }
        Command::SweepElements => {
            run_sweep_elements(spec)?.write(out)?;
            Ok(vec![out.to_path_buf()])
        }
        Command::Surface => {
            run_surface(spec)?.write_csv(create_file(out)?)?;
            Ok(vec![out.to_path_buf()])
        }
        Command::Validate => {
            write_json(out, &run_validate(spec)?)?;
            Ok(vec![out.to_path_buf()])
        }
        Command::OptimizePlacement => {
            let result = run_optimize(spec)?;
            let json = out.with_extension("json");
            let csv = out.with_extension("csv");
            write_json(&json, &result.search)?;
            result.power_csv().write(&csv)?;
            Ok(vec![json, csv])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        assert_eq!(parse_scenario("{}").unwrap(), ScenarioConfig::default());
    }

    #[test]
    fn split_and_weights_completed() {
        let s = parse_scenario(r#"{"lambda_r": 0.7}"#).unwrap();
        assert!((s.lambda_t - 0.3).abs() < 1e-12);
        let s = parse_scenario(r#"{"w2": 0.25}"#).unwrap();
        assert_eq!(s.w1, 0.75);
        assert!(parse_scenario(r#"{"lambda_r": 0.7, "lambda_t": 0.7}"#).is_err());
    }

    #[test]
    fn nested_fields_merge() {
        let s = parse_scenario(r#"{"uav": {"x": -20}}"#).unwrap();
        assert_eq!((s.uav.x, s.uav.y, s.uav.z), (-20.0, 50.0, 100.0));
    }

    #[test]
    fn validation_error_names_kappa() {
        match parse_scenario(r#"{"kappa": -1}"#) {
            Err(Error::Validation(v)) => assert!(v.iter().any(|x| x.field == "kappa")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_location_or_field() {
        let e = parse_scenario("{\n  \"kappa\": ,\n}").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        let e = parse_scenario(r#"{"kapa": 3}"#).unwrap_err();
        assert!(e.to_string().contains("kapa"), "{e}");
        assert!(e.is_validation());
        assert!(parse_scenario("[]").is_err());
    }

    #[test]
    fn overrides() {
        assert_eq!(parse_override("kappa=8").unwrap(), ("kappa".into(), Value::from(8)));
        assert_eq!(parse_override("decode_first=t").unwrap().1, Value::from("t"));
        assert!(parse_override("kappa").is_err());
        assert!(parse_override("=3").is_err());
        let mut o = BTreeMap::new();
        o.insert("uav.y".to_string(), Value::from(25));
        o.insert("lambda_r".to_string(), Value::from(0.6));
        let s = scenario_from_layers(serde_json::json!({}), &o).unwrap();
        assert_eq!(s.uav.y, 25.0);
        assert!((s.lambda_t - 0.4).abs() < 1e-12);
        o.insert("kappa.x".to_string(), Value::from(1));
        assert!(scenario_from_layers(serde_json::json!({}), &o).is_err());
    }

    #[test]
    fn parameter_setting() {
        let s = ScenarioConfig::default();
        assert_eq!(with_parameter(&s, "elements", 64.0).unwrap().elements, 64);
        let p = with_parameter(&s, "power_dbm", 10.0).unwrap();
        assert_eq!((p.power_r_dbm, p.power_t_dbm), (10.0, 10.0));
        assert_eq!(with_parameter(&s, "uav.x", -20.0).unwrap().uav.x, -20.0);
        assert!(with_parameter(&s, "power_dbm", 30.0).is_err());
        assert!(with_parameter(&s, "bogus", 1.0).is_err());
    }

    #[test]
    fn sweep_power_shape() {
        let mut spec = ExperimentSpec::new(Command::SweepPower);
        spec.laguerre_order = 100;
        let t = run_sweep_power(&spec).unwrap();
        assert_eq!(t.rows.len(), 24);
        assert_eq!(t.header.len(), 4);
        assert_eq!(t.header[0], "power_dBm");
        assert_eq!(t.header[1], "r_sec_r_kappa_2");
        assert_eq!(t.rows[23][0], "23");
    }

    #[test]
    fn sweep_with_monte_carlo_columns() {
        let mut spec = ExperimentSpec::new(Command::SweepPower);
        spec.sweep = Some(SweepSpec::power(
            20.0,
            21.0,
            Some(Curves {
                parameter: "kappa".into(),
                values: vec![2.0, 50.0],
            }),
        ));
        spec.mc = Some(McSettings {
            trials: 50,
            seed: 1,
            workers: 2,
        });
        spec.side = Some(Side::Transmission);
        let t = run_sweep_power(&spec).unwrap();
        assert_eq!(t.rows.len(), 2);
        assert_eq!(t.header.len(), 1 + 2 * 3);
        assert_eq!(t.header[3], "mc_std_error_t_kappa_2");
        assert!(t.column("mc_std_error_t_kappa_50").unwrap().iter().all(|&v| v > 0.0));
    }

    #[test]
    fn bad_sweeps_rejected() {
        let s = SweepSpec {
            step: 0.0,
            ..SweepSpec::power(0.0, 5.0, None)
        };
        assert!(matches!(s.points(), Err(Error::Config(_))));
        assert!(SweepSpec::power(5.0, 0.0, None).points().is_err());
    }

    #[test]
    fn relative_gap_at_zero() {
        assert_eq!(relative_gap(0.25, 0.0), 0.25);
        assert_eq!(relative_gap(1.1, 1.0), 0.10000000000000009);
    }

    #[test]
    fn spec_files_parse() {
        let spec = ExperimentSpec::from_json(
            r#"{"command": "sweep-elements", "side": "t", "overrides": {"kappa": 5}}"#,
            "inline",
        )
        .unwrap();
        assert_eq!(spec.command, Command::SweepElements);
        assert_eq!(spec.sweep_or_default().points().unwrap().len(), 91);
        assert_eq!(spec.scenario().unwrap().kappa, 5.0);
        assert!(ExperimentSpec::from_json(r#"{"command": "plot"}"#, "inline").is_err());
    }

    #[test]
    fn validation_report_with_few_trials() {
        let s = ScenarioConfig {
            elements: 8,
            ..ScenarioConfig::default()
        };
        let mc = McSettings {
            trials: 10,
            seed: 4,
            workers: 1,
        };
        let r = validate(&s, &mc, &laguerre_rule(100).unwrap()).unwrap();
        assert_eq!(r.quantities.len(), 8);
        assert_eq!(r.quadrature.len(), 4);
        assert!(r.quantities.iter().all(|q| q.std_error.is_finite()));
    }
}
