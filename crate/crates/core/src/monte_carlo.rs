//! Brute-force Monte Carlo oracle for the analytic rates.
//!
//! Every trial draws its own channel realisation from a ChaCha stream keyed by
//! `(seed, trial index)`, so results do not depend on how trials are spread
//! over worker threads. Sums are reduced sequentially in trial order.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fading::{eaves_exponential_mean, EavesMeanModel};
use crate::numerics::gamma_p;
use crate::rates::{Method, SecrecyReport};
use crate::scenario::{link_budget, validate_scenario, ScenarioConfig};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McSettings {
    pub trials: u64,
    pub seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

impl Default for McSettings {
    fn default() -> Self {
        Self {
            trials: 100_000,
            seed: 20_250_101,
            workers: default_workers(),
        }
    }
}

/// Sample mean with its standard error `s/√n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub trials: u64,
}

impl McEstimate {
    pub fn from_samples<I>(samples: I) -> Self
    where
        I: IntoIterator<Item = f64>,
        I::IntoIter: Clone,
    {
        let it = samples.into_iter();
        let (n, sum) = it.clone().fold((0u64, 0.0), |(n, s), x| (n + 1, s + x));
        let mean = sum / n as f64;
        let ss: f64 = it.map(|x| (x - mean) * (x - mean)).sum();
        let std_error = if n > 1 {
            (ss / (n - 1) as f64).sqrt() / (n as f64).sqrt()
        } else {
            0.0
        };
        McEstimate {
            value: mean,
            std_error,
            trials: n,
        }
    }
}

/// Nakagami-m amplitude with spread `Ω`: the square root of a
/// `Gamma(m, Ω/m)` variate.
#[derive(Debug, Clone, Copy)]
pub struct Nakagami {
    power: Gamma<f64>,
}

impl Nakagami {
    pub fn new(m: f64, omega: f64) -> Result<Self> {
        if !(m >= 0.5) || !(omega > 0.0) {
            return Err(Error::Domain(format!(
                "Nakagami needs m >= 0.5 and Ω > 0, got m = {m}, Ω = {omega}"
            )));
        }
        let power = Gamma::new(m, omega / m).map_err(|e| Error::Domain(e.to_string()))?;
        Ok(Self { power })
    }
}

impl Distribution<f64> for Nakagami {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.power.sample(rng).sqrt()
    }
}

pub fn sample_nakagami<R: Rng + ?Sized>(m: f64, omega: f64, rng: &mut R) -> Result<f64> {
    Ok(Nakagami::new(m, omega)?.sample(rng))
}

/// Zero-mean von Mises angle in `[-π, π)`.
///
/// Best-Fisher rejection from a wrapped Cauchy envelope; `κ = 0` is uniform.
#[derive(Debug, Clone, Copy)]
pub struct VonMises {
    kappa: f64,
    r: f64,
}

impl VonMises {
    pub fn new(kappa: f64) -> Result<Self> {
        if !(kappa >= 0.0) || !kappa.is_finite() {
            return Err(Error::Domain(format!("von Mises κ must be finite and >= 0, got {kappa}")));
        }
        let r = if kappa > 0.0 {
            let tau = 1.0 + (1.0 + 4.0 * kappa * kappa).sqrt();
            let rho = (tau - (2.0 * tau).sqrt()) / (2.0 * kappa);
            (1.0 + rho * rho) / (2.0 * rho)
        } else {
            f64::NAN
        };
        Ok(Self { kappa, r })
    }
}

impl Distribution<f64> for VonMises {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.kappa == 0.0 {
            return rng.random_range(-PI..PI);
        }
        let f = loop {
            let z = (PI * rng.random::<f64>()).cos();
            let f = (1.0 + self.r * z) / (self.r + z);
            let c = self.kappa * (self.r - f);
            let u: f64 = rng.random();
            if c * (2.0 - c) - u > 0.0 || (c / u).ln() + 1.0 - c >= 0.0 {
                break f;
            }
        };
        let theta = f.clamp(-1.0, 1.0).acos();
        if rng.random::<bool>() {
            if theta >= PI {
                -PI
            } else {
                theta
            }
        } else {
            -theta
        }
    }
}

pub fn sample_von_mises<R: Rng + ?Sized>(kappa: f64, rng: &mut R) -> Result<f64> {
    Ok(VonMises::new(kappa)?.sample(rng))
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Runs `trial` for every index in `0..settings.trials` on `settings.workers`
/// threads and returns the outcomes in trial order.
fn run_trials<T, F>(settings: &McSettings, trial: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, &mut ChaCha8Rng) -> Result<T> + Sync,
{
    if settings.trials == 0 {
        return Err(Error::Config("Monte Carlo needs at least one trial".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(settings.workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        (0..settings.trials)
            .into_par_iter()
            .map(|t| trial(t, &mut trial_rng(settings.seed, t)))
            .collect()
    })
}

#[derive(Debug, Clone, Copy)]
struct TrialOutcome {
    rate_q: f64,
    rate_qp: f64,
    rate_e_q: f64,
    rate_e_qp: f64,
    gain_a: f64,
    gain_b: f64,
    gain_c_q: f64,
    gain_c_qp: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimates {
    pub c_q: McEstimate,
    pub c_qp: McEstimate,
    pub c_e_q: McEstimate,
    pub c_e_qp: McEstimate,
    pub r_sec_q: McEstimate,
    pub r_sec_qp: McEstimate,
    pub r_sum: McEstimate,
    pub wssr: McEstimate,
}

/// Raw gain moments, and the check of which exponential mean the simulated
/// eavesdropper gains actually follow.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McDiagnostics {
    pub mean_a: McEstimate,
    pub mean_b: McEstimate,
    pub mean_c_q: McEstimate,
    pub mean_c_qp: McEstimate,
    /// `|E[C] - M|` summed over both eavesdroppers.
    pub gap_element_count: f64,
    /// `|E[C] - M·λ|` summed over both eavesdroppers.
    pub gap_split_scaled: f64,
    pub supported_eaves_mean: EavesMeanModel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub report: SecrecyReport,
    pub estimates: McEstimates,
    pub diagnostics: McDiagnostics,
}

/// Simulates every rate of the scenario from the instantaneous SNRs.
pub fn simulate_rates(s: &ScenarioConfig, mc: &McSettings) -> Result<McReport> {
    validate_scenario(s)?;
    let lb = link_budget(s)?;
    let q = s.decode_first;
    let qp = q.other();
    let elements = s.elements as usize;
    let (sqrt_lq, sqrt_lqp) = (s.lambda(q).sqrt(), s.lambda(qp).sqrt());
    let user_hop = Nakagami::new(s.m_ur, s.omega)?;
    let surface_hop = Nakagami::new(s.m_rs, s.omega)?;
    let phase_error = VonMises::new(s.kappa)?;

    let outcomes = run_trials(mc, |t, rng| {
        let mut a = (0.0, 0.0);
        let mut b = (0.0, 0.0);
        let mut c_q = (0.0, 0.0);
        let mut c_qp = (0.0, 0.0);
        for _ in 0..elements {
            let h_q = user_hop.sample(rng);
            let h_qp = user_hop.sample(rng);
            let h_rs = surface_hop.sample(rng);
            let h_re_opposite_q = surface_hop.sample(rng);
            let h_re_opposite_qp = surface_hop.sample(rng);
            let theta_a = phase_error.sample(rng);
            let theta_b = phase_error.sample(rng);
            let phi_q: f64 = rng.random_range(-PI..PI);
            let phi_qp: f64 = rng.random_range(-PI..PI);

            accumulate(&mut a, h_q * h_rs * sqrt_lq, theta_a);
            accumulate(&mut b, h_qp * h_rs * sqrt_lqp, theta_b);
            // U_q leaks through the opposite side's coefficient, and vice versa
            accumulate(&mut c_q, h_q * h_re_opposite_q * sqrt_lqp, phi_q);
            accumulate(&mut c_qp, h_qp * h_re_opposite_qp * sqrt_lq, phi_qp);
        }
        let gain_a = a.0 * a.0 + a.1 * a.1;
        let gain_b = b.0 * b.0 + b.1 * b.1;
        let gain_c_q = c_q.0 * c_q.0 + c_q.1 * c_q.1;
        let gain_c_qp = c_qp.0 * c_qp.0 + c_qp.1 * c_qp.1;
        let out = TrialOutcome {
            rate_q: (lb.rho_s_q * gain_a / (lb.rho_s_qp * gain_b + 1.0)).ln_1p() / std::f64::consts::LN_2,
            rate_qp: (lb.rho_s_qp * gain_b).ln_1p() / std::f64::consts::LN_2,
            rate_e_q: (lb.rho_e_q * gain_c_q).ln_1p() / std::f64::consts::LN_2,
            rate_e_qp: (lb.rho_e_qp * gain_c_qp).ln_1p() / std::f64::consts::LN_2,
            gain_a,
            gain_b,
            gain_c_q,
            gain_c_qp,
        };
        if [out.rate_q, out.rate_qp, out.rate_e_q, out.rate_e_qp]
            .iter()
            .any(|v| !v.is_finite())
        {
            return Err(Error::NonFiniteSample {
                trial: t,
                what: "instantaneous rate",
            });
        }
        Ok(out)
    })?;

    let est = |f: &dyn Fn(&TrialOutcome) -> f64| McEstimate::from_samples(outcomes.iter().map(f));
    let (wq, wqp) = (s.weight(q), s.weight(qp));
    let c_q = est(&|o| o.rate_q);
    let c_qp = est(&|o| o.rate_qp);
    let c_e_q = est(&|o| o.rate_e_q);
    let c_e_qp = est(&|o| o.rate_e_qp);
    let mut diff_q = est(&|o| o.rate_q - o.rate_e_q);
    let mut diff_qp = est(&|o| o.rate_qp - o.rate_e_qp);
    let r_sum = est(&|o| o.rate_q - o.rate_e_q + o.rate_qp - o.rate_e_qp);
    let wssr = est(&|o| wq * (o.rate_q - o.rate_e_q) + wqp * (o.rate_qp - o.rate_e_qp));

    let report = SecrecyReport::assemble(s, [c_q.value, c_qp.value, c_e_q.value, c_e_qp.value], Method::MonteCarlo);
    diff_q.value = report.r_sec_q;
    diff_qp.value = report.r_sec_qp;

    let mean_c_q = est(&|o| o.gain_c_q);
    let mean_c_qp = est(&|o| o.gain_c_qp);
    let gap = |model| {
        (mean_c_q.value - eaves_exponential_mean(s.elements, s.lambda(qp), model)).abs()
            + (mean_c_qp.value - eaves_exponential_mean(s.elements, s.lambda(q), model)).abs()
    };
    let gap_element_count = gap(EavesMeanModel::ElementCount);
    let gap_split_scaled = gap(EavesMeanModel::SplitScaled);

    Ok(McReport {
        report,
        estimates: McEstimates {
            c_q,
            c_qp,
            c_e_q,
            c_e_qp,
            r_sec_q: diff_q,
            r_sec_qp: diff_qp,
            r_sum: McEstimate {
                value: report.r_sum,
                ..r_sum
            },
            wssr: McEstimate {
                value: report.wssr,
                ..wssr
            },
        },
        diagnostics: McDiagnostics {
            mean_a: est(&|o| o.gain_a),
            mean_b: est(&|o| o.gain_b),
            mean_c_q,
            mean_c_qp,
            gap_element_count,
            gap_split_scaled,
            supported_eaves_mean: if gap_split_scaled <= gap_element_count {
                EavesMeanModel::SplitScaled
            } else {
                EavesMeanModel::ElementCount
            },
        },
    })
}

#[inline]
fn accumulate(acc: &mut (f64, f64), amplitude: f64, phase: f64) {
    let (sin, cos) = phase.sin_cos();
    acc.0 += amplitude * cos;
    acc.1 += amplitude * sin;
}

/// Draws `settings.trials` independent samples of the cascaded gain
/// `A = |Σ_m |h_UR,m| |h_RS,m| √λ e^{jθ_m}|²` (unit spreads).
pub fn sample_cascaded_gain(
    elements: u32,
    lambda: f64,
    m_ur: f64,
    m_rs: f64,
    kappa: f64,
    settings: &McSettings,
) -> Result<Vec<f64>> {
    let user_hop = Nakagami::new(m_ur, 1.0)?;
    let surface_hop = Nakagami::new(m_rs, 1.0)?;
    let phase_error = VonMises::new(kappa)?;
    let sqrt_l = lambda.sqrt();
    run_trials(settings, |_, rng| {
        let mut acc = (0.0, 0.0);
        for _ in 0..elements {
            let amp = user_hop.sample(rng) * surface_hop.sample(rng) * sqrt_l;
            accumulate(&mut acc, amp, phase_error.sample(rng));
        }
        Ok(acc.0 * acc.0 + acc.1 * acc.1)
    })
}

/// Kolmogorov-Smirnov distance between the empirical distribution of
/// `samples` and `Gamma(shape, scale)`.
pub fn ks_distance_gamma(samples: &[f64], shape: f64, scale: f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let cdf = gamma_p(shape, x / scale);
            (cdf - i as f64 / n).abs().max(((i + 1) as f64 / n - cdf).abs())
        })
        .fold(0.0, f64::max)
}
