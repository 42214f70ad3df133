//! Closed-form ergodic capacities through the MGF lemma
//! `E[ln(1 + X/(Y+1))] = ∫₀^∞ M_Y(z)(1 - M_X(z))/z · e^{-z} dz`,
//! evaluated by Gauss-Laguerre quadrature.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::fading::{alpha, cascaded_gamma_params, eaves_exponential_mean, PhaseErrorModel};
use crate::numerics::{ExpWeightedIntegral, QuadratureRule};
use crate::scenario::{link_budget, validate_scenario, ScenarioConfig, Side};
use crate::{Error, Result};

/// MGF `E[e^{-zX}]` of a received SNR `X`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MgfSpec {
    /// `(1 + z·s/m)^{-m}`, with `s` the mean SNR.
    Gamma { shape: f64, scaled_mean: f64 },
    /// `1/(1 + z·s)`.
    Exponential { scaled_mean: f64 },
}

impl MgfSpec {
    pub fn gamma(shape: f64, scaled_mean: f64) -> Result<Self> {
        if !(shape > 0.0) || !shape.is_finite() {
            return Err(Error::Domain(format!("Gamma MGF shape must be positive, got {shape}")));
        }
        check_mean(scaled_mean)?;
        Ok(MgfSpec::Gamma { shape, scaled_mean })
    }

    pub fn exponential(scaled_mean: f64) -> Result<Self> {
        check_mean(scaled_mean)?;
        Ok(MgfSpec::Exponential { scaled_mean })
    }

    pub fn scaled_mean(&self) -> f64 {
        match *self {
            MgfSpec::Gamma { scaled_mean, .. } | MgfSpec::Exponential { scaled_mean } => scaled_mean,
        }
    }

    /// `ln M(z)`
    fn log_mgf(&self, z: f64) -> f64 {
        match *self {
            MgfSpec::Gamma { shape, scaled_mean } => -shape * (z * scaled_mean / shape).ln_1p(),
            MgfSpec::Exponential { scaled_mean } => -(z * scaled_mean).ln_1p(),
        }
    }

    /// `1 - M(z)` without cancellation at small `z·s`.
    fn complement(&self, z: f64) -> f64 {
        -self.log_mgf(z).exp_m1()
    }
}

// zero is accepted: it is the no-signal limit and evaluates to zero capacity
fn check_mean(scaled_mean: f64) -> Result<()> {
    if !(scaled_mean >= 0.0) || !scaled_mean.is_finite() {
        return Err(Error::Domain(format!(
            "MGF mean must be finite and non-negative, got {scaled_mean}"
        )));
    }
    Ok(())
}

pub fn mgf_eval(spec: &MgfSpec, z: f64) -> f64 {
    spec.log_mgf(z).exp()
}

/// Ergodic rate (bpcu) of `X/(Y+1)` with independent `X`, `Y`.
pub fn capacity_interference_limited(
    x: &MgfSpec,
    y: &MgfSpec,
    integral: &dyn ExpWeightedIntegral,
) -> Result<f64> {
    let f = |z: f64| mgf_eval(y, z) * x.complement(z) / z;
    Ok(integral.integrate(&f)? / LN_2)
}

/// Ergodic rate (bpcu) of an interference-free SNR `Y`.
pub fn capacity_single(y: &MgfSpec, integral: &dyn ExpWeightedIntegral) -> Result<f64> {
    let f = |z: f64| y.complement(z) / z;
    Ok(integral.integrate(&f)? / LN_2)
}

pub fn secrecy_rate(c_legit: f64, c_eave: f64) -> f64 {
    (c_legit - c_eave).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Analytic,
    MonteCarlo,
}

/// Per-side capacities and secrecy rates in bpcu. The `q` side is the one
/// decoded first (`q_side`); `qp` is the other.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecrecyReport {
    pub q_side: Side,
    pub c_q: f64,
    pub c_qp: f64,
    pub c_e_q: f64,
    pub c_e_qp: f64,
    pub r_sec_q: f64,
    pub r_sec_qp: f64,
    pub r_sum: f64,
    pub wssr: f64,
    pub method: Method,
}

impl SecrecyReport {
    pub(crate) fn assemble(
        s: &ScenarioConfig,
        [c_q, c_qp, c_e_q, c_e_qp]: [f64; 4],
        method: Method,
    ) -> Self {
        let q = s.decode_first;
        let r_sec_q = secrecy_rate(c_q, c_e_q);
        let r_sec_qp = secrecy_rate(c_qp, c_e_qp);
        SecrecyReport {
            q_side: q,
            c_q,
            c_qp,
            c_e_q,
            c_e_qp,
            r_sec_q,
            r_sec_qp,
            r_sum: r_sec_q + r_sec_qp,
            wssr: s.weight(q) * r_sec_q + s.weight(q.other()) * r_sec_qp,
            method,
        }
    }

    pub fn secrecy_rate_of(&self, side: Side) -> f64 {
        if side == self.q_side {
            self.r_sec_q
        } else {
            self.r_sec_qp
        }
    }

    pub fn capacity_of(&self, side: Side) -> f64 {
        if side == self.q_side {
            self.c_q
        } else {
            self.c_qp
        }
    }

    pub fn eaves_capacity_of(&self, side: Side) -> f64 {
        if side == self.q_side {
            self.c_e_q
        } else {
            self.c_e_qp
        }
    }
}

/// The four received-SNR MGFs of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScenarioMgfs {
    /// `ρ_{s,q} A`
    pub legit_q: MgfSpec,
    /// `ρ_{s,q'} B`
    pub legit_qp: MgfSpec,
    /// `ρ_{e,q} C` seen by the eavesdropper opposite `q`
    pub eaves_q: MgfSpec,
    pub eaves_qp: MgfSpec,
}

pub fn scenario_mgfs(s: &ScenarioConfig) -> Result<ScenarioMgfs> {
    validate_scenario(s)?;
    let lb = link_budget(s)?;
    let q = s.decode_first;
    let qp = q.other();
    let phase = PhaseErrorModel::von_mises(s.kappa)?;
    let a = alpha(s.m_ur, s.m_rs)?;
    let gain_q = cascaded_gamma_params(s.elements, s.lambda(q), a, &phase)?;
    let gain_qp = cascaded_gamma_params(s.elements, s.lambda(qp), a, &phase)?;
    // C_q travels through the opposite side's split coefficient
    let eaves_mean_q = eaves_exponential_mean(s.elements, s.lambda(qp), s.eaves_mean);
    let eaves_mean_qp = eaves_exponential_mean(s.elements, s.lambda(q), s.eaves_mean);
    Ok(ScenarioMgfs {
        legit_q: MgfSpec::gamma(gain_q.shape, gain_q.mean * lb.rho_s_q)?,
        legit_qp: MgfSpec::gamma(gain_qp.shape, gain_qp.mean * lb.rho_s_qp)?,
        eaves_q: MgfSpec::exponential(eaves_mean_q * lb.rho_e_q)?,
        eaves_qp: MgfSpec::exponential(eaves_mean_qp * lb.rho_e_qp)?,
    })
}

/// Analytic secrecy report using the Gauss-Laguerre closed forms.
pub fn evaluate_scenario(s: &ScenarioConfig, rule: &QuadratureRule) -> Result<SecrecyReport> {
    evaluate_scenario_with(s, rule)
}

/// Same as [`evaluate_scenario`] with any `∫ f e^{-z}` evaluator.
pub fn evaluate_scenario_with(
    s: &ScenarioConfig,
    integral: &dyn ExpWeightedIntegral,
) -> Result<SecrecyReport> {
    let mgfs = scenario_mgfs(s)?;
    let caps = [
        capacity_interference_limited(&mgfs.legit_q, &mgfs.legit_qp, integral)?,
        capacity_single(&mgfs.legit_qp, integral)?,
        capacity_single(&mgfs.eaves_q, integral)?,
        capacity_single(&mgfs.eaves_qp, integral)?,
    ];
    Ok(SecrecyReport::assemble(s, caps, Method::Analytic))
}
