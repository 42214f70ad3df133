//! Small-scale statistics of the cascaded channel gains.
//!
//! The legitimate gain `A = |Σ_m |h_UR,m| |h_RS,m| √λ e^{jθ_m}|²` is
//! approximated by a Gamma law whose shape and mean come from the CLT
//! statistics of its real and imaginary parts. The eavesdropper gain `C` has
//! uniformly distributed composite phases and is taken as exponential.
//!
//! All Nakagami hops are assumed to have unit spread.

use serde::{Deserialize, Serialize};

use crate::numerics::{ln_gamma, trig_moment};
use crate::{Error, Result};

/// Which mean to use for the exponential eavesdropper gain.
///
/// `ElementCount` is `M`; `SplitScaled` is `M·λ`, which is the exact mean of
/// `C` when the eavesdropper link carries the split coefficient `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EavesMeanModel {
    ElementCount,
    #[default]
    SplitScaled,
}

/// Zero-mean von Mises phase error with its first two trigonometric moments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseErrorModel {
    kappa: f64,
    phi1: f64,
    phi2: f64,
}

impl PhaseErrorModel {
    pub fn von_mises(kappa: f64) -> Result<Self> {
        Ok(Self {
            kappa,
            phi1: trig_moment(1, kappa)?,
            phi2: trig_moment(2, kappa)?,
        })
    }

    /// Builds the model from the moments directly. `kappa` is reported as
    /// `NaN` since it is not needed downstream.
    pub fn from_moments(phi1: f64, phi2: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&phi1) || !(0.0..=1.0).contains(&phi2) {
            return Err(Error::Domain(format!(
                "trigonometric moments must lie in [0, 1], got ({phi1}, {phi2})"
            )));
        }
        Ok(Self {
            kappa: f64::NAN,
            phi1,
            phi2,
        })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn phi1(&self) -> f64 {
        self.phi1
    }

    pub fn phi2(&self) -> f64 {
        self.phi2
    }
}

/// Shape `m` and mean `Ω` of a Gamma-distributed power gain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaApprox {
    pub shape: f64,
    pub mean: f64,
}

impl GammaApprox {
    pub fn scale(&self) -> f64 {
        self.mean / self.shape
    }
}

/// Mean and variances of `U = Re √A` and `V = Im √A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RealPartStats {
    pub mean_u: f64,
    pub var_u: f64,
    pub var_v: f64,
}

impl RealPartStats {
    /// `E[A] = E[U]² + Var U + Var V`, exact under independence of elements.
    pub fn second_moment(&self) -> f64 {
        self.mean_u * self.mean_u + self.var_u + self.var_v
    }

    /// Nakagami shape of `√A` obtained by dropping everything but the leading
    /// term of the cumulant generating function of `A`.
    pub fn nakagami_shape_of_root(&self) -> f64 {
        self.mean_u * self.mean_u / (4.0 * self.var_u)
    }
}

/// `E|h| = Γ(m + ½) / (Γ(m) √m)` for a unit-spread Nakagami-m amplitude.
pub fn nakagami_amplitude_mean(m: f64) -> Result<f64> {
    if !(m >= 0.5) || !m.is_finite() {
        return Err(Error::Domain(format!("Nakagami shape must be >= 0.5, got {m}")));
    }
    Ok((ln_gamma(m + 0.5) - ln_gamma(m) - 0.5 * m.ln()).exp())
}

/// `α = √(E|h_UR| E|h_RS|)`.
pub fn alpha(m_ur: f64, m_rs: f64) -> Result<f64> {
    Ok((nakagami_amplitude_mean(m_ur)? * nakagami_amplitude_mean(m_rs)?).sqrt())
}

fn check_elements(elements: u32) -> Result<f64> {
    if elements == 0 {
        return Err(Error::Domain("element count must be at least 1".into()));
    }
    Ok(elements as f64)
}

pub fn real_part_stats(
    elements: u32,
    lambda: f64,
    alpha: f64,
    phase: &PhaseErrorModel,
) -> Result<RealPartStats> {
    let m = check_elements(elements)?;
    let a4p1 = alpha.powi(4) * phase.phi1 * phase.phi1;
    let var_u = 0.5 * m * lambda * (1.0 + phase.phi2 - 2.0 * a4p1);
    let var_v = 0.5 * m * lambda * (1.0 - phase.phi2);
    if !(var_u > 0.0) || var_v < 0.0 {
        return Err(Error::Degenerate(format!(
            "non-positive real-part variance (var_u = {var_u}, var_v = {var_v})"
        )));
    }
    Ok(RealPartStats {
        mean_u: m * lambda.sqrt() * alpha * alpha * phase.phi1,
        var_u,
        var_v,
    })
}

/// Gamma approximation of `A`: `m = E²U / (4 Var U)`, `Ω = E²U`.
pub fn cascaded_gamma_params(
    elements: u32,
    lambda: f64,
    alpha: f64,
    phase: &PhaseErrorModel,
) -> Result<GammaApprox> {
    let m = check_elements(elements)?;
    let a4p1 = alpha.powi(4) * phase.phi1 * phase.phi1;
    let denom = 2.0 * (1.0 + phase.phi2 - 2.0 * a4p1);
    if !(denom > 0.0) {
        return Err(Error::Degenerate(format!(
            "Gamma fit undefined: 1 + φ₂ - 2α⁴φ₁² = {}",
            denom / 2.0
        )));
    }
    if !(a4p1 > 0.0) {
        return Err(Error::Degenerate(
            "no coherent component (φ₁ = 0); Gamma fit undefined".into(),
        ));
    }
    Ok(GammaApprox {
        shape: m * a4p1 / denom,
        mean: m * m * lambda * a4p1,
    })
}

pub fn eaves_exponential_mean(elements: u32, lambda: f64, model: EavesMeanModel) -> f64 {
    let m = elements as f64;
    match model {
        EavesMeanModel::ElementCount => m,
        EavesMeanModel::SplitScaled => m * lambda,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const PHI1_K5: f64 = 0.893_383_137;
    const PHI2_K5: f64 = 0.642_646_745;

    #[test]
    fn amplitude_means() {
        assert!((nakagami_amplitude_mean(1.0).unwrap() - PI.sqrt() / 2.0).abs() < 1e-13);
        // Γ(2.5) = 0.75 √π, Γ(2) = 1
        let m2 = 0.75 * PI.sqrt() / 2f64.sqrt();
        assert!((nakagami_amplitude_mean(2.0).unwrap() - m2).abs() < 1e-13);
        assert!((m2 - 0.939_986).abs() < 1e-6);
        assert!(nakagami_amplitude_mean(0.4).is_err());
        let mut last = 0.0;
        for m in [0.5, 1.0, 3.0, 10.0, 100.0, 1e4] {
            let v = nakagami_amplitude_mean(m).unwrap();
            assert!(v > last && v < 1.0);
            last = v;
        }
        assert!(1.0 - last < 1e-4);
    }

    #[test]
    fn alpha_values() {
        assert!((alpha(1.0, 1.0).unwrap() - 0.886_226_925_452_758).abs() < 1e-12);
        let a = alpha(2.0, 2.0).unwrap();
        assert!((a - 0.939_986).abs() < 1e-6);
        assert!((a * a - 0.883_574).abs() < 2e-6);
    }

    #[test]
    fn uniform_phase_stats() {
        let phase = PhaseErrorModel::von_mises(0.0).unwrap();
        let s = real_part_stats(40, 0.5, alpha(2.0, 2.0).unwrap(), &phase).unwrap();
        assert_eq!(s.mean_u, 0.0);
        assert_eq!(s.var_u, 10.0);
        assert_eq!(s.var_v, 10.0);
    }

    #[test]
    fn table_one_stats() {
        let phase = PhaseErrorModel::von_mises(5.0).unwrap();
        assert!((phase.phi1() - PHI1_K5).abs() < 1e-6);
        assert!((phase.phi2() - PHI2_K5).abs() < 1e-6);
        let a = alpha(2.0, 2.0).unwrap();
        let s = real_part_stats(40, 0.5, a, &phase).unwrap();
        assert!((s.mean_u - 22.33).abs() < 5e-3, "{}", s.mean_u);
        assert!((s.var_u - 3.965).abs() < 5e-3, "{}", s.var_u);
        let g = cascaded_gamma_params(40, 0.5, a, &phase).unwrap();
        assert!((g.shape - 31.435).abs() < 1e-3, "{}", g.shape);
        assert!((g.mean - 498.5).abs() < 0.05, "{}", g.mean);
    }

    #[test]
    fn scaling_structure() {
        let phase = PhaseErrorModel::von_mises(5.0).unwrap();
        let a = alpha(2.0, 2.0).unwrap();
        let base = real_part_stats(40, 0.5, a, &phase).unwrap();
        let big = real_part_stats(80, 0.5, a, &phase).unwrap();
        assert!((big.mean_u / base.mean_u - 2.0).abs() < 1e-12);
        let quarter = real_part_stats(40, 0.125, a, &phase).unwrap();
        assert!((base.mean_u / quarter.mean_u - 2.0).abs() < 1e-12);

        let g1 = cascaded_gamma_params(40, 0.5, a, &phase).unwrap();
        let g2 = cascaded_gamma_params(40, 0.2, a, &phase).unwrap();
        let g3 = cascaded_gamma_params(80, 0.5, a, &phase).unwrap();
        assert!((g1.shape - g2.shape).abs() < 1e-12);
        assert!((g3.mean / g1.mean - 4.0).abs() < 1e-12);
    }

    #[test]
    fn perfect_alignment_is_degenerate() {
        let phase = PhaseErrorModel::from_moments(1.0, 1.0).unwrap();
        assert!(matches!(
            cascaded_gamma_params(40, 0.5, 1.0, &phase),
            Err(Error::Degenerate(_))
        ));
        assert!(matches!(
            real_part_stats(40, 0.5, 1.0, &phase),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn root_shape_matches_gamma_shape() {
        let a = alpha(2.0, 1.5).unwrap();
        for kappa in [0.5, 2.0, 5.0, 8.0, 50.0, 400.0] {
            let phase = PhaseErrorModel::von_mises(kappa).unwrap();
            for m in [10, 40, 160] {
                let s = real_part_stats(m, 0.3, a, &phase).unwrap();
                let g = cascaded_gamma_params(m, 0.3, a, &phase).unwrap();
                let rel = (s.nakagami_shape_of_root() - g.shape).abs() / g.shape;
                assert!(rel < 1e-12, "κ={kappa} M={m}");
                assert!((s.mean_u * s.mean_u - g.mean).abs() / g.mean < 1e-12);
            }
        }
    }

    #[test]
    fn concentration_improves_shape() {
        let a = alpha(2.0, 2.0).unwrap();
        let mut last = 0.0;
        for kappa in [0.5, 1.0, 2.0, 5.0, 8.0, 20.0, 50.0, 500.0] {
            let phase = PhaseErrorModel::von_mises(kappa).unwrap();
            let g = cascaded_gamma_params(40, 0.5, a, &phase).unwrap();
            assert!(g.shape > last);
            last = g.shape;
        }
    }

    #[test]
    fn eaves_mean_variants() {
        assert_eq!(eaves_exponential_mean(40, 0.5, EavesMeanModel::ElementCount), 40.0);
        assert_eq!(eaves_exponential_mean(1, 0.5, EavesMeanModel::ElementCount), 1.0);
        assert_eq!(eaves_exponential_mean(40, 0.5, EavesMeanModel::SplitScaled), 20.0);
    }
}
