//! Geometry, large-scale path loss and the composite SNR scale factors.

use serde::{Deserialize, Serialize};

use crate::error::Violation;
use crate::fading::EavesMeanModel;
use crate::{Error, Result};

/// Default scenario, shipped as `presets/scenario.default.json`.
pub const DEFAULT_SCENARIO_JSON: &str = include_str!("../presets/scenario.default.json");

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Position3D {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position3D {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn translated(self, by: Position3D) -> Self {
        Self::new(self.x + by.x, self.y + by.y, self.z + by.z)
    }

    fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// Side of the surface a node sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "r")]
    Reflection,
    #[serde(rename = "t")]
    Transmission,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Reflection => Side::Transmission,
            Side::Transmission => Side::Reflection,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Side::Reflection => "r",
            Side::Transmission => "t",
        }
    }
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "r" | "reflection" => Ok(Side::Reflection),
            "t" | "transmission" => Ok(Side::Transmission),
            other => Err(Error::Config(format!("unknown side {other:?}, expected r or t"))),
        }
    }
}

/// Complete system description. Powers are in dBm; a power of `-inf`
/// (`null` in JSON) means the node is silent.
///
/// `w1` weights the reflection-side secrecy rate and `w2` the transmission
/// side. `decode_first` names the side whose signal is decoded first under SIC
/// and therefore sees the other user as interference (the `q` side).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub ap: Position3D,
    pub uav: Position3D,
    pub user_r: Position3D,
    pub user_t: Position3D,
    pub eaves_r: Position3D,
    pub eaves_t: Position3D,
    #[serde(with = "dbm")]
    pub power_r_dbm: f64,
    #[serde(with = "dbm")]
    pub power_t_dbm: f64,
    pub power_max_dbm: f64,
    pub noise_dbm: f64,
    pub elements: u32,
    pub lambda_r: f64,
    pub lambda_t: f64,
    pub m_ur: f64,
    pub m_rs: f64,
    pub omega: f64,
    pub kappa: f64,
    pub path_loss_exponent: f64,
    pub path_loss_db: f64,
    pub w1: f64,
    pub w2: f64,
    pub decode_first: Side,
    pub eaves_mean: EavesMeanModel,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        serde_json::from_str(DEFAULT_SCENARIO_JSON).expect("embedded default scenario is valid")
    }
}

impl ScenarioConfig {
    pub fn user(&self, side: Side) -> Position3D {
        match side {
            Side::Reflection => self.user_r,
            Side::Transmission => self.user_t,
        }
    }

    pub fn eaves(&self, side: Side) -> Position3D {
        match side {
            Side::Reflection => self.eaves_r,
            Side::Transmission => self.eaves_t,
        }
    }

    pub fn power_dbm(&self, side: Side) -> f64 {
        match side {
            Side::Reflection => self.power_r_dbm,
            Side::Transmission => self.power_t_dbm,
        }
    }

    pub fn lambda(&self, side: Side) -> f64 {
        match side {
            Side::Reflection => self.lambda_r,
            Side::Transmission => self.lambda_t,
        }
    }

    pub fn weight(&self, side: Side) -> f64 {
        match side {
            Side::Reflection => self.w1,
            Side::Transmission => self.w2,
        }
    }

    /// Sets both users to the same transmit power.
    pub fn with_power_dbm(mut self, dbm: f64) -> Self {
        self.power_r_dbm = dbm;
        self.power_t_dbm = dbm;
        self
    }

    pub fn with_uav_xy(mut self, x: f64, y: f64) -> Self {
        self.uav.x = x;
        self.uav.y = y;
        self
    }

    /// Swaps everything attached to the two sides: positions, powers, split
    /// coefficients, weights and the decode order. Describes the same physical
    /// system under exchanged labels.
    pub fn relabeled(&self) -> Self {
        let mut s = self.clone();
        std::mem::swap(&mut s.user_r, &mut s.user_t);
        std::mem::swap(&mut s.eaves_r, &mut s.eaves_t);
        std::mem::swap(&mut s.power_r_dbm, &mut s.power_t_dbm);
        std::mem::swap(&mut s.lambda_r, &mut s.lambda_t);
        std::mem::swap(&mut s.w1, &mut s.w2);
        s.decode_first = s.decode_first.other();
        s
    }

    /// Moves every node, the AP and the UAV by the same offset.
    pub fn translated(&self, by: Position3D) -> Self {
        let mut s = self.clone();
        for p in [
            &mut s.ap,
            &mut s.uav,
            &mut s.user_r,
            &mut s.user_t,
            &mut s.eaves_r,
            &mut s.eaves_t,
        ] {
            *p = p.translated(by);
        }
        s
    }
}

/// Composite SNR scale factors (linear). `q` is the side decoded first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkBudget {
    pub rho_s_q: f64,
    pub rho_s_qp: f64,
    pub rho_e_q: f64,
    pub rho_e_qp: f64,
}

pub fn distance(a: Position3D, b: Position3D) -> f64 {
    let (dx, dy, dz) = (a.x - b.x, a.y - b.y, a.z - b.z);
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// `β d^{-a}` with `β` given in dB at 1 m.
pub fn path_loss(d: f64, beta_db: f64, exponent: f64) -> Result<f64> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::Domain(format!(
            "path loss needs a positive finite distance, got {d} (co-located endpoints?)"
        )));
    }
    Ok(db_to_linear(beta_db) * d.powf(-exponent))
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn link_budget(s: &ScenarioConfig) -> Result<LinkBudget> {
    let q = s.decode_first;
    let qp = q.other();
    let hop = |a: Position3D, b: Position3D| path_loss(distance(a, b), s.path_loss_db, s.path_loss_exponent);

    let l_rs = hop(s.uav, s.ap)?;
    let l_ur_q = hop(s.user(q), s.uav)?;
    let l_ur_qp = hop(s.user(qp), s.uav)?;
    // U_q is overheard by the idle node on the opposite side, and vice versa
    let l_re_q = hop(s.uav, s.eaves(qp))?;
    let l_re_qp = hop(s.uav, s.eaves(q))?;

    let n0 = db_to_linear(s.noise_dbm);
    let p_q = db_to_linear(s.power_dbm(q));
    let p_qp = db_to_linear(s.power_dbm(qp));
    Ok(LinkBudget {
        rho_s_q: p_q * l_ur_q * l_rs / n0,
        rho_s_qp: p_qp * l_ur_qp * l_rs / n0,
        rho_e_q: p_q * l_ur_q * l_re_q / n0,
        rho_e_qp: p_qp * l_ur_qp * l_re_qp / n0,
    })
}

const SUM_TOL: f64 = 1e-9;

/// Checks every scenario constraint and reports all violations together.
pub fn validate_scenario(s: &ScenarioConfig) -> Result<&ScenarioConfig> {
    let mut v = Vec::new();
    let mut push = |constraint: &'static str, field: &str, value: String| {
        v.push(Violation {
            constraint,
            field: field.to_string(),
            value,
        })
    };

    for (name, p) in [
        ("ap", s.ap),
        ("uav", s.uav),
        ("user_r", s.user_r),
        ("user_t", s.user_t),
        ("eaves_r", s.eaves_r),
        ("eaves_t", s.eaves_t),
    ] {
        if !p.is_finite() {
            push("finite-position", name, format!("{p:?}"));
        }
    }
    for (name, p) in [
        ("ap", s.ap),
        ("user_r", s.user_r),
        ("user_t", s.user_t),
        ("eaves_r", s.eaves_r),
        ("eaves_t", s.eaves_t),
    ] {
        if distance(s.uav, p) == 0.0 {
            push("uav-colocated", name, format!("{p:?}"));
        }
    }

    for (name, l) in [("lambda_r", s.lambda_r), ("lambda_t", s.lambda_t)] {
        if !(l > 0.0 && l < 1.0) {
            push("es-split-range", name, l.to_string());
        }
    }
    if !((s.lambda_r + s.lambda_t - 1.0).abs() <= SUM_TOL) {
        push(
            "es-conservation",
            "lambda_r + lambda_t",
            (s.lambda_r + s.lambda_t).to_string(),
        );
    }

    for (name, w) in [("w1", s.w1), ("w2", s.w2)] {
        if !(0.0..=1.0).contains(&w) {
            push("weight-range", name, w.to_string());
        }
    }
    if !((s.w1 + s.w2 - 1.0).abs() <= SUM_TOL) {
        push("weight-sum", "w1 + w2", (s.w1 + s.w2).to_string());
    }

    if !s.power_max_dbm.is_finite() {
        push("power-bound", "power_max_dbm", s.power_max_dbm.to_string());
    }
    for (name, p) in [("power_r_dbm", s.power_r_dbm), ("power_t_dbm", s.power_t_dbm)] {
        // -inf dBm is a silent node, i.e. zero linear power
        if p.is_nan() || p == f64::INFINITY || p > s.power_max_dbm {
            push("power-bound", name, p.to_string());
        }
    }
    if !s.noise_dbm.is_finite() {
        push("noise-power", "noise_dbm", s.noise_dbm.to_string());
    }

    if s.elements == 0 {
        push("element-count", "elements", s.elements.to_string());
    }
    for (name, m) in [("m_ur", s.m_ur), ("m_rs", s.m_rs)] {
        if !(m >= 0.5 && m.is_finite()) {
            push("nakagami-shape", name, m.to_string());
        }
    }
    if !((s.omega - 1.0).abs() <= 1e-12) {
        push("unit-spread", "omega", s.omega.to_string());
    }
    if !(s.kappa >= 0.0 && s.kappa.is_finite()) {
        push("concentration", "kappa", s.kappa.to_string());
    }
    if !(s.path_loss_exponent >= 0.0 && s.path_loss_exponent.is_finite()) {
        push("path-loss-exponent", "path_loss_exponent", s.path_loss_exponent.to_string());
    }
    if !s.path_loss_db.is_finite() {
        push("path-loss-reference", "path_loss_db", s.path_loss_db.to_string());
    }

    if v.is_empty() {
        Ok(s)
    } else {
        Err(Error::Validation(v))
    }
}

/// dBm values where `-inf` (silence) round-trips through JSON as `null`.
mod dbm {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if *v == f64::NEG_INFINITY {
            s.serialize_none()
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NEG_INFINITY))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn violations(s: &ScenarioConfig) -> Vec<&'static str> {
        match validate_scenario(s) {
            Ok(_) => vec![],
            Err(Error::Validation(v)) => v.iter().map(|v| v.constraint).collect(),
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn distances() {
        let o = Position3D::default();
        assert_eq!(distance(o, o), 0.0);
        assert_eq!(distance(Position3D::new(3.0, 4.0, 0.0), o), 5.0);
        let d = distance(Position3D::new(50.0, 50.0, 100.0), Position3D::new(0.0, 0.0, 10.0));
        assert!((d - 13100f64.sqrt()).abs() < 1e-12);
        assert!((d - 114.4552).abs() < 1e-4);
    }

    #[test]
    fn path_loss_values() {
        assert!((path_loss(1.0, -20.0, 2.7).unwrap() - 0.01).abs() < 1e-15);
        assert!((path_loss(37.0, -20.0, 0.0).unwrap() - 0.01).abs() < 1e-15);
        // direct evaluation: 0.01 * 114.4552^-2.7
        let expected = 0.01 * (-2.7 * 114.4552f64.ln()).exp();
        let got = path_loss(114.4552, -20.0, 2.7).unwrap();
        assert!((got - expected).abs() / expected < 1e-14);
        assert!((got - 2.76e-8).abs() < 0.01e-8);
        assert!(path_loss(0.0, -20.0, 2.7).is_err());
        assert!(path_loss(-1.0, -20.0, 2.7).is_err());
    }

    #[test]
    fn default_is_valid() {
        let s = ScenarioConfig::default();
        assert!(validate_scenario(&s).is_ok());
        assert_eq!(s.elements, 40);
        assert_eq!(s.lambda_r, 0.5);
    }

    #[test]
    fn es_conservation_violation() {
        let mut s = ScenarioConfig::default();
        s.lambda_r = 0.7;
        s.lambda_t = 0.7;
        assert_eq!(violations(&s), vec!["es-conservation"]);
    }

    #[test]
    fn power_bound_violation() {
        let mut s = ScenarioConfig::default();
        s.power_r_dbm = 30.0;
        assert_eq!(violations(&s), vec!["power-bound"]);
    }

    #[test]
    fn all_violations_reported_at_once() {
        let mut s = ScenarioConfig::default();
        s.kappa = -1.0;
        s.omega = 2.0;
        s.m_rs = 0.2;
        s.w1 = 0.9;
        s.uav = s.ap;
        let v = violations(&s);
        for c in ["concentration", "unit-spread", "nakagami-shape", "weight-sum", "uav-colocated"] {
            assert!(v.contains(&c), "{c} missing from {v:?}");
        }
    }

    #[test]
    fn silent_node_round_trips() {
        let s = ScenarioConfig::default().with_power_dbm(f64::NEG_INFINITY);
        assert!(validate_scenario(&s).is_ok());
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("\"power_r_dbm\":null"));
        let back: ScenarioConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back.power_t_dbm, f64::NEG_INFINITY);
    }

    #[test]
    fn link_budget_matches_hand_composition() {
        let s = ScenarioConfig::default();
        let lb = link_budget(&s).unwrap();
        let pl = |a, b| 0.01 * distance(a, b).powf(-2.7);
        let p = 10f64.powf(2.3);
        let n0 = 1e-10;
        let expected = [
            p * pl(s.user_r, s.uav) * pl(s.uav, s.ap) / n0,
            p * pl(s.user_t, s.uav) * pl(s.uav, s.ap) / n0,
            p * pl(s.user_r, s.uav) * pl(s.uav, s.eaves_t) / n0,
            p * pl(s.user_t, s.uav) * pl(s.uav, s.eaves_r) / n0,
        ];
        let got = [lb.rho_s_q, lb.rho_s_qp, lb.rho_e_q, lb.rho_e_qp];
        for (g, e) in got.iter().zip(expected) {
            assert!(g.is_finite() && *g > 0.0);
            assert!((g - e).abs() / e < 1e-12);
        }
    }

    #[test]
    fn doubling_power_doubles_its_own_factors() {
        let mut s = ScenarioConfig::default();
        s.power_r_dbm = 20.0;
        let base = link_budget(&s).unwrap();
        s.power_r_dbm = 20.0 + 10.0 * 2f64.log10();
        let up = link_budget(&s).unwrap();
        assert!((up.rho_s_q / base.rho_s_q - 2.0).abs() < 1e-12);
        assert!((up.rho_e_q / base.rho_e_q - 2.0).abs() < 1e-12);
        assert_eq!(up.rho_s_qp, base.rho_s_qp);
        assert_eq!(up.rho_e_qp, base.rho_e_qp);
    }

    #[test]
    fn mirrored_users_have_equal_legit_factors() {
        let mut s = ScenarioConfig::default();
        s.ap = Position3D::new(50.0, 50.0, 10.0);
        s.user_r = Position3D::new(20.0, 30.0, 0.0);
        s.user_t = Position3D::new(80.0, 70.0, 0.0);
        let lb = link_budget(&s).unwrap();
        assert!((lb.rho_s_q - lb.rho_s_qp).abs() / lb.rho_s_q < 1e-12);
    }

    #[test]
    fn colocated_uav_is_domain_error() {
        let mut s = ScenarioConfig::default();
        s.uav = s.eaves_t;
        assert!(matches!(link_budget(&s), Err(Error::Domain(_))));
    }

    fn pos() -> impl Strategy<Value = Position3D> {
        (-500.0..500.0f64, -500.0..500.0f64, -500.0..500.0f64)
            .prop_map(|(x, y, z)| Position3D::new(x, y, z))
    }

    proptest! {
        #[test]
        fn distance_is_a_metric(a in pos(), b in pos(), c in pos()) {
            prop_assert_eq!(distance(a, b), distance(b, a));
            prop_assert!(distance(a, c) <= distance(a, b) + distance(b, c) + 1e-9);
        }

        #[test]
        fn path_loss_monotone(d1 in 0.1..1e3f64, dd in 1e-3..1e3f64, a in 0.1..5.0f64, da in 1e-3..2.0f64) {
            prop_assert!(path_loss(d1 + dd, -20.0, a).unwrap() < path_loss(d1, -20.0, a).unwrap());
            let d = 1.0 + d1;
            prop_assert!(path_loss(d, -20.0, a + da).unwrap() < path_loss(d, -20.0, a).unwrap());
        }

        #[test]
        fn link_budget_translation_invariant(off in pos()) {
            let s = ScenarioConfig::default();
            let a = link_budget(&s).unwrap();
            let b = link_budget(&s.translated(off)).unwrap();
            for (x, y) in [(a.rho_s_q, b.rho_s_q), (a.rho_s_qp, b.rho_s_qp), (a.rho_e_q, b.rho_e_q), (a.rho_e_qp, b.rho_e_qp)] {
                prop_assert!((x - y).abs() / x < 1e-9);
            }
        }
    }
}
