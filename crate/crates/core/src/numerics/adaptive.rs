//! Globally adaptive Gauss-Kronrod (7/15) integration of `f(z) e^{-z}` over
//! `(0, ∞)`, mapped onto `[0, 1)` by `z = t / (1 - t)`.
//!
//! Used only as an independent cross-check of the Laguerre closed forms.

use serde::Serialize;

use super::ExpWeightedIntegral;
use crate::Result;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdaptiveResult {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions: usize,
    /// `false` when the subdivision budget ran out before the tolerance was
    /// met; `value` is still the best available estimate.
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct AdaptiveIntegrator {
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for AdaptiveIntegrator {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            max_subdivisions: 4000,
        }
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl AdaptiveIntegrator {
    pub fn run(&self, f: &dyn Fn(f64) -> f64) -> AdaptiveResult {
        let g = |t: f64| -> f64 {
            let one_minus = 1.0 - t;
            let z = t / one_minus;
            if z > 740.0 {
                return 0.0;
            }
            f(z) * (-z).exp() / (one_minus * one_minus)
        };

        let mut segments = vec![kronrod(&g, 0.0, 1.0)];
        loop {
            let total: f64 = segments.iter().map(|s| s.value).sum();
            let err: f64 = segments.iter().map(|s| s.error).sum();
            let done = err <= self.abs_tol;
            if done || segments.len() >= self.max_subdivisions {
                return AdaptiveResult {
                    value: total,
                    error_estimate: err,
                    subdivisions: segments.len(),
                    converged: done,
                };
            }
            let (worst, _) = segments
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
                .expect("at least one segment");
            let s = segments.swap_remove(worst);
            let mid = 0.5 * (s.a + s.b);
            segments.push(kronrod(&g, s.a, mid));
            segments.push(kronrod(&g, mid, s.b));
        }
    }
}

impl ExpWeightedIntegral for AdaptiveIntegrator {
    fn integrate(&self, f: &dyn Fn(f64) -> f64) -> Result<f64> {
        Ok(self.run(f).value)
    }
}

fn kronrod(g: &dyn Fn(f64) -> f64, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = g(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = g(center - dx) + g(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// `∫₀^∞ f(z) e^{-z} dz` with the default tolerance (absolute 1e-10).
pub fn integrate_exp_weighted_adaptive<F>(f: F) -> AdaptiveResult
where
    F: Fn(f64) -> f64,
{
    AdaptiveIntegrator::default().run(&f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant() {
        let r = integrate_exp_weighted_adaptive(|_| 1.0);
        assert!(r.converged);
        assert!((r.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn factorial_moments() {
        for (k, fact) in [(1, 1.0), (2, 2.0), (3, 6.0), (5, 120.0)] {
            let r = integrate_exp_weighted_adaptive(|z: f64| z.powi(k));
            assert!((r.value - fact).abs() < 1e-9 * fact, "k={k}: {}", r.value);
        }
    }

    #[test]
    fn exhausted_budget_is_flagged() {
        let tight = AdaptiveIntegrator {
            abs_tol: 0.0,
            max_subdivisions: 3,
        };
        let r = tight.run(&|z: f64| 1.0 / (1.0 + z));
        assert!(!r.converged);
        assert_eq!(r.subdivisions, 3);
        assert!((r.value - 0.596_347_362_323_194).abs() < 1e-3);
    }
}
