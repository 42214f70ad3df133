//! Gauss-Laguerre rules from the Jacobi matrix of the Laguerre polynomials
//! (Golub-Welsch), with Newton polishing of each node and weights computed
//! in log space from the three-term recurrence.

use serde::Serialize;

use super::ExpWeightedIntegral;
use crate::{Error, Result};

pub const DEFAULT_LAGUERRE_ORDER: usize = 300;
pub const MAX_LAGUERRE_ORDER: usize = 2000;

/// Nodes `Z_ℓ` and weights `W_ℓ` of an `L`-point Gauss-Laguerre rule.
///
/// Weights of the largest nodes fall below the smallest subnormal once
/// `Z_ℓ ≳ 745` and are stored as exactly zero; those nodes contribute nothing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

impl ExpWeightedIntegral for QuadratureRule {
    fn integrate(&self, f: &dyn Fn(f64) -> f64) -> Result<f64> {
        integrate_exp_weighted(f, self)
    }
}

/// `Σ W_ℓ f(Z_ℓ)`, i.e. `∫₀^∞ f(z) e^{-z} dz` for smooth `f`.
pub fn integrate_exp_weighted<F>(f: F, rule: &QuadratureRule) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mut sum = 0.0;
    for (index, (z, w)) in rule.iter().enumerate() {
        let v = f(z);
        if !v.is_finite() {
            return Err(Error::NonFiniteIntegrand { index, node: z });
        }
        sum += w * v;
    }
    Ok(sum)
}

/// Builds the `order`-point rule, `1 ≤ order ≤ MAX_LAGUERRE_ORDER`.
pub fn laguerre_rule(order: usize) -> Result<QuadratureRule> {
    if order == 0 || order > MAX_LAGUERRE_ORDER {
        return Err(Error::Config(format!(
            "Laguerre order must be in 1..={MAX_LAGUERRE_ORDER}, got {order}"
        )));
    }
    let n = order;
    let diag: Vec<f64> = (0..n).map(|i| (2 * i + 1) as f64).collect();
    let off: Vec<f64> = (1..n).map(|i| i as f64).collect();
    let mut nodes = tridiagonal_eigenvalues(diag, &off)?;
    nodes.sort_by(|a, b| a.total_cmp(b));

    let mut weights = Vec::with_capacity(n);
    for z in nodes.iter_mut() {
        *z = polish_root(n, *z);
        weights.push((-log_christoffel_sum(n, *z)).exp());
    }
    Ok(QuadratureRule { nodes, weights })
}

/// `(ln s, L_n(z)/s, L_{n-1}(z)/s)` for a common scale `s` that keeps the
/// recurrence in range.
fn laguerre_pair(n: usize, z: f64) -> (f64, f64, f64) {
    let mut prev = 1.0;
    let mut cur = 1.0 - z;
    let mut log_scale = 0.0;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 - z) * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
        let big = cur.abs().max(prev.abs());
        if big > 1e150 {
            prev /= big;
            cur /= big;
            log_scale += big.ln();
        }
    }
    (log_scale, cur, prev)
}

/// `ln Σ_{k<n} L_k(z)²`. Its reciprocal is the weight at a node; the sum of
/// squares avoids the cancellation in `L_{n-1}` that the derivative formula
/// suffers near the origin.
fn log_christoffel_sum(n: usize, z: f64) -> f64 {
    let mut prev = 1.0;
    let mut cur = 1.0 - z;
    let mut sum = 1.0;
    let mut log_scale = 0.0;
    if n > 1 {
        sum += cur * cur;
    }
    for k in 1..n.saturating_sub(1) {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 - z) * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
        sum += cur * cur;
        let big = cur.abs().max(prev.abs());
        if big > 1e100 {
            prev /= big;
            cur /= big;
            sum /= big * big;
            log_scale += 2.0 * big.ln();
        }
    }
    sum.ln() + log_scale
}

fn polish_root(n: usize, mut z: f64) -> f64 {
    for _ in 0..8 {
        let (_, l_n, l_prev) = laguerre_pair(n, z);
        let denom = n as f64 * (l_n - l_prev);
        if denom == 0.0 {
            break;
        }
        // L_n'(z) = n (L_n - L_{n-1}) / z
        let step = z * l_n / denom;
        let next = z - step;
        if !(next > 0.0) || !next.is_finite() {
            break;
        }
        z = next;
        if step.abs() <= 4.0 * f64::EPSILON * z {
            break;
        }
    }
    z
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `off` (implicit QL with Wilkinson shifts).
fn tridiagonal_eigenvalues(mut d: Vec<f64>, off: &[f64]) -> Result<Vec<f64>> {
    let n = d.len();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(off);
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > 60 {
                return Err(Error::Domain(
                    "tridiagonal QL iteration did not converge".into(),
                ));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_point_rule() {
        let r = laguerre_rule(1).unwrap();
        assert_eq!(r.nodes().len(), 1);
        assert!((r.nodes()[0] - 1.0).abs() < 1e-15);
        assert!((r.weights()[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_point_rule() {
        let r = laguerre_rule(2).unwrap();
        let s2 = 2f64.sqrt();
        assert!((r.nodes()[0] - (2.0 - s2)).abs() < 1e-14);
        assert!((r.nodes()[1] - (2.0 + s2)).abs() < 1e-14);
        assert!((r.weights()[0] - (2.0 + s2) / 4.0).abs() < 1e-14);
        assert!((r.weights()[1] - (2.0 - s2) / 4.0).abs() < 1e-14);
    }

    #[test]
    fn order_bounds() {
        assert!(matches!(laguerre_rule(0), Err(Error::Config(_))));
        assert!(matches!(
            laguerre_rule(MAX_LAGUERRE_ORDER + 1),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn low_moments_for_many_orders() {
        for &l in &[1usize, 2, 5, 17, 64, 300, 1000, 2000] {
            let r = laguerre_rule(l).unwrap();
            assert!(r.nodes().windows(2).all(|w| w[0] < w[1]), "L={l}");
            assert!(r.nodes()[0] > 0.0);
            assert!(r.weights().iter().all(|w| *w >= 0.0));
            let m0: f64 = r.weights().iter().sum();
            let m1: f64 = r.iter().map(|(z, w)| w * z).sum();
            assert!((m0 - 1.0).abs() < 1e-12, "L={l}: Σw = {m0}");
            assert!((m1 - 1.0).abs() < 1e-10, "L={l}: Σwz = {m1}");
            if l >= 2 {
                let m2: f64 = r.iter().map(|(z, w)| w * z * z).sum();
                assert!((m2 - 2.0).abs() < 1e-9, "L={l}: Σwz² = {m2}");
            }
        }
    }

    #[test]
    fn non_finite_integrand_names_node() {
        let r = laguerre_rule(4).unwrap();
        let bad = r.nodes()[2];
        let err = integrate_exp_weighted(|z| if z == bad { f64::NAN } else { 1.0 }, &r).unwrap_err();
        assert!(matches!(err, Error::NonFiniteIntegrand { index: 2, .. }));
    }

    #[test]
    fn cubic_exact_from_two_points() {
        let r = laguerre_rule(2).unwrap();
        let v = integrate_exp_weighted(|z| z.powi(3), &r).unwrap();
        assert!((v - 6.0).abs() < 1e-12);
    }
}
