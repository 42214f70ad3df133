//! UAV placement: alternating one-dimensional grid search and the dense
//! WSSR surface over the horizontal plane. The UAV altitude stays fixed.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::numerics::QuadratureRule;
use crate::output::{number, write_csv};
use crate::rates::evaluate_scenario;
use crate::scenario::{validate_scenario, Position3D, ScenarioConfig};
use crate::{Error, Result};

pub const DEFAULT_EPS0: f64 = 1e-6;
pub const DEFAULT_K_MAX: usize = 50;

/// Rectangular grid `x_min, x_min + step, …` (and the same for `y`). The last
/// point is the largest grid value not beyond the upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchRegion {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub step: f64,
}

impl Default for SearchRegion {
    fn default() -> Self {
        Self {
            x_min: -100.0,
            x_max: 100.0,
            y_min: -100.0,
            y_max: 100.0,
            step: 1.0,
        }
    }
}

impl SearchRegion {
    pub fn single_cell(x: f64, y: f64) -> Self {
        Self {
            x_min: x,
            x_max: x,
            y_min: y,
            y_max: y,
            step: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.x_min, self.x_max, self.y_min, self.y_max, self.step]
            .iter()
            .all(|v| v.is_finite());
        if !finite || !(self.step > 0.0) || self.x_min > self.x_max || self.y_min > self.y_max {
            return Err(Error::Config(format!("empty or malformed search region {self:?}")));
        }
        if self.xs().len() * self.ys().len() > 50_000_000 {
            return Err(Error::Config(format!("search region {self:?} has too many cells")));
        }
        Ok(())
    }

    fn axis(lo: f64, hi: f64, step: f64) -> Vec<f64> {
        let n = ((hi - lo) / step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| lo + i as f64 * step).collect()
    }

    pub fn xs(&self) -> Vec<f64> {
        Self::axis(self.x_min, self.x_max, self.step)
    }

    pub fn ys(&self) -> Vec<f64> {
        Self::axis(self.y_min, self.y_max, self.step)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub iteration: usize,
    pub position: Position3D,
    pub wssr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSearchResult {
    pub best_position: Position3D,
    pub best_wssr: f64,
    pub iterations: usize,
    /// Iteration 0 is the starting cell.
    pub trace: Vec<TracePoint>,
    pub converged: bool,
}

impl GridSearchResult {
    /// Columns `iteration, x, y, wssr`.
    pub fn write_trace_csv<W: Write>(&self, out: W) -> Result<()> {
        let header = ["iteration", "x", "y", "wssr"].map(String::from);
        let rows = self.trace.iter().map(|t| {
            vec![
                t.iteration.to_string(),
                number(t.position.x),
                number(t.position.y),
                number(t.wssr),
            ]
        });
        write_csv(out, &header, rows)
    }
}

/// WSSR with the UAV moved to `(x, y)`.
pub fn wssr_at(s: &ScenarioConfig, x: f64, y: f64, rule: &QuadratureRule) -> Result<f64> {
    Ok(evaluate_scenario(&s.clone().with_uav_xy(x, y), rule)?.wssr)
}

/// Index of the first maximum.
fn first_argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

fn nearest_index(axis: &[f64], v: f64) -> usize {
    let mut best = 0;
    for (i, &a) in axis.iter().enumerate() {
        if (a - v).abs() < (axis[best] - v).abs() {
            best = i;
        }
    }
    best
}

/// Alternating coordinate search: a full scan in `x` at fixed `y`, then in `y`
/// at the new `x`, repeated until the move is shorter than `eps0` or `k_max`
/// rounds have run. Starts from the grid cell nearest to the scenario's UAV
/// position, so the result never falls below that cell's WSSR. Ties go to the
/// lowest grid index.
pub fn grid_search_placement(
    s: &ScenarioConfig,
    region: &SearchRegion,
    eps0: f64,
    k_max: usize,
    rule: &QuadratureRule,
) -> Result<GridSearchResult> {
    validate_scenario(s)?;
    region.validate()?;
    if k_max == 0 {
        return Err(Error::Config("k_max must be at least 1".into()));
    }
    let xs = region.xs();
    let ys = region.ys();
    let (mut ix, mut iy) = (nearest_index(&xs, s.uav.x), nearest_index(&ys, s.uav.y));
    let z = s.uav.z;
    let mut wssr = wssr_at(s, xs[ix], ys[iy], rule)?;
    let mut trace = vec![TracePoint {
        iteration: 0,
        position: Position3D::new(xs[ix], ys[iy], z),
        wssr,
    }];
    let mut converged = false;
    let mut iterations = 0;

    for k in 1..=k_max {
        iterations = k;
        let (px, py) = (xs[ix], ys[iy]);
        let y = ys[iy];
        let row: Vec<f64> = xs.par_iter().map(|&x| wssr_at(s, x, y, rule)).collect::<Result<_>>()?;
        ix = first_argmax(&row);
        let x = xs[ix];
        let col: Vec<f64> = ys.par_iter().map(|&y| wssr_at(s, x, y, rule)).collect::<Result<_>>()?;
        iy = first_argmax(&col);
        wssr = col[iy];
        trace.push(TracePoint {
            iteration: k,
            position: Position3D::new(xs[ix], ys[iy], z),
            wssr,
        });
        if (xs[ix] - px).hypot(ys[iy] - py) < eps0 {
            converged = true;
            break;
        }
    }

    Ok(GridSearchResult {
        best_position: Position3D::new(xs[ix], ys[iy], z),
        best_wssr: wssr,
        iterations,
        trace,
        converged,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceCell {
    pub x: f64,
    pub y: f64,
    pub wssr: f64,
}

/// Row-major grid: `y` is the outer index, `x` the inner one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WssrSurface {
    pub nx: usize,
    pub ny: usize,
    pub cells: Vec<SurfaceCell>,
}

impl WssrSurface {
    /// First maximal cell in row-major order.
    pub fn argmax(&self) -> SurfaceCell {
        let values: Vec<f64> = self.cells.iter().map(|c| c.wssr).collect();
        self.cells[first_argmax(&values)]
    }

    /// Columns `x, y, wssr`, one row per cell.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let header = ["x", "y", "wssr"].map(String::from);
        let rows = self
            .cells
            .iter()
            .map(|c| vec![number(c.x), number(c.y), number(c.wssr)]);
        write_csv(out, &header, rows)
    }
}

pub fn wssr_surface(s: &ScenarioConfig, region: &SearchRegion, rule: &QuadratureRule) -> Result<WssrSurface> {
    validate_scenario(s)?;
    region.validate()?;
    let xs = region.xs();
    let ys = region.ys();
    let points: Vec<(f64, f64)> = ys.iter().flat_map(|&y| xs.iter().map(move |&x| (x, y))).collect();
    let cells = points
        .par_iter()
        .map(|&(x, y)| Ok(SurfaceCell { x, y, wssr: wssr_at(s, x, y, rule)? }))
        .collect::<Result<Vec<_>>>()?;
    Ok(WssrSurface {
        nx: xs.len(),
        ny: ys.len(),
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::laguerre_rule;
    use std::sync::OnceLock;

    fn rule() -> &'static QuadratureRule {
        static RULE: OnceLock<QuadratureRule> = OnceLock::new();
        RULE.get_or_init(|| laguerre_rule(120).unwrap())
    }

    fn coarse() -> SearchRegion {
        SearchRegion {
            x_min: -100.0,
            x_max: 100.0,
            y_min: -100.0,
            y_max: 100.0,
            step: 10.0,
        }
    }

    #[test]
    fn axes_include_both_ends() {
        let r = coarse();
        assert_eq!(r.xs().len(), 21);
        assert_eq!(*r.ys().last().unwrap(), 100.0);
        let odd = SearchRegion { x_max: 95.0, ..r };
        assert_eq!(*odd.xs().last().unwrap(), 90.0);
    }

    #[test]
    fn malformed_regions_rejected() {
        for r in [
            SearchRegion { step: 0.0, ..coarse() },
            SearchRegion { x_min: 5.0, x_max: 4.0, ..coarse() },
            SearchRegion { y_max: f64::NAN, ..coarse() },
        ] {
            assert!(matches!(r.validate(), Err(Error::Config(_))));
        }
    }

    #[test]
    fn single_cell_region() {
        let s = ScenarioConfig::default();
        let r = grid_search_placement(&s, &SearchRegion::single_cell(0.0, 0.0), DEFAULT_EPS0, 50, rule()).unwrap();
        assert_eq!((r.best_position.x, r.best_position.y), (0.0, 0.0));
        assert_eq!(r.best_position.z, s.uav.z);
        assert!(r.converged);
        assert_eq!(r.iterations, 1);
        assert_eq!(r.best_wssr, wssr_at(&s, 0.0, 0.0, rule()).unwrap());
    }

    #[test]
    fn constant_objective_picks_first_cell() {
        let s = ScenarioConfig::default().with_power_dbm(f64::NEG_INFINITY);
        let r = grid_search_placement(&s, &coarse(), DEFAULT_EPS0, 50, rule()).unwrap();
        assert!(r.converged);
        assert_eq!((r.best_position.x, r.best_position.y), (-100.0, -100.0));
        assert_eq!(r.best_wssr, 0.0);
    }

    #[test]
    fn trace_is_monotone_and_ends_at_fixed_point() {
        let s = ScenarioConfig::default();
        let region = coarse();
        let r = grid_search_placement(&s, &region, DEFAULT_EPS0, 50, rule()).unwrap();
        assert!(r.converged);
        assert!(r.trace.windows(2).all(|w| w[1].wssr >= w[0].wssr));
        assert_eq!(r.best_wssr, wssr_at(&s, r.best_position.x, r.best_position.y, rule()).unwrap());
        for x in region.xs() {
            assert!(wssr_at(&s, x, r.best_position.y, rule()).unwrap() <= r.best_wssr);
        }
        for y in region.ys() {
            assert!(wssr_at(&s, r.best_position.x, y, rule()).unwrap() <= r.best_wssr);
        }
        let start = wssr_at(&s, s.uav.x, s.uav.y, rule()).unwrap();
        assert!(r.best_wssr >= start);
    }

    #[test]
    fn surface_dominates_search_and_is_row_major() {
        let s = ScenarioConfig::default();
        let region = coarse();
        let surf = wssr_surface(&s, &region, rule()).unwrap();
        assert_eq!(surf.cells.len(), 21 * 21);
        assert_eq!((surf.cells[1].x, surf.cells[1].y), (-90.0, -100.0));
        assert_eq!((surf.cells[21].x, surf.cells[21].y), (-100.0, -90.0));
        let search = grid_search_placement(&s, &region, DEFAULT_EPS0, 50, rule()).unwrap();
        assert!(surf.argmax().wssr >= search.best_wssr);
    }

    #[test]
    fn csv_shapes() {
        let s = ScenarioConfig::default();
        let region = SearchRegion { x_max: -80.0, y_max: -90.0, ..coarse() };
        let surf = wssr_surface(&s, &region, rule()).unwrap();
        let mut buf = Vec::new();
        surf.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x,y,wssr");
        assert_eq!(lines.len(), 1 + 3 * 2);
        assert!(lines[1].starts_with("-1.000000000000e2,"));
    }
}
