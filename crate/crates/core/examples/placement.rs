// Alternating grid search for the UAV position, compared with the default
// placement at a few powers.

use star_secrecy::numerics::laguerre_rule;
use star_secrecy::optimizer::{grid_search_placement, wssr_at, GridSearchResult, SearchRegion};
use star_secrecy::scenario::ScenarioConfig;
use star_secrecy::Result;

pub fn run_example(step: f64) -> Result<Vec<(f64, f64, GridSearchResult)>> {
    let rule = laguerre_rule(300)?;
    let region = SearchRegion {
        step,
        ..SearchRegion::default()
    };
    let mut out = Vec::new();
    for p in [0.0, 10.0, 23.0] {
        let s = ScenarioConfig::default().with_power_dbm(p);
        let fixed = wssr_at(&s, s.uav.x, s.uav.y, &rule)?;
        let r = grid_search_placement(&s, &region, 1e-6, 50, &rule)?;
        println!(
            "P = {p:>4} dBm: fixed {fixed:.5}, optimized {:.5} at ({}, {}) after {} rounds",
            r.best_wssr, r.best_position.x, r.best_position.y, r.iterations
        );
        out.push((p, fixed, r));
    }
    Ok(out)
}

fn main() -> Result<()> {
    run_example(1.0).map(|_| ())
}
