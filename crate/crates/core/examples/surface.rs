// WSSR over the UAV's horizontal position; writes `x,y,wssr` CSV to the
// path given as the first argument, or summarises it on stdout.

use star_secrecy::numerics::laguerre_rule;
use star_secrecy::optimizer::{wssr_surface, SearchRegion, WssrSurface};
use star_secrecy::scenario::ScenarioConfig;
use star_secrecy::{Error, Result};

pub fn run_example(step: f64, csv: Option<&str>) -> Result<WssrSurface> {
    let region = SearchRegion {
        step,
        ..SearchRegion::default()
    };
    let surf = wssr_surface(&ScenarioConfig::default(), &region, &laguerre_rule(300)?)?;
    let best = surf.argmax();
    println!("{} x {} cells, peak {:.5} at ({}, {})", surf.nx, surf.ny, best.wssr, best.x, best.y);
    if let Some(path) = csv {
        let f = std::fs::File::create(path).map_err(|source| Error::Io {
            path: path.into(),
            source,
        })?;
        surf.write_csv(f)?;
    }
    Ok(surf)
}

fn main() -> Result<()> {
    let path = std::env::args().nth(1);
    run_example(1.0, path.as_deref()).map(|_| ())
}
