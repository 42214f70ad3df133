//! Runs every example under `examples/` through its `run_example` entry.

macro_rules! example {
    ($m:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $m {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }
    };
}

example!(quadrature, "quadrature.rs");
example!(default_report, "default_report.rs");
example!(fading_moments, "fading_moments.rs");
example!(monte_carlo_validation, "monte_carlo_validation.rs");
example!(power_sweep, "power_sweep.rs");
example!(element_sweep, "element_sweep.rs");
example!(placement, "placement.rs");
example!(surface, "surface.rs");

use star_secrecy::scenario::Side;

#[test]
fn quadrature_example_agrees() {
    let (lag, ada) = quadrature::run_example().unwrap();
    assert!((lag - ada).abs() < 1e-9);
}

#[test]
fn default_report_example() {
    let r = default_report::run_example().unwrap();
    assert!(r.wssr > 0.0 && r.r_sec_q > 0.0 && r.r_sec_qp > 0.0);
}

#[test]
fn fading_moments_example_increase_with_kappa() {
    let fits = fading_moments::run_example().unwrap();
    assert!(fits.windows(2).all(|w| w[1].1.mean > w[0].1.mean));
}

#[test]
fn monte_carlo_validation_example() {
    let r = monte_carlo_validation::run_example(4000).unwrap();
    assert_eq!(r.quantities.len(), 8);
    assert!(r.max_rate_gap < 0.05);
}

#[test]
fn power_sweep_example() {
    let t = power_sweep::run_example(Side::Transmission).unwrap();
    assert_eq!(t.rows.len(), 24);
    assert_eq!(t.header.len(), 4);
}

#[test]
fn element_sweep_example() {
    let t = element_sweep::run_example(Side::Transmission).unwrap();
    assert_eq!(t.header[0], "M");
    assert_eq!(t.rows.len(), 10);
}

#[test]
fn placement_example_never_worse() {
    for (_, fixed, r) in placement::run_example(5.0).unwrap() {
        assert!(r.best_wssr >= fixed);
    }
}

#[test]
fn surface_example_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("surface.csv");
    let s = surface::run_example(20.0, Some(path.to_str().unwrap())).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 1 + s.nx * s.ny);
}
