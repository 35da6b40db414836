//! One test per acceptance criterion, each printing a PASS/FAIL line.
//! Run with `cargo test -p hyperbargmann-cli --test acceptance -- --nocapture`.

use hyperbargmann_cli::config::ExperimentConfig;
use hyperbargmann_cli::emit::Report;
use hyperbargmann_cli::experiments as ex;

fn check(id: &str, report: anyhow::Result<Report>) {
    let report = report.unwrap_or_else(|e| panic!("{id}: experiment failed: {e:#}"));
    let c = report.criteria.iter().find(|c| c.id == id).unwrap_or_else(|| panic!("{id} missing from report"));
    println!("{}", c.line());
    assert!(c.passed, "{}", c.line());
}

fn cfg() -> ExperimentConfig {
    ExperimentConfig::default()
}

#[test]
fn c01_radon_of_complex_gaussian() {
    check("C1", ex::run_radon_closed_form(&cfg()));
}

#[test]
fn c02_bargmann_identity() {
    check("C2", ex::run_verify_identity(&cfg()));
}

#[test]
fn c03_plancherel() {
    check("C3", ex::run_plancherel(&cfg()));
}

#[test]
fn c04_inversion() {
    check("C4", ex::run_invert(&cfg()));
}

#[test]
fn c05_coherent_states() {
    check("C5", ex::run_heisenberg(&cfg()));
}

#[test]
fn c06_canonical_transform() {
    check("C6", ex::run_kappa(&cfg()));
}

#[test]
fn c07_phase_critical_points() {
    check("C7", ex::run_phase(&cfg()));
}

#[test]
fn c08_degenerate_cutoff() {
    check("C8", ex::run_cutoff(&cfg()));
}

#[test]
fn c09_disk_wavefront_scan() {
    check("C9", ex::run_wf_disk(&cfg()));
}

#[test]
fn c10_moment_condition() {
    check("C10", ex::run_moments(&cfg()));
}
