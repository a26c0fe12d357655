//! One test per acceptance criterion; each prints its PASS/FAIL line.

use std::sync::Mutex;

use holonomy_sweep::acceptance::{self, Outcome};

// criterion 11 times itself, so criteria run one at a time
static SERIAL: Mutex<()> = Mutex::new(());

fn run(c: fn() -> Outcome) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let o = c();
    println!("{o}");
    assert!(o.passed, "{o}");
}

#[test]
fn criterion_01_spin_algebra() {
    run(acceptance::algebra);
}

#[test]
fn criterion_02_published_visibilities() {
    run(acceptance::published_visibilities);
}

#[test]
fn criterion_03_uhlmann_closed_forms() {
    run(acceptance::uhlmann_closed_forms);
}

#[test]
fn criterion_04_sjoqvist_closed_forms() {
    run(acceptance::sjoqvist_closed_forms);
}

#[test]
fn criterion_05_reduction_identity() {
    run(acceptance::reduction_identity);
}

#[test]
fn criterion_06_eigenstructure() {
    run(acceptance::eigenstructure);
}

#[test]
fn criterion_07_spectrum_consistency() {
    run(acceptance::spectrum_consistency);
}

#[test]
fn criterion_08_monotonicity() {
    run(acceptance::monotonicity);
}

#[test]
fn criterion_09_limits() {
    run(acceptance::limits);
}

#[test]
fn criterion_10_determinism_and_io() {
    run(acceptance::determinism_and_io);
}

#[test]
fn criterion_11_performance() {
    run(acceptance::performance);
}
