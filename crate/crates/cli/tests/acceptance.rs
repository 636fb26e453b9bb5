//! The acceptance gate: every verification criterion as its own test,
//! printing one pass/fail line (visible with `--nocapture`) and asserting
//! the pinned tolerance.

use sjspace_cli::acceptance::{run_criterion, CriterionReport};

fn check(id: usize) {
    let report: CriterionReport = run_criterion(id, 42);
    println!("{}", report.line());
    assert!(
        report.pass,
        "criterion {} failed: {}",
        report.id,
        report.line()
    );
}

#[test]
fn criterion_01_volume_table_and_estimator() {
    check(1);
}

#[test]
fn criterion_02_space_metric_invariance() {
    check(2);
}

#[test]
fn criterion_03_disk_metric_invariance() {
    check(3);
}

#[test]
fn criterion_04_laplacian_cross_oracles() {
    check(4);
}

#[test]
fn criterion_05_eigenfunction_catalog() {
    check(5);
}

#[test]
fn criterion_06_generator_algebra() {
    check(6);
}

#[test]
fn criterion_07_cayley_compatibility() {
    check(7);
}

#[test]
fn criterion_08_higher_operators() {
    check(8);
}

#[test]
fn criterion_09_symmetrized_polynomial() {
    check(9);
}

#[test]
fn criterion_10_invariant_polynomials() {
    check(10);
}

#[test]
fn criterion_11_reduction_theory() {
    check(11);
}

#[test]
fn criterion_12_torus_spectral_basis() {
    check(12);
}

#[test]
fn criterion_13_fourier_ode() {
    check(13);
}

#[test]
fn criterion_14_eisenstein_cocycle() {
    check(14);
}
