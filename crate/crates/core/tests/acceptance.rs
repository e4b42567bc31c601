use std::io::Write;

use ness_core::verify;

// written straight to stderr so the line shows even for passing tests
fn check(r: verify::CheckReport) {
    let _ = writeln!(std::io::stderr(), "{r}");
    assert!(r.passed, "{r}");
}

#[test]
fn criterion_01_limiting_regime_mixture() {
    check(verify::criterion_1());
}

#[test]
fn criterion_02_t2_ceiling() {
    check(verify::criterion_2());
}

#[test]
fn criterion_03_zero_t_criterion_concordance() {
    check(verify::criterion_3());
}

#[test]
fn criterion_04_oracle_equivalence() {
    check(verify::criterion_4());
}

#[test]
fn criterion_05_equilibrium_and_zero_splitting() {
    check(verify::criterion_5());
}

#[test]
fn criterion_06_beta_tilde_non_contribution() {
    check(verify::criterion_6());
}

#[test]
fn criterion_07_detuning_interpolation() {
    check(verify::criterion_7());
}

#[test]
fn criterion_08_region_growth() {
    check(verify::criterion_8());
}

#[test]
fn criterion_09_spatial_ratios() {
    check(verify::criterion_9());
}

#[test]
fn criterion_10_boundary_shape_and_convergence() {
    check(verify::criterion_10());
}
