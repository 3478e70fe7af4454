//! One test per acceptance criterion; each prints a PASS/FAIL line.

use cornerlab::par::Exec;
use cornerlab::selftest::run_criterion;

fn check(id: usize) {
    let r = run_criterion(id, Exec::Parallel, true);
    println!("{}", r.line());
    assert!(r.passed, "{}", r.line());
}

#[test]
fn criterion_01_pure_integer_example() {
    check(1);
}

#[test]
fn criterion_02_not_closed_face() {
    check(2);
}

#[test]
fn criterion_03_minimal_rays_integral() {
    check(3);
}

#[test]
fn criterion_04_rationality_conditions() {
    check(4);
}

#[test]
fn criterion_05_brute_force_equivalence() {
    check(5);
}

#[test]
fn criterion_06_minimality_checker() {
    check(6);
}

#[test]
fn criterion_07_lipschitz_slopes() {
    check(7);
}

#[test]
fn criterion_08_theta_extraction() {
    check(8);
}

#[test]
fn criterion_09_trivial_lifting() {
    check(9);
}

#[test]
fn criterion_10_facet_pipeline() {
    check(10);
}

#[test]
fn criterion_11_affine_hull_intersection() {
    check(11);
}

#[test]
fn criterion_12_exact_lp_certificates() {
    check(12);
}
