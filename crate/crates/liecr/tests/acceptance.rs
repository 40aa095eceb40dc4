//! The acceptance suite. Each test prints one pass/fail line for its
//! criterion; run with `cargo test -p liecr --test acceptance -- --nocapture`
//! to see them all.

use liecr::acceptance;
use liecr::tol::Tolerances;

fn run(criterion: fn(&Tolerances, u64) -> acceptance::CriterionResult) {
    let tol = Tolerances::default();
    let result = criterion(&tol, 0);
    println!("{}", result.line());
    assert!(result.pass, "{}", result.line());
}

#[test]
fn criterion_1_su2_invariant_nacs_reproduction() {
    run(acceptance::criterion_1);
}

#[test]
fn criterion_2_cr_without_nacs() {
    run(acceptance::criterion_2);
}

#[test]
fn criterion_3_condition_oracle_equivalence() {
    run(acceptance::criterion_3);
}

#[test]
fn criterion_4_su2_analytic_numeric_agreement() {
    run(acceptance::criterion_4);
}

#[test]
fn criterion_5_fiber_propagation() {
    run(acceptance::criterion_5);
}

#[test]
fn criterion_6_algebraic_invariants() {
    run(acceptance::criterion_6);
}

#[test]
fn criterion_7_product_constructions() {
    run(acceptance::criterion_7);
}

#[test]
fn criterion_8_iwasawa_round_trip() {
    run(acceptance::criterion_8);
}
