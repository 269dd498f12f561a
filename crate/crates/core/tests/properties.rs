mod common;

use common::{seed_for, PROPERTIES};

fn check(i: usize) {
    let (name, f) = PROPERTIES[i];
    if let Err(e) = f(seed_for(i)) {
        panic!("{name}: {e}");
    }
}

#[test]
fn graded_commutativity() {
    check(0);
}

#[test]
fn koszul_sign_coherence() {
    check(1);
}

#[test]
fn sigma_squares_to_zero() {
    check(2);
}

#[test]
fn primitives_form_a_subalgebra() {
    check(3);
}

#[test]
fn basis_matches_poincare_series() {
    check(4);
}

#[test]
fn pages_shrink() {
    check(5);
}

#[test]
fn truncations_agree_below_the_edge() {
    check(6);
}
