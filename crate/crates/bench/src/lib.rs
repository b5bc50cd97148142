//! Fixed inputs shared by the benchmarks, so that every run measures the
//! same work.

use dqkit_core::random;
use dqkit_core::{DifferentialForm, TruncatedPoly, TruncationSpec, WeylElement};

pub const SEED: u64 = 7;

/// `n` seeded pairs of Weyl elements with `terms` terms each.
pub fn weyl_pairs(spec: TruncationSpec, n: usize, terms: usize) -> Vec<(WeylElement, WeylElement)> {
    let mut rng = random::rng(SEED);
    (0..n).map(|_| (random::weyl(&mut rng, spec, terms), random::weyl(&mut rng, spec, terms))).collect()
}

/// `(1 + x1) dx1 /\ dy1 + sum_{i>1} dx_i /\ dy_i`.
pub fn conformal_form(d: usize, n: u32) -> DifferentialForm {
    let mut w = DifferentialForm::standard_symplectic(d, n);
    w.add_component(vec![0, d], TruncatedPoly::x(d, n - 2, 0)).expect("valid index");
    w
}

/// `sum dx_i /\ dy_i + x2 dx1 /\ dy1 + x1 dx2 /\ dy1` at `d = 2`.
pub fn coupled_form(n: u32) -> DifferentialForm {
    let mut w = DifferentialForm::standard_symplectic(2, n);
    w.add_component(vec![0, 2], TruncatedPoly::x(2, n - 2, 1)).expect("valid index");
    w.add_component(vec![1, 2], TruncatedPoly::x(2, n - 2, 0)).expect("valid index");
    w
}
