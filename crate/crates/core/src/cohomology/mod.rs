//! Chevalley–Eilenberg cohomology of truncated graded Lie algebras.
//!
//! A `k`-cochain of weight `W` sends `e_{i_1} ∧ … ∧ e_{i_k}` to a module vector
//! of weight `w_{i_1} + … + w_{i_k} + W`; the differential
//!
//! ```text
//! (dc)(ξ_0..ξ_k) = Σ_i (-1)^i ξ_i·c(..ξ̂_i..) + Σ_{i<j} (-1)^{i+j} c([ξ_i,ξ_j], ..ξ̂_i..ξ̂_j..)
//! ```
//!
//! preserves `W`, so each `(k, W)` block is a finite linear problem.
//!
//! Truncation: an algebra cut at weight `N_A` only knows brackets whose weight
//! stays `<= N_A`, and a module cut at `N_M` only knows values up to `N_M`.
//! A basis tuple `t` is *admissible* for weight `W` when
//! `P(t) = Σ max(w_i, 0) <= N_A` and `P(t) + W <= N_M` (each bound dropped
//! for closed algebras/modules). Every quantity the differential evaluates on
//! an admissible tuple is then computed exactly, and admissible tuples only
//! receive contributions from admissible tuples one degree lower. Cochains are
//! therefore compared, and cocycle/coboundary questions decided, on admissible
//! tuples; a failed coboundary solve on that finite system is a proof that
//! no primitive exists in the full algebra.

mod classes;
mod cochain;
mod complex;
mod module;

pub use classes::{
    omega_class, omega_checks, tower_obstruction, CohomologyClass, OmegaClass, TowerObstruction,
};
pub use cochain::Cochain;
pub use complex::{ce_differential, check_cocycle, cohomology_dim, is_coboundary, Complex};
pub use module::LieModule;

use crate::lie::LieError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CohomologyError {
    #[error("cochain is not a cocycle: d c is nonzero on {tuple:?}")]
    NotACocycle { tuple: Vec<usize> },
    #[error("block (k={degree}, W={weight}) is not fully determined by the truncation: {reason}")]
    IncompleteBlock { degree: usize, weight: i32, reason: String },
    #[error("action is not defined: {0}")]
    BadModule(String),
    #[error(transparent)]
    Lie(#[from] LieError),
}
