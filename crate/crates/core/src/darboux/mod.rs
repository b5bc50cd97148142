//! Formal Darboux normalization on the polydisc.
//!
//! A [`FormalCoordChange`] `phi` lists the images `phi_c(z)` of the
//! coordinates and acts on functions by substitution, `f |-> f o phi`; forms
//! are pulled back by substitution and the Jacobian. [`darboux_normalize`]
//! produces `phi` with `phi^* Omega = sum_i dx_i /\ dy_i` exactly up to the
//! cutoff, by a symplectic Gram–Schmidt step followed by Moser corrections one
//! weight at a time:
//!
//! * the lowest discrepancy `R_k` (coefficients homogeneous of degree `k`) is
//!   closed, so `beta = iota_E R_k / (k + 2)` satisfies `d beta = R_k`;
//! * the field `X` with `iota_X omega_std = -beta` is
//!   `X^{x_i} = -beta_{y_i}`, `X^{y_i} = beta_{x_i}`;
//! * `phi <- phi o (id + X)` kills `R_k` and only disturbs higher weights.
//!
//! Bivector and form are related by `Theta = -M^{-1}` where `M` is the
//! coefficient matrix of the form, which sends `sum dx_i /\ dy_i` to the
//! bivector with `{x_i, y_i} = 1`.

mod chart;
mod normalize;
mod symplectic;
mod transport;

pub use chart::FormalCoordChange;
pub use normalize::{darboux_normalize, darboux_residual, symplectic_gram_schmidt};
pub use symplectic::{bivector_to_form, check_symplectic, form_to_bivector, pullback, FormalSymplecticForm};
pub use transport::{transported_star, TransportedStar};

use crate::series::{Monomial, SeriesError};
use crate::weyl::WeylError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DarbouxError {
    #[error("form is not closed: d(form) has the term {coefficient} * {monomial} on dz{index:?}")]
    NotClosed { index: Vec<usize>, monomial: Monomial, coefficient: String },
    #[error("form is degenerate at the origin (constant part has rank {rank} < {expected})")]
    Degenerate { rank: usize, expected: usize },
    #[error("expected a 2-form, got degree {0}")]
    NotATwoForm(usize),
    #[error("coordinate change must fix the origin: component {0} has a constant term")]
    MovesOrigin(usize),
    #[error("coordinate change has a singular linear part")]
    SingularLinearPart,
    #[error("cutoff mismatch: N={left} vs N={right}")]
    CutoffMismatch { left: u32, right: u32 },
    #[error("expected {expected} components, got {found}")]
    WrongArity { expected: usize, found: usize },
    #[error("normalization failed verification: {0}")]
    VerificationFailed(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
}
