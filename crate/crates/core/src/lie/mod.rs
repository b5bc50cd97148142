//! Weight-graded Lie algebras given by structure constants.
//!
//! The concrete algebras are truncations of
//!
//! * `W` — formal vector fields `f d/dz` on the polydisc, weight `deg f - 1`;
//! * `A`, `H = A/k` — functions and Hamiltonians under the Poisson bracket,
//!   weight `deg f - 2` (so `H -> W`, `f |-> X_f`, is weight preserving);
//! * `G_p = h^{-1} D / h^p D` under `[a, b] = (ab - ba)` computed in `D`, and
//!   `(Der D)_p = G_p / (central scalars)` via almost-inner representatives.
//!
//! Elements of `G_p` are written by their `D`-representative: the basis vector
//! with label `m` is `h^{-1} m` for a normal-ordered monomial `m` with
//! `h`-order at most `p`. Its weight is `weight(m) - 2`. With this convention
//! `G_p = G / h^{p+1} G`, the centre is `k[h]/h^{p+1}` (the pure `h^c`,
//! `c <= p`), and the kernel of `G_{p+1} -> G_p` is `h^{p+1} A`, i.e. a copy of
//! `A` — the indexing under which the tower's kernels come out as functions on
//! the polydisc.

mod algebra;
mod build;
mod extension;
mod maps;
mod split;
mod tower;

pub use algebra::{BasisElement, GradedLieAlgebra, JacobiReport};
pub use build::{
    build_a, build_derd, build_g, build_h, build_hamiltonian_map, build_sp, build_w, build_w0, scalars,
    VectorFields,
    MonomialAlgebra,
};
pub use extension::{extension_cocycle, ExtensionData};
pub use maps::{LieMap, LinearMap, Preimage};
pub use split::{d1_semidirect_split, levi_restriction_split, D1Split, LeviSplit};
pub use tower::{build_derd_tower, build_g_tower, commu_diagram_check, DiagramFault, GTower};

use crate::series::SeriesError;
use crate::weyl::WeylError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("bracket of basis element {i} with itself must vanish ({j})")]
    NotAntisymmetric { i: usize, j: usize },
    #[error("{context}: expected weight {expected}, found {found}")]
    WeightMismatch { context: String, expected: i32, found: i32 },
    #[error("not closed under the bracket: {0}")]
    NotClosed(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("vector is not in the image: {0}")]
    NotInImage(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}
