//! Exact computer algebra for deformation quantization of the formal polydisc.
//!
//! Everything here works at finite truncation over the rationals:
//!
//! * [`series`] — sparse truncated power series in `x1..xd, y1..yd, h`,
//!   differential forms, the de Rham differential and Poisson bivectors.
//! * [`weyl`] — the truncated formal Weyl algebra `D/h^{p+1}` in normal order,
//!   its star product, the antiinvolution `iota`, and the split model of `D/h^2`.
//! * [`lie`] — weight-graded Lie algebras given by structure constants: vector
//!   fields, Hamiltonians, the derivation tower of `D` and its central
//!   extensions, plus the splitting constructions on top of them.
//! * [`cohomology`] — Chevalley–Eilenberg complexes in fixed weight, cohomology
//!   dimensions, coboundary search and the distinguished extension classes.
//! * [`darboux`] — formal Darboux normalization of polynomial symplectic forms
//!   and the star product transported along the normalizing chart.
//!
//! Weights: `x_i` and `y_i` have weight 1 and `h` has weight 2, so the Weyl
//! relation `[x_i, y_j] = delta_ij h` is homogeneous and every truncation is a
//! weight truncation.

pub mod check;
pub mod cohomology;
pub mod darboux;
pub mod lie;
pub mod linalg;
pub mod random;
pub mod rational;
pub mod series;
pub mod weyl;

pub use linalg::SparseVec;
pub use rational::Rational;
pub use series::{DifferentialForm, Monomial, PoissonBivector, SeriesError, TruncatedPoly};
pub use weyl::{D1Element, TruncationSpec, WeylElement, WeylError};

/// Version tag written into every JSON document produced by this crate.
pub const JSON_SCHEMA_VERSION: u32 = 1;
