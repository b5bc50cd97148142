//! Truncated power series, differential forms and Poisson bivectors on the
//! formal polydisc with coordinates `x1..xd, y1..yd` (and the formal parameter
//! `h`, which is carried along but never differentiated).

mod bivector;
mod form;
mod monomial;
mod poly;

pub use bivector::PoissonBivector;
pub use form::DifferentialForm;
pub use monomial::Monomial;
pub use poly::{PolyJson, TruncatedPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("cutoff mismatch: N={left} vs N={right}")]
    CutoffMismatch { left: u32, right: u32 },
    #[error("coordinate index {index} out of range for d={dim}")]
    CoordinateOutOfRange { index: usize, dim: usize },
    #[error("form degree {degree} exceeds the top degree {max}")]
    DegreeOverflow { degree: usize, max: usize },
    #[error("expected a form of degree {expected}, got degree {found}")]
    WrongDegree { expected: usize, found: usize },
    #[error("substituted series must vanish at the origin")]
    NonzeroConstantTerm,
    #[error("series has zero constant term and is not invertible")]
    NotInvertible,
    #[error("bracket arguments must not depend on h")]
    HDependent,
    #[error("bivector is not antisymmetric at entry ({0}, {1})")]
    NotAntisymmetric(usize, usize),
    #[error("matrix is degenerate at the origin")]
    Degenerate,
    #[error("malformed JSON value: {0}")]
    Json(String),
}
