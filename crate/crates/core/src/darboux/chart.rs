use num_traits::Zero;
use serde_json::json;

use super::DarbouxError;
use crate::linalg::{self, SparseVec};
use crate::rational::{self, Rational};
use crate::series::{Monomial, TruncatedPoly};

/// A formal coordinate change fixing the origin: `z_c |-> phi_c(z)`, each
/// component carried at the common cutoff `N`.
#[derive(Clone, PartialEq, Eq)]
pub struct FormalCoordChange {
    d: usize,
    cutoff: u32,
    components: Vec<TruncatedPoly>,
}

/// Inverse of a square rational matrix, or `None` if it is singular.
pub(crate) fn invert(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let rows: Vec<SparseVec> = m
        .iter()
        .map(|r| SparseVec::from_pairs(r.iter().cloned().enumerate()))
        .collect();
    if linalg::rank(&rows) < n {
        return None;
    }
    let mut inv = vec![vec![rational::zero(); n]; n];
    for k in 0..n {
        let mut rhs = vec![rational::zero(); n];
        rhs[k] = rational::one();
        let col = linalg::solve(&rows, &rhs, n)?;
        for (i, row) in inv.iter_mut().enumerate() {
            row[k] = col.get(i);
        }
    }
    Some(inv)
}

impl FormalCoordChange {
    pub fn new(components: Vec<TruncatedPoly>) -> Result<Self, DarbouxError> {
        let Some(first) = components.first() else {
            return Err(DarbouxError::WrongArity { expected: 2, found: 0 });
        };
        let (d, cutoff) = (first.dim(), first.cutoff());
        if components.len() != 2 * d {
            return Err(DarbouxError::WrongArity { expected: 2 * d, found: components.len() });
        }
        for (c, f) in components.iter().enumerate() {
            if f.cutoff() != cutoff {
                return Err(DarbouxError::CutoffMismatch { left: cutoff, right: f.cutoff() });
            }
            if !f.constant_term().is_zero() {
                return Err(DarbouxError::MovesOrigin(c));
            }
            if !f.is_h_free() {
                return Err(crate::series::SeriesError::HDependent.into());
            }
        }
        let chart = Self { d, cutoff, components };
        if invert(&chart.linear_part()).is_none() {
            return Err(DarbouxError::SingularLinearPart);
        }
        Ok(chart)
    }

    pub fn identity(d: usize, cutoff: u32) -> Self {
        let components = (0..2 * d).map(|c| TruncatedPoly::coordinate(d, cutoff, c)).collect();
        Self { d, cutoff, components }
    }

    /// The linear change `z_c |-> sum_k m[c][k] z_k`.
    pub fn linear(d: usize, cutoff: u32, m: &[Vec<Rational>]) -> Result<Self, DarbouxError> {
        let components = m
            .iter()
            .map(|row| {
                let mut f = TruncatedPoly::zero(d, cutoff);
                for (k, a) in row.iter().enumerate() {
                    f.add_term(Monomial::coordinate(d, k), a.clone());
                }
                f
            })
            .collect();
        Self::new(components)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn components(&self) -> &[TruncatedPoly] {
        &self.components
    }

    pub fn component(&self, c: usize) -> &TruncatedPoly {
        &self.components[c]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.d, self.cutoff)
    }

    /// `L[c][k]`: coefficient of `z_k` in `phi_c`.
    pub fn linear_part(&self) -> Vec<Vec<Rational>> {
        self.components
            .iter()
            .map(|f| (0..2 * self.d).map(|k| f.coeff(&Monomial::coordinate(self.d, k))).collect())
            .collect()
    }

    /// `f o phi`, at the cutoff of `f` (which must not exceed the chart's).
    pub fn apply(&self, f: &TruncatedPoly) -> Result<TruncatedPoly, DarbouxError> {
        if f.cutoff() > self.cutoff {
            return Err(DarbouxError::CutoffMismatch { left: self.cutoff, right: f.cutoff() });
        }
        Ok(f.compose(&self.components)?)
    }

    /// `self o other`: `z |-> self(other(z))`, so that pulling back along the
    /// composite is pulling back along `self`, then along `other`.
    pub fn compose(&self, other: &Self) -> Result<Self, DarbouxError> {
        if self.d != other.d || self.cutoff != other.cutoff {
            return Err(DarbouxError::CutoffMismatch { left: self.cutoff, right: other.cutoff });
        }
        let components =
            self.components.iter().map(|f| f.compose(&other.components)).collect::<Result<Vec<_>, _>>()?;
        Ok(Self { d: self.d, cutoff: self.cutoff, components })
    }

    /// The inverse up to the cutoff, by the fixed-point iteration
    /// `psi = L^{-1} (z - Q(psi))` where `phi = L z + Q`.
    pub fn inverse(&self) -> Result<Self, DarbouxError> {
        let l = self.linear_part();
        let linv = invert(&l).ok_or(DarbouxError::SingularLinearPart)?;
        let n = 2 * self.d;
        let q: Vec<TruncatedPoly> = self
            .components
            .iter()
            .map(|f| f.filter(|m| m.weight() >= 2))
            .collect();
        let apply_linv = |v: &[TruncatedPoly]| -> Vec<TruncatedPoly> {
            (0..n)
                .map(|c| {
                    let mut acc = TruncatedPoly::zero(self.d, self.cutoff);
                    for (k, a) in linv[c].iter().enumerate() {
                        if !a.is_zero() {
                            acc = &acc + &v[k].scale(a);
                        }
                    }
                    acc
                })
                .collect()
        };
        let z: Vec<TruncatedPoly> = (0..n).map(|c| TruncatedPoly::coordinate(self.d, self.cutoff, c)).collect();
        let mut psi = apply_linv(&z);
        for _ in 0..self.cutoff {
            let rhs: Vec<TruncatedPoly> = z
                .iter()
                .zip(&q)
                .map(|(zc, qc)| qc.compose(&psi).map(|v| zc - &v))
                .collect::<Result<_, _>>()?;
            let next = apply_linv(&rhs);
            if next == psi {
                break;
            }
            psi = next;
        }
        Ok(Self { d: self.d, cutoff: self.cutoff, components: psi })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let names: Vec<String> = (0..2 * self.d).map(|c| Monomial::coord_name(self.d, c)).collect();
        json!({
            "schema": crate::JSON_SCHEMA_VERSION,
            "d": self.d,
            "N": self.cutoff,
            "components": self.components.iter().zip(&names).map(|(f, name)| json!({
                "coordinate": name,
                "image": f.to_string(),
                "terms": f.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

impl std::fmt::Debug for FormalCoordChange {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names: Vec<String> = (0..2 * self.d).map(|c| Monomial::coord_name(self.d, c)).collect();
        let mut m = f.debug_map();
        for (name, c) in names.iter().zip(&self.components) {
            m.entry(name, &format_args!("{c}"));
        }
        m.finish()
    }
}
