use std::sync::Arc;

use rayon::prelude::*;
use serde_json::json;

use super::{GradedLieAlgebra, LieError};
use crate::check::Check;
use crate::linalg::{Echelon, SparseVec};
use crate::rational::Rational;

/// A linear map given by the images of the source basis vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    source_dim: usize,
    target_dim: usize,
    columns: Vec<SparseVec>,
}

impl LinearMap {
    pub fn new(source_dim: usize, target_dim: usize, columns: Vec<SparseVec>) -> Result<Self, LieError> {
        if columns.len() != source_dim {
            return Err(LieError::DimensionMismatch(format!(
                "{} columns for a source of dimension {source_dim}",
                columns.len()
            )));
        }
        if let Some(k) = columns.iter().flat_map(|c| c.indices()).find(|&k| k >= target_dim) {
            return Err(LieError::DimensionMismatch(format!(
                "column entry {k} outside a target of dimension {target_dim}"
            )));
        }
        Ok(Self { source_dim, target_dim, columns })
    }

    pub fn zero(source_dim: usize, target_dim: usize) -> Self {
        Self { source_dim, target_dim, columns: vec![SparseVec::new(); source_dim] }
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn column(&self, i: usize) -> &SparseVec {
        &self.columns[i]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, c) in v.iter() {
            out.axpy(c, &self.columns[i]);
        }
        out
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &LinearMap) -> Result<LinearMap, LieError> {
        if first.target_dim != self.source_dim {
            return Err(LieError::DimensionMismatch(format!(
                "cannot compose {}->{} after {}->{}",
                self.source_dim, self.target_dim, first.source_dim, first.target_dim
            )));
        }
        let columns = first.columns.iter().map(|c| self.apply(c)).collect();
        Ok(LinearMap { source_dim: first.source_dim, target_dim: self.target_dim, columns })
    }

    pub fn sub(&self, other: &LinearMap) -> LinearMap {
        assert_eq!(self.source_dim, other.source_dim);
        assert_eq!(self.target_dim, other.target_dim);
        let columns = self.columns.iter().zip(&other.columns).map(|(a, b)| a.sub(b)).collect();
        LinearMap { source_dim: self.source_dim, target_dim: self.target_dim, columns }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(SparseVec::is_zero)
    }

    /// First column where two maps differ.
    pub fn first_difference(&self, other: &LinearMap) -> Option<usize> {
        (0..self.source_dim.min(other.source_dim)).find(|&i| self.columns[i] != other.columns[i])
    }

    /// Rank of the restriction to the given source basis vectors.
    pub fn rank_on(&self, indices: &[usize]) -> usize {
        let mut e = Echelon::new();
        for &i in indices {
            e.insert(&self.columns[i]);
        }
        e.rank()
    }

    pub fn rank(&self) -> usize {
        self.rank_on(&(0..self.source_dim).collect::<Vec<_>>())
    }

    /// Adds `delta` to one matrix entry. Used for fault injection.
    pub fn corrupt_entry(&mut self, source: usize, target: usize, delta: &Rational) {
        self.columns[source].add_at(target, delta);
    }

    pub fn to_json(&self) -> serde_json::Value {
        let cols: Vec<_> = self.columns.iter().map(SparseVec::wire_pairs).collect();
        json!({ "source_dim": self.source_dim, "target_dim": self.target_dim, "columns": cols })
    }
}

/// Solver for `f(x) = y`, built once per map.
///
/// Rows `c_j ⊕ e_j` (column of `f` followed by a tag in a shifted index range)
/// are reduced together; because pivots are leftmost, a target vector that
/// reduces to zero in the first block is in the image and the tag block of the
/// reduction records a preimage.
#[derive(Debug, Clone)]
pub struct Preimage {
    target_dim: usize,
    echelon: Echelon,
}

impl Preimage {
    pub fn new(map: &LinearMap) -> Self {
        let t = map.target_dim;
        let mut echelon = Echelon::new();
        for (j, c) in map.columns.iter().enumerate() {
            let mut row = c.clone();
            row.set(t + j, crate::rational::one());
            echelon.insert(&row);
        }
        Self { target_dim: t, echelon }
    }

    pub fn solve(&self, y: &SparseVec) -> Option<SparseVec> {
        let r = self.echelon.reduce(y);
        if r.indices().any(|k| k < self.target_dim) {
            return None;
        }
        let t = self.target_dim;
        Some(r.map_indices(|k| Some(k - t)).neg())
    }
}

/// A weight-preserving linear map between graded Lie algebras that is claimed
/// to preserve brackets.
#[derive(Debug, Clone)]
pub struct LieMap {
    name: String,
    source: Arc<GradedLieAlgebra>,
    target: Arc<GradedLieAlgebra>,
    matrix: LinearMap,
}

impl LieMap {
    /// Builds the map and checks that it is weight preserving. Bracket
    /// preservation is checked separately by [`LieMap::verify`].
    pub fn new(
        name: impl Into<String>,
        source: Arc<GradedLieAlgebra>,
        target: Arc<GradedLieAlgebra>,
        matrix: LinearMap,
    ) -> Result<Self, LieError> {
        if matrix.source_dim() != source.dim() || matrix.target_dim() != target.dim() {
            return Err(LieError::DimensionMismatch(format!(
                "matrix {}x{} for algebras of dimensions {} and {}",
                matrix.target_dim(),
                matrix.source_dim(),
                target.dim(),
                source.dim()
            )));
        }
        let name = name.into();
        for i in 0..source.dim() {
            if let Some(k) = matrix.column(i).indices().find(|&k| target.weight(k) != source.weight(i)) {
                return Err(LieError::WeightMismatch {
                    context: format!("{name}({})", source.label(i)),
                    expected: source.weight(i),
                    found: target.weight(k),
                });
            }
        }
        Ok(Self { name, source, target, matrix })
    }

    /// Builds the map and fails unless it preserves brackets.
    pub fn new_verified(
        name: impl Into<String>,
        source: Arc<GradedLieAlgebra>,
        target: Arc<GradedLieAlgebra>,
        matrix: LinearMap,
    ) -> Result<Self, LieError> {
        let m = Self::new(name, source, target, matrix)?;
        let c = m.verify();
        if !c.passed() {
            return Err(LieError::VerificationFailed(format!("{}: {}", c.name, c.witness)));
        }
        Ok(m)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Arc<GradedLieAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedLieAlgebra> {
        &self.target
    }

    pub fn matrix(&self) -> &LinearMap {
        &self.matrix
    }

    pub fn matrix_mut(&mut self) -> &mut LinearMap {
        &mut self.matrix
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        self.matrix.apply(v)
    }

    /// Source pairs on which both brackets are exact.
    fn pair_in_cutoff(&self, i: usize, j: usize) -> bool {
        let s = &self.source;
        let t = &self.target;
        let w = s.weight(i) + s.weight(j);
        s.in_cutoff(i, j) && (t.is_closed() || w <= t.cutoff())
    }

    /// `f([e_i, e_j]) = [f(e_i), f(e_j)]` on every pair within both cutoffs.
    pub fn verify(&self) -> Check {
        let n = self.source.dim();
        let bad: Vec<(usize, usize, SparseVec)> = (0..n)
            .into_par_iter()
            .flat_map_iter(|i| {
                (i + 1..n).filter_map(move |j| {
                    if !self.pair_in_cutoff(i, j) {
                        return None;
                    }
                    let lhs = self.apply(&self.source.bracket(i, j));
                    let rhs = self.target.bracket_vec(self.matrix.column(i), self.matrix.column(j));
                    let defect = lhs.sub(&rhs);
                    (!defect.is_zero()).then_some((i, j, defect))
                })
            })
            .collect();
        let name = format!("{} is a Lie map", self.name);
        match bad.first() {
            None => Check::pass(name),
            Some((i, j, defect)) => Check::fail(
                name,
                json!({
                    "pair": [self.source.label(*i), self.source.label(*j)],
                    "defect": defect.wire_pairs().iter().map(|(k, c)| (self.target.label(*k).to_string(), c.clone())).collect::<Vec<_>>(),
                    "failing_pairs": bad.len(),
                }),
            ),
        }
    }

    /// `self ∘ first` as a Lie map (not re-verified).
    pub fn compose(&self, first: &LieMap) -> Result<LieMap, LieError> {
        let matrix = self.matrix.compose(&first.matrix)?;
        LieMap::new(format!("{}∘{}", self.name, first.name), first.source.clone(), self.target.clone(), matrix)
    }

    /// Rank on the weight-`w` component of the source.
    pub fn rank_at_weight(&self, w: i32) -> usize {
        self.matrix.rank_on(&self.source.indices_of_weight(w))
    }
}
