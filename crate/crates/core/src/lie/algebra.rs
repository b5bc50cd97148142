use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::LieError;
use crate::linalg::SparseVec;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisElement {
    pub label: String,
    pub weight: i32,
}

impl BasisElement {
    pub fn new(label: impl Into<String>, weight: i32) -> Self {
        Self { label: label.into(), weight }
    }
}

/// A weight-graded Lie algebra, truncated at weight `N`, given by structure
/// constants on an ordered basis.
///
/// Brackets are weight additive. When some basis weights are negative the
/// span of weights `> N` is not an ideal, so the truncation is only a Lie
/// algebra "below the cutoff": a bracket `[e_i, e_j]` is exact when
/// `w_i + w_j <= N` and is stored as zero otherwise. Jacobi holds for triples
/// whose pairwise and total weights all stay `<= N`.
///
/// `closed` marks algebras where truncation never discards anything (finite
/// dimensional algebras such as `sp(2d)`, or abelian ones); for those every
/// bracket and every triple is exact.
#[derive(Debug, Clone)]
pub struct GradedLieAlgebra {
    name: String,
    basis: Vec<BasisElement>,
    cutoff: i32,
    closed: bool,
    /// `[e_i, e_j]` for `i < j`, nonzero entries only.
    brackets: BTreeMap<(usize, usize), SparseVec>,
}

/// Outcome of an exhaustive Jacobi sweep.
#[derive(Debug, Clone, Default, Serialize)]
pub struct JacobiReport {
    pub checked: u64,
    pub exempt: u64,
    /// First few failing triples with their Jacobiator.
    pub failures: Vec<(usize, usize, usize, Vec<(usize, String)>)>,
    pub failure_count: u64,
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

impl GradedLieAlgebra {
    pub fn new(name: impl Into<String>, basis: Vec<BasisElement>, cutoff: i32, closed: bool) -> Self {
        Self { name: name.into(), basis, cutoff, closed, brackets: BTreeMap::new() }
    }

    /// Abelian algebra on the given basis (always closed).
    pub fn abelian(name: impl Into<String>, basis: Vec<BasisElement>, cutoff: i32) -> Self {
        Self::new(name, basis, cutoff, true)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn weight(&self, i: usize) -> i32 {
        self.basis[i].weight
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis[i].label
    }

    pub fn cutoff(&self) -> i32 {
        self.cutoff
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn min_weight(&self) -> i32 {
        self.basis.iter().map(|b| b.weight).min().unwrap_or(0)
    }

    pub fn max_weight(&self) -> i32 {
        self.basis.iter().map(|b| b.weight).max().unwrap_or(0)
    }

    /// Sorted distinct weights present in the basis.
    pub fn weights(&self) -> Vec<i32> {
        let mut w: Vec<i32> = self.basis.iter().map(|b| b.weight).collect();
        w.sort_unstable();
        w.dedup();
        w
    }

    pub fn indices_of_weight(&self, w: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.basis[i].weight == w).collect()
    }

    pub fn find_label(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.label == label)
    }

    /// Whether `[e_i, e_j]` is computed without truncation.
    pub fn in_cutoff(&self, i: usize, j: usize) -> bool {
        self.closed || self.weight(i) + self.weight(j) <= self.cutoff
    }

    /// Whether a weight survives the truncation.
    pub fn keeps_weight(&self, w: i32) -> bool {
        self.closed || w <= self.cutoff
    }

    /// Sets `[e_i, e_j]` (and implicitly `[e_j, e_i]`). Components of the wrong
    /// weight are rejected; components above the cutoff are dropped.
    pub fn set_bracket(&mut self, i: usize, j: usize, v: SparseVec) -> Result<(), LieError> {
        if i == j {
            if !v.is_zero() {
                return Err(LieError::NotAntisymmetric { i, j });
            }
            return Ok(());
        }
        let target = self.weight(i) + self.weight(j);
        let mut v = v;
        if !self.keeps_weight(target) {
            v = SparseVec::new();
        }
        if let Some(k) = v.indices().find(|&k| self.weight(k) != target) {
            return Err(LieError::WeightMismatch {
                context: format!("[{}, {}] in {}", self.label(i), self.label(j), self.name),
                expected: target,
                found: self.weight(k),
            });
        }
        let (key, v) = if i < j { ((i, j), v) } else { ((j, i), v.neg()) };
        if v.is_zero() {
            self.brackets.remove(&key);
        } else {
            self.brackets.insert(key, v);
        }
        Ok(())
    }

    /// Adds `delta` to the `k`-th component of `[e_i, e_j]`, bypassing all
    /// checks. Used to inject faults into verification sweeps.
    pub fn corrupt_structure_constant(&mut self, i: usize, j: usize, k: usize, delta: &Rational) {
        let (key, delta) = if i < j { ((i, j), delta.clone()) } else { ((j, i), -delta) };
        let entry = self.brackets.entry(key).or_default();
        entry.add_at(k, &delta);
        if entry.is_zero() {
            self.brackets.remove(&key);
        }
    }

    pub fn bracket(&self, i: usize, j: usize) -> SparseVec {
        if i == j {
            return SparseVec::new();
        }
        if i < j {
            self.brackets.get(&(i, j)).cloned().unwrap_or_default()
        } else {
            self.brackets.get(&(j, i)).map(SparseVec::neg).unwrap_or_default()
        }
    }

    /// Nonzero brackets `(i, j, [e_i, e_j])` with `i < j`.
    pub fn nonzero_brackets(&self) -> impl Iterator<Item = (usize, usize, &SparseVec)> + '_ {
        self.brackets.iter().map(|(&(i, j), v)| (i, j, v))
    }

    /// `[e_i, v]` extended linearly.
    pub fn bracket_basis_vec(&self, i: usize, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, c) in v.iter() {
            if i == j {
                continue;
            }
            let b = self.bracket(i, j);
            out.axpy(c, &b);
        }
        out
    }

    /// `[u, v]` extended bilinearly.
    pub fn bracket_vec(&self, u: &SparseVec, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, a) in u.iter() {
            let b = self.bracket_basis_vec(i, v);
            out.axpy(a, &b);
        }
        out
    }

    /// Whether the triple's nested brackets are all computed below the cutoff.
    pub fn jacobi_in_cutoff(&self, i: usize, j: usize, k: usize) -> bool {
        if self.closed {
            return true;
        }
        let (a, b, c) = (self.weight(i), self.weight(j), self.weight(k));
        let n = self.cutoff;
        a + b <= n && b + c <= n && a + c <= n && a + b + c <= n
    }

    pub fn jacobiator(&self, i: usize, j: usize, k: usize) -> SparseVec {
        let mut out = self.bracket_basis_vec(i, &self.bracket(j, k));
        out.axpy(&rational::one(), &self.bracket_basis_vec(j, &self.bracket(k, i)));
        out.axpy(&rational::one(), &self.bracket_basis_vec(k, &self.bracket(i, j)));
        out
    }

    /// Exhaustive Jacobi sweep over basis triples `i < j < k`.
    pub fn check_jacobi(&self) -> JacobiReport {
        let n = self.dim();
        let per_i: Vec<JacobiReport> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut r = JacobiReport::default();
                for j in i + 1..n {
                    for k in j + 1..n {
                        if !self.jacobi_in_cutoff(i, j, k) {
                            r.exempt += 1;
                            continue;
                        }
                        r.checked += 1;
                        let jac = self.jacobiator(i, j, k);
                        if !jac.is_zero() {
                            r.failure_count += 1;
                            if r.failures.len() < 4 {
                                r.failures.push((i, j, k, jac.wire_pairs()));
                            }
                        }
                    }
                }
                r
            })
            .collect();
        let mut total = JacobiReport::default();
        for r in per_i {
            total.checked += r.checked;
            total.exempt += r.exempt;
            total.failure_count += r.failure_count;
            for f in r.failures {
                if total.failures.len() < 4 {
                    total.failures.push(f);
                }
            }
        }
        total
    }

    /// Whether every stored bracket has components of the right weight only.
    pub fn check_grading(&self) -> Result<(), LieError> {
        for (&(i, j), v) in &self.brackets {
            let target = self.weight(i) + self.weight(j);
            if let Some(k) = v.indices().find(|&k| self.weight(k) != target) {
                return Err(LieError::WeightMismatch {
                    context: format!("[{}, {}] in {}", self.label(i), self.label(j), self.name),
                    expected: target,
                    found: self.weight(k),
                });
            }
        }
        Ok(())
    }

    /// Whether the subspace spanned by `indices` is closed under the bracket
    /// within the cutoff.
    pub fn is_subalgebra(&self, indices: &[usize]) -> bool {
        let set: std::collections::BTreeSet<usize> = indices.iter().copied().collect();
        indices.iter().all(|&i| {
            indices
                .iter()
                .all(|&j| self.bracket(i, j).indices().all(|k| set.contains(&k)))
        })
    }

    /// The subalgebra on a subset of basis vectors, which must be closed.
    pub fn subalgebra(&self, name: impl Into<String>, indices: &[usize], closed: bool) -> Result<Self, LieError> {
        let pos: BTreeMap<usize, usize> = indices.iter().enumerate().map(|(a, &i)| (i, a)).collect();
        let basis = indices.iter().map(|&i| self.basis[i].clone()).collect();
        let mut sub = Self::new(name, basis, self.cutoff, closed);
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate().skip(a + 1) {
                let v = self.bracket(i, j);
                let mut w = SparseVec::new();
                for (k, c) in v.iter() {
                    let Some(&kk) = pos.get(&k) else {
                        return Err(LieError::NotClosed(format!(
                            "[{}, {}] leaves the span",
                            self.label(i),
                            self.label(j)
                        )));
                    };
                    w.add_at(kk, c);
                }
                sub.set_bracket(a, b, w)?;
            }
        }
        Ok(sub)
    }

    /// The quotient by the span of the basis vectors `drop`, which must span an
    /// ideal. The remaining basis keeps its order; bracket components along
    /// `drop` are discarded.
    pub fn quotient_by(&self, name: impl Into<String>, drop: &[usize]) -> Result<(Self, Vec<usize>), LieError> {
        let dropped: std::collections::BTreeSet<usize> = drop.iter().copied().collect();
        for &i in drop {
            for j in 0..self.dim() {
                if let Some(k) = self.bracket(i, j).indices().find(|k| !dropped.contains(k)) {
                    return Err(LieError::NotClosed(format!(
                        "[{}, {}] has a component on {} outside the ideal",
                        self.label(i),
                        self.label(j),
                        self.label(k)
                    )));
                }
            }
        }
        let keep: Vec<usize> = (0..self.dim()).filter(|i| !dropped.contains(i)).collect();
        let pos: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(a, &i)| (i, a)).collect();
        let basis = keep.iter().map(|&i| self.basis[i].clone()).collect();
        let mut q = Self::new(name, basis, self.cutoff, self.closed);
        for (&(i, j), v) in &self.brackets {
            let (Some(&a), Some(&b)) = (pos.get(&i), pos.get(&j)) else { continue };
            let w = v.map_indices(|k| pos.get(&k).copied());
            q.set_bracket(a, b, w)?;
        }
        Ok((q, keep))
    }

    /// The same algebra with basis vector `i` moved to position `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.dim());
        let mut basis = self.basis.clone();
        for (i, &p) in perm.iter().enumerate() {
            basis[p] = self.basis[i].clone();
        }
        let mut out = Self::new(self.name.clone(), basis, self.cutoff, self.closed);
        for (&(i, j), v) in &self.brackets {
            let w = v.map_indices(|k| Some(perm[k]));
            out.set_bracket(perm[i], perm[j], w).expect("permutation preserves weights");
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let brackets: Vec<serde_json::Value> = self
            .brackets
            .iter()
            .map(|(&(i, j), v)| serde_json::json!({ "i": i, "j": j, "value": v.wire_pairs() }))
            .collect();
        serde_json::json!({
            "schema": crate::JSON_SCHEMA_VERSION,
            "name": self.name,
            "N": self.cutoff,
            "closed": self.closed,
            "basis": self.basis,
            "brackets": brackets,
        })
    }

    /// Dimension of each weight component.
    pub fn dims_by_weight(&self) -> BTreeMap<i32, usize> {
        let mut m = BTreeMap::new();
        for b in &self.basis {
            *m.entry(b.weight).or_insert(0) += 1;
        }
        m
    }

    /// Whether all structure constants vanish.
    pub fn is_abelian(&self) -> bool {
        self.brackets.is_empty()
    }

    /// Coefficient of `e_k` in `[e_i, e_j]`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Rational {
        let v = self.bracket(i, j);
        let c = v.get(k);
        if c.is_zero() {
            Rational::zero()
        } else {
            c
        }
    }
}
