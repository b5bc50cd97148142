use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::json;

use super::CohomologyError;
use crate::check::Check;
use crate::lie::{BasisElement, ExtensionData, GradedLieAlgebra, LieMap};
use crate::linalg::SparseVec;

/// A weight-graded representation of a truncated Lie algebra, given by the
/// action of basis vectors on basis vectors.
#[derive(Debug, Clone)]
pub struct LieModule {
    name: String,
    algebra: Arc<GradedLieAlgebra>,
    basis: Vec<BasisElement>,
    cutoff: i32,
    closed: bool,
    action: BTreeMap<(usize, usize), SparseVec>,
}

impl LieModule {
    pub fn new(
        name: impl Into<String>,
        algebra: Arc<GradedLieAlgebra>,
        basis: Vec<BasisElement>,
        cutoff: i32,
        closed: bool,
    ) -> Self {
        Self { name: name.into(), algebra, basis, cutoff, closed, action: BTreeMap::new() }
    }

    /// The trivial module on the given basis.
    pub fn trivial(name: impl Into<String>, algebra: Arc<GradedLieAlgebra>, basis: Vec<BasisElement>) -> Self {
        let cutoff = basis.iter().map(|b| b.weight).max().unwrap_or(0);
        Self::new(name, algebra, basis, cutoff, true)
    }

    /// The adjoint module.
    pub fn adjoint(algebra: Arc<GradedLieAlgebra>) -> Self {
        let mut m = Self::new(
            format!("ad {}", algebra.name()),
            algebra.clone(),
            algebra.basis().to_vec(),
            algebra.cutoff(),
            algebra.is_closed(),
        );
        for (i, j, v) in algebra.nonzero_brackets() {
            m.action.insert((i, j), v.clone());
            m.action.insert((j, i), v.neg());
        }
        m
    }

    /// The kernel of an extension with the action `xi . v = [s xi, v]`, which
    /// is well defined when the kernel is abelian.
    pub fn from_extension(name: impl Into<String>, e: &ExtensionData) -> Result<Self, CohomologyError> {
        let mut m = Self::new(
            name,
            e.quotient.clone(),
            e.sub.basis().to_vec(),
            e.total.cutoff(),
            e.total.is_closed(),
        );
        let pre = e.preimage();
        for a in 0..e.quotient.dim() {
            for v in 0..e.sub.dim() {
                let w = e.quotient.weight(a) + e.sub.weight(v);
                if !m.closed && w > m.cutoff {
                    continue;
                }
                let img = e.total.bracket_vec(e.splitting.column(a), e.inject.matrix().column(v));
                if img.is_zero() {
                    continue;
                }
                let x = pre.solve(&img).ok_or_else(|| {
                    CohomologyError::BadModule(format!(
                        "[{}, {}] leaves the kernel",
                        e.quotient.label(a),
                        e.sub.label(v)
                    ))
                })?;
                m.action.insert((a, v), x);
            }
        }
        Ok(m)
    }

    pub fn set_action(&mut self, a: usize, v: usize, image: SparseVec) {
        if image.is_zero() {
            self.action.remove(&(a, v));
        } else {
            self.action.insert((a, v), image);
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn algebra(&self) -> &Arc<GradedLieAlgebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn labels(&self) -> Vec<String> {
        self.basis.iter().map(|b| b.label.clone()).collect()
    }

    pub fn weight(&self, i: usize) -> i32 {
        self.basis[i].weight
    }

    pub fn cutoff(&self) -> i32 {
        self.cutoff
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn max_weight(&self) -> i32 {
        self.basis.iter().map(|b| b.weight).max().unwrap_or(0)
    }

    pub fn is_trivial(&self) -> bool {
        self.action.is_empty()
    }

    /// `e_a . v`.
    pub fn act(&self, a: usize, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, c) in v.iter() {
            if let Some(img) = self.action.get(&(a, i)) {
                out.axpy(c, img);
            }
        }
        out
    }

    /// `u . v` for an algebra vector `u`.
    pub fn act_vec(&self, u: &SparseVec, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (a, c) in u.iter() {
            out.axpy(c, &self.act(a, v));
        }
        out
    }

    /// The module restricted along a Lie map `f: B -> A`.
    pub fn restrict(&self, f: &LieMap) -> Self {
        let alg = f.source().clone();
        let mut m = Self::new(format!("{}|{}", self.name, alg.name()), alg.clone(), self.basis.clone(), self.cutoff, self.closed);
        for b in 0..alg.dim() {
            for v in 0..self.dim() {
                let img = self.act_vec(f.matrix().column(b), &SparseVec::unit(v));
                m.set_action(b, v, img);
            }
        }
        m
    }

    /// The submodule on a subset of basis vectors, which must be invariant.
    pub fn submodule(&self, name: impl Into<String>, keep: &[usize]) -> Result<Self, CohomologyError> {
        let pos: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(a, &i)| (i, a)).collect();
        let basis = keep.iter().map(|&i| self.basis[i].clone()).collect();
        let mut m = Self::new(name, self.algebra.clone(), basis, self.cutoff, self.closed);
        for (&(a, v), img) in &self.action {
            let Some(&vv) = pos.get(&v) else { continue };
            if let Some(k) = img.indices().find(|k| !pos.contains_key(k)) {
                return Err(CohomologyError::BadModule(format!(
                    "{} . {} has a component on {}",
                    self.algebra.label(a),
                    self.basis[v].label,
                    self.basis[k].label
                )));
            }
            m.set_action(a, vv, img.map_indices(|k| pos.get(&k).copied()));
        }
        Ok(m)
    }

    /// The quotient by the span of the basis vectors not in `keep`, which must
    /// be a submodule. Returns the module and the projection on coordinates.
    pub fn quotient(&self, name: impl Into<String>, keep: &[usize]) -> Result<(Self, BTreeMap<usize, usize>), CohomologyError> {
        let pos: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(a, &i)| (i, a)).collect();
        for (&(a, v), img) in &self.action {
            if pos.contains_key(&v) {
                continue;
            }
            if let Some(k) = img.indices().find(|k| pos.contains_key(k)) {
                return Err(CohomologyError::BadModule(format!(
                    "dropped span is not a submodule: {} . {} hits {}",
                    self.algebra.label(a),
                    self.basis[v].label,
                    self.basis[k].label
                )));
            }
        }
        let basis = keep.iter().map(|&i| self.basis[i].clone()).collect();
        let mut m = Self::new(name, self.algebra.clone(), basis, self.cutoff, self.closed);
        for (&(a, v), img) in &self.action {
            let Some(&vv) = pos.get(&v) else { continue };
            m.set_action(a, vv, img.map_indices(|k| pos.get(&k).copied()));
        }
        Ok((m, pos))
    }

    /// Whether `[e_a, e_b] . v = e_a . (e_b . v) - e_b . (e_a . v)` is computed
    /// exactly by the truncation.
    fn triple_in_cutoff(&self, a: usize, b: usize, v: usize) -> bool {
        let (wa, wb, wv) = (self.algebra.weight(a), self.algebra.weight(b), self.weight(v));
        self.algebra.in_cutoff(a, b)
            && (self.closed || (wa + wv <= self.cutoff && wb + wv <= self.cutoff && wa + wb + wv <= self.cutoff))
    }

    /// The representation property on every in-cutoff triple.
    pub fn verify(&self) -> Check {
        let n = self.algebra.dim();
        let bad: Option<(usize, usize, usize)> = (0..n).into_par_iter().find_map_first(|a| {
            for b in a + 1..n {
                for v in 0..self.dim() {
                    if !self.triple_in_cutoff(a, b, v) {
                        continue;
                    }
                    let e = SparseVec::unit(v);
                    let lhs = self.act_vec(&self.algebra.bracket(a, b), &e);
                    let rhs = self.act(a, &self.act(b, &e)).sub(&self.act(b, &self.act(a, &e)));
                    if lhs != rhs {
                        return Some((a, b, v));
                    }
                }
            }
            None
        });
        let name = format!("{} is a representation", self.name);
        match bad {
            None => Check::pass(name),
            Some((a, b, v)) => Check::fail(
                name,
                json!({ "triple": [self.algebra.label(a), self.algebra.label(b), self.basis[v].label] }),
            ),
        }
    }
}
