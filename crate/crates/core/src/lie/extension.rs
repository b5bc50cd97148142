use std::sync::Arc;

use serde_json::json;

use super::{GradedLieAlgebra, LieError, LieMap, LinearMap, Preimage};
use crate::check::{Check, CheckList};
use crate::cohomology::Cochain;
use crate::linalg::SparseVec;

/// A short exact sequence `0 -> sub -> total -> quotient -> 0` of graded Lie
/// algebras with a linear (not necessarily bracket-preserving) section of the
/// projection.
#[derive(Debug, Clone)]
pub struct ExtensionData {
    pub sub: Arc<GradedLieAlgebra>,
    pub total: Arc<GradedLieAlgebra>,
    pub quotient: Arc<GradedLieAlgebra>,
    pub inject: LieMap,
    pub project: LieMap,
    pub splitting: LinearMap,
}

impl ExtensionData {
    pub fn new(inject: LieMap, project: LieMap, splitting: LinearMap) -> Result<Self, LieError> {
        if !Arc::ptr_eq(inject.target(), project.source()) {
            return Err(LieError::DimensionMismatch("inject and project do not share the middle algebra".into()));
        }
        if splitting.source_dim() != project.target().dim() || splitting.target_dim() != project.source().dim() {
            return Err(LieError::DimensionMismatch("splitting has the wrong shape".into()));
        }
        Ok(Self {
            sub: inject.source().clone(),
            total: inject.target().clone(),
            quotient: project.target().clone(),
            inject,
            project,
            splitting,
        })
    }

    /// The same extension with a different section.
    pub fn with_splitting(&self, splitting: LinearMap) -> Result<Self, LieError> {
        Self::new(self.inject.clone(), self.project.clone(), splitting)
    }

    pub fn preimage(&self) -> Preimage {
        Preimage::new(self.inject.matrix())
    }

    /// Exactness per weight, both maps bracket preserving, and the section
    /// property `project ∘ splitting = id`.
    pub fn verify(&self, name: &str) -> CheckList {
        let mut out = CheckList::new();
        out.push(exactness(name, &self.inject, &self.project));
        out.push(self.inject.verify());
        out.push(self.project.verify());
        let ps = self.project.matrix().compose(&self.splitting).expect("shapes agree");
        let bad = (0..self.quotient.dim()).find(|&i| ps.column(i) != &SparseVec::unit(i));
        out.push(Check::from_bool(
            format!("{name}: splitting is a section"),
            bad.is_none(),
            bad.map(|i| json!({ "element": self.quotient.label(i) })).unwrap_or_default(),
        ));
        out
    }

    /// Whether the image of `sub` is central in `total`.
    pub fn central_check(&self, name: &str) -> Check {
        let name = format!("{name}: kernel is central");
        for a in 0..self.sub.dim() {
            let v = self.inject.matrix().column(a);
            for j in 0..self.total.dim() {
                let br = self.total.bracket_vec(&SparseVec::unit(j), v);
                if !br.is_zero() {
                    return Check::fail(
                        name,
                        json!({ "central": self.sub.label(a), "against": self.total.label(j), "weight": self.sub.weight(a) }),
                    );
                }
            }
        }
        Check::pass(name)
    }
}

/// Exactness of `0 -> A -> B -> C -> 0` weight by weight: `pi ∘ i = 0`, `i`
/// injective, `pi` surjective and `dim B_w = dim A_w + dim C_w`.
pub(crate) fn exactness(name: &str, i: &LieMap, pi: &LieMap) -> Check {
    let name = format!("{name}: exact");
    let composed = pi.matrix().compose(i.matrix()).expect("shapes agree");
    if let Some(k) = (0..composed.source_dim()).find(|&k| !composed.column(k).is_zero()) {
        return Check::fail(
            name,
            json!({ "condition": "pi∘i = 0", "element": i.source().label(k), "weight": i.source().weight(k) }),
        );
    }
    let (a, b, c) = (i.source(), i.target(), pi.target());
    let mut weights: Vec<i32> = a.weights().into_iter().chain(b.weights()).chain(c.weights()).collect();
    weights.sort_unstable();
    weights.dedup();
    for w in weights {
        let (da, db, dc) = (a.indices_of_weight(w).len(), b.indices_of_weight(w).len(), c.indices_of_weight(w).len());
        let ri = i.rank_at_weight(w);
        let rp = pi.rank_at_weight(w);
        let failure = if ri != da {
            Some("injective")
        } else if rp != dc {
            Some("surjective")
        } else if db != da + dc {
            Some("dim B = dim A + dim C")
        } else {
            None
        };
        if let Some(cond) = failure {
            return Check::fail(
                name,
                json!({ "condition": cond, "weight": w, "dims": [da, db, dc], "ranks": [ri, rp] }),
            );
        }
    }
    Check::pass(name)
}

/// The extension cocycle `c(xi, eta) = [s xi, s eta] - s[xi, eta]`, read back
/// in `sub`, on every pair of quotient basis vectors whose bracket is exact in
/// both the quotient and the total algebra.
pub fn extension_cocycle(e: &ExtensionData) -> Result<Cochain, LieError> {
    let q = &e.quotient;
    let pre = e.preimage();
    let mut c = Cochain::new(2, 0);
    for i in 0..q.dim() {
        for j in i + 1..q.dim() {
            let w = q.weight(i) + q.weight(j);
            if !q.in_cutoff(i, j) || !e.total.keeps_weight(w) {
                continue;
            }
            let mut v = e.total.bracket_vec(e.splitting.column(i), e.splitting.column(j));
            v = v.sub(&e.splitting.apply(&q.bracket(i, j)));
            if v.is_zero() {
                continue;
            }
            let x = pre.solve(&v).ok_or_else(|| {
                LieError::NotInImage(format!("defect of [{}, {}] does not lie in the kernel", q.label(i), q.label(j)))
            })?;
            c.set(&[i, j], x);
        }
    }
    Ok(c)
}
