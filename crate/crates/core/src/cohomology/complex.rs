use std::collections::HashMap;

use rayon::prelude::*;

use super::{Cochain, CohomologyError, LieModule};
use crate::linalg::{self, Echelon, SparseVec};
use crate::rational::{self, Rational};

/// The Chevalley–Eilenberg complex of a module, with a precomputed index of
/// which basis pairs bracket onto each basis vector.
pub struct Complex<'a> {
    module: &'a LieModule,
    /// `preimages[q]` lists `(a, b, kappa)` with `a < b` and
    /// `[e_a, e_b] = kappa e_q + ...`.
    preimages: Vec<Vec<(usize, usize, Rational)>>,
}

impl<'a> Complex<'a> {
    pub fn new(module: &'a LieModule) -> Self {
        let alg = module.algebra();
        let mut preimages = vec![Vec::new(); alg.dim()];
        for (a, b, v) in alg.nonzero_brackets() {
            for (q, k) in v.iter() {
                preimages[q].push((a, b, k.clone()));
            }
        }
        Self { module, preimages }
    }

    pub fn module(&self) -> &LieModule {
        self.module
    }

    fn positive_weight(&self, t: &[usize]) -> i32 {
        let alg = self.module.algebra();
        t.iter().map(|&i| alg.weight(i).max(0)).sum()
    }

    /// Upper bound on `P(t)` for admissible tuples of a cochain of weight `w`.
    fn p_bound(&self, w: i32) -> Option<i32> {
        let alg = self.module.algebra();
        let a = (!alg.is_closed()).then_some(alg.cutoff());
        let m = (!self.module.is_closed()).then_some(self.module.cutoff() - w);
        match (a, m) {
            (Some(a), Some(m)) => Some(a.min(m)),
            (a, m) => a.or(m),
        }
    }

    /// Whether every value of a weight-`w` cochain on `t`, and everything the
    /// differential evaluates on `t`, is computed exactly.
    pub fn admissible(&self, t: &[usize], w: i32) -> bool {
        match self.p_bound(w) {
            None => true,
            Some(b) => self.positive_weight(t) <= b,
        }
    }

    /// The differential on admissible tuples, by pushing each value of `c`
    /// forward to the tuples it contributes to.
    pub fn differential(&self, c: &Cochain) -> Cochain {
        let w = c.weight();
        let alg = self.module.algebra();
        let n = alg.dim();
        let bound = self.p_bound(w);
        let ok = |p: i32| bound.map_or(true, |b| p <= b);
        let parts: Vec<Vec<(Vec<usize>, SparseVec)>> = c
            .values()
            .collect::<Vec<_>>()
            .par_iter()
            .map(|(t, v)| {
                let mut out = Vec::new();
                let p_t = self.positive_weight(t);
                // action terms: s = t ∪ {a}
                for a in 0..n {
                    if t.contains(&a) || !ok(p_t + alg.weight(a).max(0)) {
                        continue;
                    }
                    let img = self.module.act(a, v);
                    if img.is_zero() {
                        continue;
                    }
                    let pos = t.iter().filter(|&&x| x < a).count();
                    let mut s = t.to_vec();
                    s.insert(pos, a);
                    out.push((s, if pos % 2 == 1 { img.neg() } else { img }));
                }
                // bracket terms: s = (t \ {q}) ∪ {a, b} with [e_a, e_b] ∋ e_q
                for (pi, &q) in t.iter().enumerate() {
                    let rest: Vec<usize> = t.iter().copied().filter(|&x| x != q).collect();
                    let p_rest = p_t - alg.weight(q).max(0);
                    for (a, b, kappa) in &self.preimages[q] {
                        let (a, b) = (*a, *b);
                        if rest.contains(&a) || rest.contains(&b) {
                            continue;
                        }
                        if !ok(p_rest + alg.weight(a).max(0) + alg.weight(b).max(0)) {
                            continue;
                        }
                        let mut s = rest.clone();
                        s.push(a);
                        s.push(b);
                        s.sort_unstable();
                        let i = s.iter().position(|&x| x == a).unwrap();
                        let j = s.iter().position(|&x| x == b).unwrap();
                        let k = if (i + j + pi) % 2 == 1 { -kappa.clone() } else { kappa.clone() };
                        out.push((s, v.scaled(&k)));
                    }
                }
                out
            })
            .collect();
        let mut dc = Cochain::new(c.degree() + 1, w);
        for part in parts {
            for (s, v) in part {
                dc.add_at(&s, &v);
            }
        }
        dc
    }

    /// `None` if `c` is a cocycle on admissible tuples, else a failing tuple.
    pub fn cocycle_defect(&self, c: &Cochain) -> Option<(Vec<usize>, SparseVec)> {
        let dc = self.differential(c);
        let first = dc.values().next().map(|(t, v)| (t.to_vec(), v.clone()));
        first
    }

    /// All admissible `(tuple, module index)` pairs of degree `k` and cochain
    /// weight `w`.
    pub fn block_basis(&self, k: usize, w: i32) -> Vec<(Vec<usize>, usize)> {
        let alg = self.module.algebra();
        let n = alg.dim();
        let bound = self.p_bound(w);
        let mut by_weight: HashMap<i32, Vec<usize>> = HashMap::new();
        for v in 0..self.module.dim() {
            by_weight.entry(self.module.weight(v)).or_default().push(v);
        }
        let mut out = Vec::new();
        let mut t = Vec::with_capacity(k);
        #[allow(clippy::too_many_arguments)]
        fn rec(
            cx: &Complex<'_>,
            n: usize,
            k: usize,
            w: i32,
            bound: Option<i32>,
            start: usize,
            p: i32,
            s: i32,
            t: &mut Vec<usize>,
            by_weight: &HashMap<i32, Vec<usize>>,
            out: &mut Vec<(Vec<usize>, usize)>,
        ) {
            if t.len() == k {
                if let Some(vs) = by_weight.get(&(s + w)) {
                    for &v in vs {
                        out.push((t.clone(), v));
                    }
                }
                return;
            }
            let alg = cx.module.algebra();
            for i in start..n {
                let wi = alg.weight(i);
                let p2 = p + wi.max(0);
                if bound.is_some_and(|b| p2 > b) {
                    continue;
                }
                t.push(i);
                rec(cx, n, k, w, bound, i + 1, p2, s + wi, t, by_weight, out);
                t.pop();
            }
        }
        rec(self, n, k, w, bound, 0, 0, 0, &mut t, &by_weight, &mut out);
        out
    }

    fn basis_cochain(k: usize, w: i32, t: &[usize], v: usize) -> Cochain {
        let mut c = Cochain::new(k, w);
        c.add_at(t, &SparseVec::unit(v));
        c
    }

    /// Solves `d b = c` on admissible tuples.
    pub fn primitive(&self, c: &Cochain) -> Result<Option<Cochain>, CohomologyError> {
        if let Some((tuple, _)) = self.cocycle_defect(c) {
            return Err(CohomologyError::NotACocycle { tuple });
        }
        let k = c.degree();
        let w = c.weight();
        let target = c.filter(|t| self.admissible(t, w));
        if k == 0 {
            return Ok(target.is_zero().then(|| Cochain::new(0, w)));
        }
        let unknowns = self.block_basis(k - 1, w);
        let images: Vec<Cochain> = unknowns
            .par_iter()
            .map(|(t, v)| self.differential(&Self::basis_cochain(k - 1, w, t, *v)))
            .collect();
        let mut row_of: HashMap<(Vec<usize>, usize), usize> = HashMap::new();
        let mut rows: Vec<SparseVec> = Vec::new();
        let mut row_index = |t: &[usize], v: usize, rows: &mut Vec<SparseVec>| -> usize {
            *row_of.entry((t.to_vec(), v)).or_insert_with(|| {
                rows.push(SparseVec::new());
                rows.len() - 1
            })
        };
        for (col, img) in images.iter().enumerate() {
            for (t, vec) in img.values() {
                for (v, x) in vec.iter() {
                    let r = row_index(t, v, &mut rows);
                    rows[r].add_at(col, x);
                }
            }
        }
        let mut rhs_pairs = Vec::new();
        for (t, vec) in target.values() {
            for (v, x) in vec.iter() {
                let r = row_index(t, v, &mut rows);
                rhs_pairs.push((r, x.clone()));
            }
        }
        let mut rhs = vec![rational::zero(); rows.len()];
        for (r, x) in rhs_pairs {
            rhs[r] += x;
        }
        let Some(x) = linalg::solve(&rows, &rhs, unknowns.len()) else {
            return Ok(None);
        };
        let mut b = Cochain::new(k - 1, w);
        for (col, coef) in x.iter() {
            let (t, v) = &unknowns[col];
            b.add_at(t, &SparseVec::unit(*v).scaled(coef));
        }
        Ok(Some(b))
    }

    /// Whether the `(k, w)` block and its neighbours consist only of admissible
    /// tuples, so that ranks computed on it are the true ranks.
    pub fn block_complete(&self, k: usize, w: i32) -> Result<(), CohomologyError> {
        let alg = self.module.algebra();
        if !self.module.is_closed() {
            return Err(CohomologyError::IncompleteBlock {
                degree: k,
                weight: w,
                reason: format!("module {} is truncated", self.module.name()),
            });
        }
        if alg.is_closed() {
            return Ok(());
        }
        let neg = (-alg.min_weight()).max(0);
        let worst = self.module.max_weight() - w + (k as i32 + 1) * neg;
        if worst > alg.cutoff() {
            return Err(CohomologyError::IncompleteBlock {
                degree: k,
                weight: w,
                reason: format!("tuples up to positive weight {worst} exceed the algebra cutoff {}", alg.cutoff()),
            });
        }
        Ok(())
    }

    fn rank_of_d(&self, k: usize, w: i32) -> usize {
        let basis = self.block_basis(k, w);
        let images: Vec<Cochain> =
            basis.par_iter().map(|(t, v)| self.differential(&Self::basis_cochain(k, w, t, *v))).collect();
        let mut col_of: HashMap<(Vec<usize>, usize), usize> = HashMap::new();
        let mut e = Echelon::new();
        for img in images {
            let mut row = SparseVec::new();
            for (t, vec) in img.values() {
                for (v, x) in vec.iter() {
                    let next = col_of.len();
                    let c = *col_of.entry((t.to_vec(), v)).or_insert(next);
                    row.add_at(c, x);
                }
            }
            e.insert(&row);
        }
        e.rank()
    }

    /// `dim H^k` in cochain weight `w`.
    pub fn cohomology_dim(&self, k: usize, w: i32) -> Result<usize, CohomologyError> {
        self.block_complete(k, w)?;
        let dim_k = self.block_basis(k, w).len();
        let rank_k = self.rank_of_d(k, w);
        let rank_prev = if k == 0 { 0 } else { self.rank_of_d(k - 1, w) };
        Ok(dim_k - rank_k - rank_prev)
    }
}

pub fn ce_differential(c: &Cochain, m: &LieModule) -> Cochain {
    Complex::new(m).differential(c)
}

/// `Ok(())` for a cocycle, otherwise the first tuple where `dc` is nonzero.
pub fn check_cocycle(c: &Cochain, m: &LieModule) -> Result<(), CohomologyError> {
    match Complex::new(m).cocycle_defect(c) {
        None => Ok(()),
        Some((tuple, _)) => Err(CohomologyError::NotACocycle { tuple }),
    }
}

/// A primitive `b` with `db = c`, or `None` if `c` is not a coboundary.
pub fn is_coboundary(c: &Cochain, m: &LieModule) -> Result<Option<Cochain>, CohomologyError> {
    Complex::new(m).primitive(c)
}

pub fn cohomology_dim(m: &LieModule, k: usize, w: i32) -> Result<usize, CohomologyError> {
    Complex::new(m).cohomology_dim(k, w)
}
