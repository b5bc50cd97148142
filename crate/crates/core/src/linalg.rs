//! Sparse exact linear algebra over the rationals.
//!
//! Rows are kept as ordered sparse maps and reduced by Gauss–Jordan elimination.
//! Every block handled by this crate is small (a few thousand unknowns at most),
//! so no pivoting heuristics beyond "first nonzero column" are needed.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::rational::{self, Rational};

/// Sparse vector indexed by `usize`; never stores zeros.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct SparseVec(BTreeMap<usize, Rational>);

impl SparseVec {
    pub fn new() -> Self {
        Self(BTreeMap::new())
    }

    pub fn unit(i: usize) -> Self {
        let mut v = Self::new();
        v.0.insert(i, rational::one());
        v
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut v = Self::new();
        for (i, c) in pairs {
            v.add_at(i, &c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Rational {
        self.0.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> + '_ {
        self.0.iter().map(|(&i, c)| (i, c))
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.keys().copied()
    }

    pub fn first(&self) -> Option<(usize, &Rational)> {
        self.0.iter().next().map(|(&i, c)| (i, c))
    }

    pub fn add_at(&mut self, i: usize, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.0.entry(i).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&i);
        }
    }

    pub fn set(&mut self, i: usize, c: Rational) {
        if c.is_zero() {
            self.0.remove(&i);
        } else {
            self.0.insert(i, c);
        }
    }

    /// `self += k * other`
    pub fn axpy(&mut self, k: &Rational, other: &SparseVec) {
        if k.is_zero() {
            return;
        }
        for (i, c) in other.iter() {
            self.add_at(i, &(k * c));
        }
    }

    pub fn scaled(&self, k: &Rational) -> SparseVec {
        if k.is_zero() {
            return SparseVec::new();
        }
        SparseVec(self.0.iter().map(|(&i, c)| (i, c * k)).collect())
    }

    pub fn neg(&self) -> SparseVec {
        SparseVec(self.0.iter().map(|(&i, c)| (i, -c)).collect())
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        out.axpy(&-rational::one(), other);
        out
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        out.axpy(&rational::one(), other);
        out
    }

    pub fn dot(&self, other: &SparseVec) -> Rational {
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        small.iter().filter_map(|(i, c)| large.0.get(&i).map(|d| c * d)).sum()
    }

    /// Reindexes through `f`; entries mapped to `None` are dropped.
    pub fn map_indices(&self, mut f: impl FnMut(usize) -> Option<usize>) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, c) in self.iter() {
            if let Some(j) = f(i) {
                out.add_at(j, c);
            }
        }
        out
    }

    pub fn retain(&mut self, mut keep: impl FnMut(usize) -> bool) {
        self.0.retain(|&i, _| keep(i));
    }

    pub fn wire_pairs(&self) -> Vec<(usize, String)> {
        self.iter().map(|(i, c)| (i, rational::to_wire(c))).collect()
    }
}

impl fmt::Debug for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.0.iter().map(|(i, c)| (i, rational::to_display(c))))
            .finish()
    }
}

impl Serialize for SparseVec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.wire_pairs().serialize(s)
    }
}

impl FromIterator<(usize, Rational)> for SparseVec {
    fn from_iter<T: IntoIterator<Item = (usize, Rational)>>(iter: T) -> Self {
        SparseVec::from_pairs(iter)
    }
}

/// Incrementally built reduced row-echelon form.
///
/// Each stored row has a pivot column with coefficient 1, and no other stored
/// row has a nonzero entry in that column.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<SparseVec>,
    pivot_of: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        loop {
            let hit = v.iter().find_map(|(c, k)| self.pivot_of.get(&c).map(|&r| (r, k.clone())));
            match hit {
                Some((r, k)) => v.axpy(&-k, &self.rows[r]),
                None => return v,
            }
        }
    }

    /// Inserts `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        let Some((pc, pk)) = r.first().map(|(c, k)| (c, k.clone())) else {
            return false;
        };
        let r = r.scaled(&(rational::one() / pk));
        for row in self.rows.iter_mut() {
            let k = row.get(pc);
            if !k.is_zero() {
                row.axpy(&-k, &r);
            }
        }
        self.pivot_of.insert(pc, self.rows.len());
        self.rows.push(r);
        true
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> impl Iterator<Item = (usize, &SparseVec)> + '_ {
        self.pivot_of.iter().map(|(&c, &r)| (c, &self.rows[r]))
    }
}

pub fn rank(rows: &[SparseVec]) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Solves `sum_j A[i][j] x_j = b_i` for all `i`, with `A` given by sparse rows.
///
/// Returns the solution with all free variables set to zero, or `None` if the
/// system is inconsistent.
pub fn solve(rows: &[SparseVec], rhs: &[Rational], ncols: usize) -> Option<SparseVec> {
    assert_eq!(rows.len(), rhs.len());
    let aug = ncols;
    let mut e = Echelon::new();
    for (row, b) in rows.iter().zip(rhs) {
        let mut r = row.clone();
        debug_assert!(r.indices().all(|c| c < ncols));
        r.set(aug, b.clone());
        e.insert(&r);
    }
    let mut x = SparseVec::new();
    for (pc, row) in e.pivots() {
        if pc == aug {
            return None;
        }
        // Free columns are zero, so x_pc is just the reduced right-hand side.
        x.set(pc, row.get(aug));
    }
    Some(x)
}

/// Basis of `{x : A x = 0}` for the matrix with the given sparse rows.
pub fn nullspace(rows: &[SparseVec], ncols: usize) -> Vec<SparseVec> {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    let pivots: BTreeMap<usize, &SparseVec> = e.pivots().collect();
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains_key(c)) {
        let mut v = SparseVec::unit(free);
        for (&pc, row) in &pivots {
            let k = row.get(free);
            if !k.is_zero() {
                v.set(pc, -k);
            }
        }
        basis.push(v);
    }
    basis
}

/// Applies the matrix given by rows to `x`.
pub fn apply_rows(rows: &[SparseVec], x: &SparseVec) -> Vec<Rational> {
    rows.iter().map(|r| r.dot(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn row(entries: &[(usize, i64)]) -> SparseVec {
        entries.iter().map(|&(i, c)| (i, int(c))).collect()
    }

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![row(&[(0, 1), (1, 2)]), row(&[(0, 2), (1, 4)]), row(&[(2, 1)])];
        assert_eq!(rank(&rows), 2);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        // x + y = 3, x - y = 1
        let rows = vec![row(&[(0, 1), (1, 1)]), row(&[(0, 1), (1, -1)])];
        let x = solve(&rows, &[int(3), int(1)], 2).unwrap();
        assert_eq!(x.get(0), int(2));
        assert_eq!(x.get(1), int(1));
        // x + y = 1, 2x + 2y = 3
        let rows = vec![row(&[(0, 1), (1, 1)]), row(&[(0, 2), (1, 2)])];
        assert!(solve(&rows, &[int(1), int(3)], 2).is_none());
    }

    #[test]
    fn nullspace_is_annihilated() {
        let rows = vec![row(&[(0, 1), (1, 1), (2, 1)]), row(&[(1, 1), (3, -2)])];
        let ns = nullspace(&rows, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(apply_rows(&rows, v).iter().all(|c| c.is_zero()));
        }
    }

    #[test]
    fn axpy_cancels_to_empty() {
        let mut v = row(&[(3, 2)]);
        v.axpy(&rat(-1, 1), &row(&[(3, 2)]));
        assert!(v.is_zero());
    }
}
