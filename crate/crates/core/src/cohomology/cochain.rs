use std::collections::BTreeMap;

use serde_json::json;

use crate::lie::{GradedLieAlgebra, LinearMap};
use crate::linalg::SparseVec;
use crate::rational::Rational;

/// A Chevalley–Eilenberg cochain stored on strictly increasing basis tuples.
#[derive(Debug, Clone, PartialEq)]
pub struct Cochain {
    degree: usize,
    weight: i32,
    values: BTreeMap<Vec<usize>, SparseVec>,
}

/// Sorts a tuple, returning the permutation sign, or `None` on a repeat.
pub(crate) fn sort_with_sign(t: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = t.to_vec();
    let mut odd = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
        if j > 0 && v[j - 1] == v[j] {
            return None;
        }
    }
    Some((v, odd))
}

impl Cochain {
    pub fn new(degree: usize, weight: i32) -> Self {
        Self { degree, weight, values: BTreeMap::new() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn weight(&self) -> i32 {
        self.weight
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.values.len()
    }

    /// Nonzero values on sorted tuples.
    pub fn values(&self) -> impl Iterator<Item = (&[usize], &SparseVec)> + '_ {
        self.values.iter().map(|(t, v)| (t.as_slice(), v))
    }

    /// Value on an arbitrary tuple, using antisymmetry.
    pub fn get(&self, t: &[usize]) -> SparseVec {
        assert_eq!(t.len(), self.degree, "tuple length must equal the cochain degree");
        match sort_with_sign(t) {
            None => SparseVec::new(),
            Some((s, odd)) => {
                let v = self.values.get(&s).cloned().unwrap_or_default();
                if odd {
                    v.neg()
                } else {
                    v
                }
            }
        }
    }

    /// Adds `v` to the value on `t` (and the antisymmetric images).
    pub fn add_at(&mut self, t: &[usize], v: &SparseVec) {
        assert_eq!(t.len(), self.degree, "tuple length must equal the cochain degree");
        let Some((s, odd)) = sort_with_sign(t) else { return };
        let entry = self.values.entry(s.clone()).or_default();
        let k = if odd { -crate::rational::one() } else { crate::rational::one() };
        entry.axpy(&k, v);
        if entry.is_zero() {
            self.values.remove(&s);
        }
    }

    /// Sets the value on `t`.
    pub fn set(&mut self, t: &[usize], v: SparseVec) {
        let old = self.get(t);
        self.add_at(t, &v.sub(&old));
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (t, v) in &other.values {
            out.add_at(t, v);
        }
        out
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        self.add(&other.scale(&-crate::rational::one()))
    }

    pub fn scale(&self, k: &Rational) -> Cochain {
        let mut out = Cochain::new(self.degree, self.weight);
        for (t, v) in &self.values {
            out.add_at(t, &v.scaled(k));
        }
        out
    }

    /// Keeps only the tuples satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&[usize]) -> bool) -> Cochain {
        let mut out = self.clone();
        out.values.retain(|t, _| keep(t));
        out
    }

    /// Applies a module map to every value.
    pub fn map_values(&self, f: &LinearMap) -> Cochain {
        let mut out = Cochain::new(self.degree, self.weight);
        for (t, v) in &self.values {
            out.add_at(t, &f.apply(v));
        }
        out
    }

    /// Applies an arbitrary coordinate map to every value (used for
    /// projections onto sub-bases).
    pub fn map_value_indices(&self, f: impl Fn(usize) -> Option<usize>) -> Cochain {
        let mut out = Cochain::new(self.degree, self.weight);
        for (t, v) in &self.values {
            out.add_at(t, &v.map_indices(&f));
        }
        out
    }

    /// Pullback along a linear map `f: A' -> A` of the algebra argument,
    /// evaluated on every sorted tuple of the `source_dim` basis vectors of `A'`.
    pub fn pullback(&self, f: &LinearMap) -> Cochain {
        let n = f.source_dim();
        let mut out = Cochain::new(self.degree, self.weight);
        let mut tuple = Vec::with_capacity(self.degree);
        fn rec(c: &Cochain, f: &LinearMap, n: usize, start: usize, tuple: &mut Vec<usize>, out: &mut Cochain) {
            if tuple.len() == c.degree {
                let mut acc = SparseVec::new();
                expand(c, f, tuple, 0, &mut Vec::new(), &crate::rational::one(), &mut acc);
                if !acc.is_zero() {
                    out.add_at(tuple, &acc);
                }
                return;
            }
            for i in start..n {
                tuple.push(i);
                rec(c, f, n, i + 1, tuple, out);
                tuple.pop();
            }
        }
        fn expand(
            c: &Cochain,
            f: &LinearMap,
            src: &[usize],
            pos: usize,
            img: &mut Vec<usize>,
            coeff: &Rational,
            acc: &mut SparseVec,
        ) {
            if pos == src.len() {
                acc.axpy(coeff, &c.get(img));
                return;
            }
            for (k, a) in f.column(src[pos]).iter() {
                img.push(k);
                expand(c, f, src, pos + 1, img, &(coeff * a), acc);
                img.pop();
            }
        }
        rec(self, f, n, 0, &mut tuple, &mut out);
        out
    }

    /// JSON with basis labels.
    pub fn to_json(&self, algebra: &GradedLieAlgebra, module_labels: &[String]) -> serde_json::Value {
        let entries: Vec<_> = self
            .values
            .iter()
            .map(|(t, v)| {
                let args: Vec<&str> = t.iter().map(|&i| algebra.label(i)).collect();
                let vals: Vec<(String, String)> = v
                    .wire_pairs()
                    .into_iter()
                    .map(|(k, c)| (module_labels.get(k).cloned().unwrap_or_else(|| k.to_string()), c))
                    .collect();
                json!({ "args": args, "value": vals })
            })
            .collect();
        json!({ "degree": self.degree, "weight": self.weight, "values": entries })
    }
}
