use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::{BasisElement, GradedLieAlgebra, LieError, LieMap, LinearMap};
use crate::linalg::SparseVec;
use crate::rational::{self, Rational};
use crate::series::{Monomial, TruncatedPoly};
use crate::weyl::{TruncationSpec, WeylElement};

/// A graded Lie algebra whose basis vectors are labelled by monomials, so that
/// maps between such algebras can be written as monomial correspondences.
#[derive(Debug, Clone)]
pub struct MonomialAlgebra {
    pub algebra: Arc<GradedLieAlgebra>,
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialAlgebra {
    pub fn new(algebra: GradedLieAlgebra, monomials: Vec<Monomial>) -> Self {
        assert_eq!(algebra.dim(), monomials.len());
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Self { algebra: Arc::new(algebra), monomials, index }
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of a polynomial whose monomials all lie in the basis.
    pub fn vector(&self, f: &TruncatedPoly) -> Result<SparseVec, LieError> {
        let mut v = SparseVec::new();
        for (m, c) in f.terms() {
            let i = self.index_of(m).ok_or_else(|| {
                LieError::NotInImage(format!("{m} is not a basis monomial of {}", self.algebra.name()))
            })?;
            v.add_at(i, c);
        }
        Ok(v)
    }

    /// The polynomial with the given coordinates.
    pub fn poly(&self, v: &SparseVec, d: usize, cutoff: u32) -> TruncatedPoly {
        let mut f = TruncatedPoly::zero(d, cutoff);
        for (i, c) in v.iter() {
            f.add_term(self.monomials[i].clone(), c.clone());
        }
        f
    }

    /// Sub-basis of monomials satisfying a predicate.
    pub fn indices_where(&self, keep: impl Fn(&Monomial) -> bool) -> Vec<usize> {
        (0..self.dim()).filter(|&i| keep(&self.monomials[i])).collect()
    }

    /// The subalgebra on the basis monomials satisfying `keep`.
    pub fn subalgebra(
        &self,
        name: impl Into<String>,
        keep: impl Fn(&Monomial) -> bool,
        closed: bool,
    ) -> Result<MonomialAlgebra, LieError> {
        let idx = self.indices_where(keep);
        let sub = self.algebra.subalgebra(name, &idx, closed)?;
        Ok(MonomialAlgebra::new(sub, idx.iter().map(|&i| self.monomials[i].clone()).collect()))
    }

    /// The quotient by the span of the basis monomials satisfying `drop`.
    pub fn quotient(&self, name: impl Into<String>, drop: impl Fn(&Monomial) -> bool) -> Result<MonomialAlgebra, LieError> {
        let idx = self.indices_where(drop);
        let (q, keep) = self.algebra.quotient_by(name, &idx)?;
        Ok(MonomialAlgebra::new(q, keep.iter().map(|&i| self.monomials[i].clone()).collect()))
    }

    /// The linear map sending the basis monomial `m` to `f(m)` when that is a
    /// basis monomial of `target`, and to zero otherwise.
    pub fn monomial_map(
        &self,
        name: impl Into<String>,
        target: &MonomialAlgebra,
        f: impl Fn(&Monomial) -> Option<Monomial>,
    ) -> Result<LieMap, LieError> {
        let columns = self
            .monomials
            .iter()
            .map(|m| match f(m).and_then(|m2| target.index_of(&m2)) {
                Some(j) => SparseVec::unit(j),
                None => SparseVec::new(),
            })
            .collect();
        let matrix = LinearMap::new(self.dim(), target.dim(), columns)?;
        LieMap::new(name, self.algebra.clone(), target.algebra.clone(), matrix)
    }
}

fn weight_of_g(m: &Monomial) -> i32 {
    m.weight() as i32 - 2
}

fn mono_label(m: &Monomial) -> String {
    m.to_string()
}

/// Fills in brackets `[e_i, e_j]` for all in-cutoff pairs using `bracket`,
/// which returns the bracket of two basis monomials as a polynomial.
fn fill_brackets(
    alg: &mut GradedLieAlgebra,
    monomials: &[Monomial],
    index: &HashMap<Monomial, usize>,
    skip: impl Fn(&Monomial) -> bool + Sync,
    bracket: impl Fn(&Monomial, &Monomial) -> Result<Vec<(Monomial, Rational)>, LieError> + Sync,
) -> Result<(), LieError> {
    let n = monomials.len();
    let alg_ref = &*alg;
    let results: Vec<Result<Vec<(usize, usize, SparseVec)>, LieError>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            if skip(&monomials[i]) {
                return Ok(out);
            }
            for j in i + 1..n {
                if skip(&monomials[j]) || !alg_ref.in_cutoff(i, j) {
                    continue;
                }
                let mut v = SparseVec::new();
                for (m, c) in bracket(&monomials[i], &monomials[j])? {
                    if let Some(&k) = index.get(&m) {
                        v.add_at(k, &c);
                    }
                }
                if !v.is_zero() {
                    out.push((i, j, v));
                }
            }
            Ok(out)
        })
        .collect();
    for r in results {
        for (i, j, v) in r? {
            alg.set_bracket(i, j, v)?;
        }
    }
    Ok(())
}

/// `G_p = h^{-1} D / h^p D` at weight cutoff `N`: basis `h^{-1} m` for
/// normal-ordered monomials `m` with `h`-order `<= p` and weight `<= N + 2`,
/// bracket `(m1 m2 - m2 m1) / h` computed in the Weyl algebra.
pub fn build_g(d: usize, p: u32, n: u32) -> Result<MonomialAlgebra, LieError> {
    if d == 0 {
        return Err(LieError::InvalidParameters("d must be at least 1".into()));
    }
    let monomials = Monomial::all_up_to_weight(d, n + 2, p.min(u16::MAX as u32) as u16);
    let basis = monomials.iter().map(|m| BasisElement::new(mono_label(m), weight_of_g(m))).collect();
    let mut alg = GradedLieAlgebra::new(format!("G_{p}"), basis, n as i32, false);
    let index: HashMap<Monomial, usize> = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    // One h-order and two weights of headroom so the commutator is exact
    // before dividing by h.
    let work = TruncationSpec::new(d, p + 1, n + 4);
    fill_brackets(&mut alg, &monomials, &index, Monomial::is_pure_h, |a, b| {
        let one = rational::one();
        let ea = WeylElement::from_monomial(work, a.clone(), one.clone());
        let eb = WeylElement::from_monomial(work, b.clone(), one);
        let c = ea.commutator(&eb)?.divide_by_h()?;
        Ok(c.terms().filter(|(m, _)| u32::from(m.hexp()) <= p).map(|(m, c)| (m.clone(), c.clone())).collect())
    })?;
    Ok(MonomialAlgebra::new(alg, monomials))
}

/// `(Der D)_p = G_p / (k[h]/h^{p+1})`, realized by almost-inner
/// representatives: the non-scalar basis monomials of `G_p`.
pub fn build_derd(d: usize, p: u32, n: u32) -> Result<MonomialAlgebra, LieError> {
    derd_from_g(&build_g(d, p, n)?, p)
}

pub(crate) fn derd_from_g(g: &MonomialAlgebra, p: u32) -> Result<MonomialAlgebra, LieError> {
    g.quotient(format!("(Der D)_{p}"), Monomial::is_pure_h)
}

/// The abelian algebra of scalars `h^c`, `c = 0..=c_max`, inside `G`
/// (weight `2c - 2`), cut at weight `N`.
pub fn scalars(d: usize, c_max: u32, n: u32) -> MonomialAlgebra {
    let monomials: Vec<Monomial> = (0..=c_max)
        .map(|c| Monomial::h_power(d, c as u16))
        .filter(|m| weight_of_g(m) <= n as i32)
        .collect();
    let basis = monomials.iter().map(|m| BasisElement::new(mono_label(m), weight_of_g(m))).collect();
    MonomialAlgebra::new(GradedLieAlgebra::abelian(format!("k[h]/h^{}", c_max + 1), basis, n as i32), monomials)
}

fn poisson_monomials(a: &Monomial, b: &Monomial) -> Vec<(Monomial, Rational)> {
    let d = a.dim();
    let mut out: Vec<(Monomial, Rational)> = Vec::new();
    for i in 0..d {
        for (s, u, v) in [(1i64, i, d + i), (-1, d + i, i)] {
            let (Some(au), Some(bv)) = (a.lower(u), b.lower(v)) else { continue };
            let c = rational::int(s * i64::from(a.exp(u)) * i64::from(b.exp(v)));
            out.push((au.mul(&bv), c));
        }
    }
    out
}

fn poisson_algebra(d: usize, n: u32, with_constant: bool) -> Result<MonomialAlgebra, LieError> {
    if d == 0 {
        return Err(LieError::InvalidParameters("d must be at least 1".into()));
    }
    let min_deg = if with_constant { 0 } else { 1 };
    let monomials: Vec<Monomial> =
        (min_deg..=n + 2).flat_map(|deg| Monomial::all_of_degree(d, deg)).collect();
    let basis = monomials.iter().map(|m| BasisElement::new(mono_label(m), weight_of_g(m))).collect();
    let name = if with_constant { "A" } else { "H" };
    let mut alg = GradedLieAlgebra::new(name, basis, n as i32, false);
    let index: HashMap<Monomial, usize> = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    fill_brackets(&mut alg, &monomials, &index, |_| false, |a, b| Ok(poisson_monomials(a, b)))?;
    Ok(MonomialAlgebra::new(alg, monomials))
}

/// Functions `A` (monomials of degree `0..=N+2`, weight `deg - 2`) under the
/// standard Poisson bracket `{x_i, y_j} = delta_ij`.
pub fn build_a(d: usize, n: u32) -> Result<MonomialAlgebra, LieError> {
    poisson_algebra(d, n, true)
}

/// Hamiltonians `H = A/k`: monomials of degree `1..=N+2` with the Poisson
/// bracket, constants dropped.
pub fn build_h(d: usize, n: u32) -> Result<MonomialAlgebra, LieError> {
    poisson_algebra(d, n, false)
}

/// `sp(2d)`: the weight-0 (quadratic) Hamiltonians, a closed algebra.
pub fn build_sp(d: usize) -> Result<MonomialAlgebra, LieError> {
    build_h(d, 0)?.subalgebra(format!("sp({})", 2 * d), |m| m.degree() == 2, true)
}

/// Formal vector fields on the polydisc together with their basis keys.
#[derive(Debug, Clone)]
pub struct VectorFields {
    pub algebra: Arc<GradedLieAlgebra>,
    /// `(f, v)` for the basis vector `f d/dz_v`.
    pub keys: Vec<(Monomial, usize)>,
    index: HashMap<(Monomial, usize), usize>,
}

impl VectorFields {
    pub fn index_of(&self, f: &Monomial, v: usize) -> Option<usize> {
        self.index.get(&(f.clone(), v)).copied()
    }
}

/// `W`: vector fields `f d/dz_v` with `f` a monomial of degree `0..=N+1`,
/// weight `deg f - 1`, and the bracket of vector fields.
pub fn build_w(d: usize, n: u32) -> Result<VectorFields, LieError> {
    build_w_from(d, n, 0)
}

/// `W0`: the vector fields vanishing at the origin (weight `>= 0`).
pub fn build_w0(d: usize, n: u32) -> Result<VectorFields, LieError> {
    build_w_from(d, n, 1)
}

fn build_w_from(d: usize, n: u32, min_deg: u32) -> Result<VectorFields, LieError> {
    if d == 0 {
        return Err(LieError::InvalidParameters("d must be at least 1".into()));
    }
    let keys: Vec<(Monomial, usize)> = (min_deg..=n + 1)
        .flat_map(|deg| Monomial::all_of_degree(d, deg))
        .flat_map(|m| (0..2 * d).map(move |v| (m.clone(), v)))
        .collect();
    let basis = keys
        .iter()
        .map(|(m, v)| {
            let f = if m.is_one() { String::new() } else { format!("{m}*") };
            BasisElement::new(format!("{f}d/d{}", Monomial::coord_name(d, *v)), m.degree() as i32 - 1)
        })
        .collect();
    let name = if min_deg == 0 { "W" } else { "W0" };
    let mut alg = GradedLieAlgebra::new(name, basis, n as i32, false);
    let index: HashMap<(Monomial, usize), usize> = keys.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
    let n_basis = keys.len();
    let alg_ref = &alg;
    let brackets: Vec<(usize, usize, SparseVec)> = (0..n_basis)
        .into_par_iter()
        .flat_map_iter(|i| {
            let keys = &keys;
            let index = &index;
            (i + 1..n_basis).filter_map(move |j| {
                if !alg_ref.in_cutoff(i, j) {
                    return None;
                }
                let (f, a) = &keys[i];
                let (g, b) = &keys[j];
                let mut v = SparseVec::new();
                // [f d_a, g d_b] = f (d_a g) d_b - g (d_b f) d_a
                if let Some(ga) = g.lower(*a) {
                    if let Some(&k) = index.get(&(f.mul(&ga), *b)) {
                        v.add_at(k, &rational::int(i64::from(g.exp(*a))));
                    }
                }
                if let Some(fb) = f.lower(*b) {
                    if let Some(&k) = index.get(&(g.mul(&fb), *a)) {
                        v.add_at(k, &rational::int(-i64::from(f.exp(*b))));
                    }
                }
                (!v.is_zero()).then_some((i, j, v))
            })
        })
        .collect();
    for (i, j, v) in brackets {
        alg.set_bracket(i, j, v)?;
    }
    Ok(VectorFields { algebra: Arc::new(alg), keys, index })
}

/// The Hamiltonian map `H -> W`, `f |-> X_f = sum_ij Theta_ij (d_i f) d_j`, so
/// that `X_f(g) = {f, g}`. Verified bracket preserving.
pub fn build_hamiltonian_map(h: &MonomialAlgebra, w: &VectorFields) -> Result<LieMap, LieError> {
    let d = h.monomials.first().map(|m| m.dim()).unwrap_or(1);
    let mut columns = Vec::with_capacity(h.dim());
    for f in &h.monomials {
        let mut col = SparseVec::new();
        for i in 0..d {
            for (s, u, v) in [(1i64, i, d + i), (-1, d + i, i)] {
                let Some(fu) = f.lower(u) else { continue };
                let k = w.index_of(&fu, v).ok_or_else(|| {
                    LieError::InvalidParameters(format!("W is too small for the Hamiltonian field of {f}"))
                })?;
                col.add_at(k, &rational::int(s * i64::from(f.exp(u))));
            }
        }
        columns.push(col);
    }
    let matrix = LinearMap::new(h.dim(), w.algebra.dim(), columns)?;
    LieMap::new_verified("H -> W", h.algebra.clone(), w.algebra.clone(), matrix)
}
