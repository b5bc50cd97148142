//! The truncated formal Weyl algebra `D_p = D / h^{p+1} D`.
//!
//! Elements are stored in x-left normal order: the monomial `x^a y^b h^c` of a
//! [`TruncatedPoly`] stands for the word with every `x` to the left of every
//! `y`. Reordering uses `[x_i, y_j] = delta_ij h`, i.e. `y x = x y - h`, which
//! for powers gives the closed form
//!
//! ```text
//! y^b x^a = sum_k k! C(a,k) C(b,k) (-h)^k x^(a-k) y^(b-k)
//! ```
//!
//! applied independently in each index `i`. Both the Weyl relation and the
//! truncations (weight `> N`, `h`-order `> p`) are homogeneous, so computing
//! exactly and discarding gives an honest quotient.

mod d1;
mod normal_order;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::rational::{self, Rational};
use crate::series::{Monomial, PolyJson, SeriesError, TruncatedPoly};

pub use d1::{d1_bracket, d1_product, sym_lift, D1Element};
pub use normal_order::{normal_order, normal_order_word, star_by_rewriting, Letter, Strategy, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeylError {
    #[error("truncation mismatch: {left} vs {right}")]
    SpecMismatch { left: TruncationSpec, right: TruncationSpec },
    #[error("term {monomial} has h-order above p={p}")]
    HOrderExceeded { monomial: Monomial, p: u32 },
    #[error("commutator is not divisible by h (term {0})")]
    NotDivisibleByH(Monomial),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Dimension `d`, `h`-order `p` (work modulo `h^{p+1}`) and weight cutoff `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruncationSpec {
    pub d: usize,
    pub p: u32,
    #[serde(rename = "N")]
    pub n: u32,
}

impl TruncationSpec {
    pub fn new(d: usize, p: u32, n: u32) -> Self {
        Self { d, p, n }
    }

    /// Whether a monomial survives both truncations.
    pub fn keeps(&self, m: &Monomial) -> bool {
        m.weight() <= self.n && u32::from(m.hexp()) <= self.p
    }
}

impl fmt::Display for TruncationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(d={}, p={}, N={})", self.d, self.p, self.n)
    }
}

/// Canonical (normal-ordered) element of `D_p` at weight cutoff `N`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    spec: TruncationSpec,
    poly: TruncatedPoly,
}

/// Coefficient list of `y^b x^a` in a single index: entries `(k, c_k)` for
/// `c_k h^k x^(a-k) y^(b-k)`, stopping once `k` would exceed `max_k`.
fn reorder_coefficients(a: u16, b: u16, max_k: u32) -> Vec<(u16, BigInt)> {
    let top = u32::from(a.min(b)).min(max_k) as u16;
    (0..=top)
        .map(|k| {
            let k32 = u32::from(k);
            let mut c = rational::factorial(k32)
                * rational::binomial(a.into(), k32)
                * rational::binomial(b.into(), k32);
            if k % 2 == 1 {
                c = -c;
            }
            (k, c)
        })
        .collect()
}

/// Star product of two normal-ordered monomials, accumulated into `out` with
/// factor `coeff`. Terms outside `spec` are discarded.
fn monomial_star_into(
    spec: &TruncationSpec,
    left: &Monomial,
    right: &Monomial,
    coeff: &Rational,
    out: &mut BTreeMap<Monomial, Rational>,
) {
    let d = spec.d;
    if left.weight() + right.weight() > spec.n {
        return;
    }
    let h0 = u32::from(left.hexp()) + u32::from(right.hexp());
    if h0 > spec.p {
        return;
    }
    let budget = spec.p - h0;
    // per index: reorder y_i^{b} (from left) past x_i^{a} (from right)
    let per_index: Vec<Vec<(u16, BigInt)>> = (0..d)
        .map(|i| reorder_coefficients(right.exp(i), left.exp(d + i), budget))
        .collect();
    let mut exps = vec![0u16; 2 * d];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        i: usize,
        hk: u32,
        c: BigInt,
        budget: u32,
        per_index: &[Vec<(u16, BigInt)>],
        left: &Monomial,
        right: &Monomial,
        exps: &mut Vec<u16>,
        h0: u32,
        coeff: &Rational,
        out: &mut BTreeMap<Monomial, Rational>,
    ) {
        let d = per_index.len();
        if i == d {
            let m = Monomial::from_exponents(exps, (h0 + hk) as u16);
            let v = coeff * Rational::from_integer(c);
            let slot = out.entry(m).or_insert_with(Rational::zero);
            *slot += v;
            return;
        }
        for (k, ck) in &per_index[i] {
            let k32 = u32::from(*k);
            if hk + k32 > budget {
                break;
            }
            exps[i] = left.exp(i) + right.exp(i) - k;
            exps[d + i] = left.exp(d + i) - k + right.exp(d + i);
            rec(i + 1, hk + k32, &c * ck, budget, per_index, left, right, exps, h0, coeff, out);
        }
    }
    rec(0, 0, BigInt::from(1), budget, &per_index, left, right, &mut exps, h0, coeff, out);
}

impl WeylElement {
    pub fn zero(spec: TruncationSpec) -> Self {
        Self { spec, poly: TruncatedPoly::zero(spec.d, spec.n) }
    }

    pub fn one(spec: TruncationSpec) -> Self {
        Self::scalar(spec, rational::one())
    }

    pub fn scalar(spec: TruncationSpec, c: Rational) -> Self {
        Self::from_monomial(spec, Monomial::one(spec.d), c)
    }

    /// `c` times the normal-ordered word of `m` (discarded if truncated).
    pub fn from_monomial(spec: TruncationSpec, m: Monomial, c: Rational) -> Self {
        let mut e = Self::zero(spec);
        if spec.keeps(&m) {
            e.poly.add_term(m, c);
        }
        e
    }

    pub fn x(spec: TruncationSpec, i: usize) -> Self {
        Self::from_monomial(spec, Monomial::coordinate(spec.d, i), rational::one())
    }

    pub fn y(spec: TruncationSpec, i: usize) -> Self {
        Self::from_monomial(spec, Monomial::coordinate(spec.d, spec.d + i), rational::one())
    }

    pub fn h(spec: TruncationSpec) -> Self {
        Self::from_monomial(spec, Monomial::h_power(spec.d, 1), rational::one())
    }

    /// The generators `x_1..x_d, y_1..y_d`.
    pub fn generators(spec: TruncationSpec) -> Vec<Self> {
        (0..spec.d).map(|i| Self::x(spec, i)).chain((0..spec.d).map(|i| Self::y(spec, i))).collect()
    }

    /// Normal-order symbol lift: each monomial of `f` becomes its normal-ordered
    /// word. Terms above the `h`-order or weight are discarded.
    pub fn lift(spec: TruncationSpec, f: &TruncatedPoly) -> Result<Self, WeylError> {
        if f.dim() != spec.d {
            return Err(SeriesError::DimensionMismatch { left: spec.d, right: f.dim() }.into());
        }
        let mut e = Self::zero(spec);
        for (m, c) in f.terms() {
            if spec.keeps(m) {
                e.poly.add_term(m.clone(), c.clone());
            }
        }
        Ok(e)
    }

    /// Builds an element from its normal-ordered symbol, rejecting terms of
    /// too high `h`-order rather than dropping them.
    pub fn from_symbol(spec: TruncationSpec, f: TruncatedPoly) -> Result<Self, WeylError> {
        if f.dim() != spec.d {
            return Err(SeriesError::DimensionMismatch { left: spec.d, right: f.dim() }.into());
        }
        if f.cutoff() != spec.n {
            return Err(SeriesError::CutoffMismatch { left: spec.n, right: f.cutoff() }.into());
        }
        if let Some((m, _)) = f.terms().find(|(m, _)| u32::from(m.hexp()) > spec.p) {
            return Err(WeylError::HOrderExceeded { monomial: m.clone(), p: spec.p });
        }
        Ok(Self { spec, poly: f })
    }

    pub fn spec(&self) -> TruncationSpec {
        self.spec
    }

    /// The normal-ordered symbol (coefficient map) as a polynomial.
    pub fn symbol(&self) -> &TruncatedPoly {
        &self.poly
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> + '_ {
        self.poly.terms()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.poly.coeff(m)
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn len(&self) -> usize {
        self.poly.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poly.is_empty()
    }

    fn check(&self, other: &Self) -> Result<(), WeylError> {
        if self.spec != other.spec {
            return Err(WeylError::SpecMismatch { left: self.spec, right: other.spec });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, WeylError> {
        self.check(other)?;
        Ok(Self { spec: self.spec, poly: &self.poly + &other.poly })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, WeylError> {
        self.check(other)?;
        Ok(Self { spec: self.spec, poly: &self.poly - &other.poly })
    }

    pub fn neg(&self) -> Self {
        Self { spec: self.spec, poly: self.poly.neg() }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self { spec: self.spec, poly: self.poly.scale(k) }
    }

    /// Multiplication by `h^k` (shifts `h`-order, truncating).
    pub fn mul_h_power(&self, k: u16) -> Self {
        let mut e = Self::zero(self.spec);
        for (m, c) in self.poly.terms() {
            let m2 = m.with_h(m.hexp() + k);
            if self.spec.keeps(&m2) {
                e.poly.add_term(m2, c.clone());
            }
        }
        e
    }

    /// Exact division by `h`; every term must be divisible.
    pub fn divide_by_h(&self) -> Result<Self, WeylError> {
        let mut e = Self::zero(self.spec);
        for (m, c) in self.poly.terms() {
            if m.hexp() == 0 {
                return Err(WeylError::NotDivisibleByH(m.clone()));
            }
            e.poly.add_term(m.with_h(m.hexp() - 1), c.clone());
        }
        Ok(e)
    }

    /// The same element read in another truncation (terms outside it dropped).
    pub fn retruncate(&self, spec: TruncationSpec) -> Self {
        assert_eq!(spec.d, self.spec.d);
        let mut e = Self::zero(spec);
        for (m, c) in self.poly.terms() {
            if spec.keeps(m) {
                e.poly.add_term(m.clone(), c.clone());
            }
        }
        e
    }

    /// The star product.
    pub fn star(&self, other: &Self) -> Result<Self, WeylError> {
        self.check(other)?;
        let spec = self.spec;
        let lhs: Vec<(&Monomial, &Rational)> = self.poly.terms().collect();
        let rhs: Vec<(&Monomial, &Rational)> = other.poly.terms().collect();
        let work = |chunk: &[(&Monomial, &Rational)]| {
            let mut acc = BTreeMap::new();
            for (ma, ca) in chunk {
                for (mb, cb) in &rhs {
                    if ma.weight() + mb.weight() > spec.n {
                        // rhs is sorted by weight
                        break;
                    }
                    monomial_star_into(&spec, ma, mb, &(*ca * *cb), &mut acc);
                }
            }
            acc
        };
        // Exact addition is order independent, so the parallel split is
        // bit-identical to the sequential loop.
        let acc = if lhs.len() * rhs.len() > 4096 {
            lhs.par_chunks(16)
                .map(work)
                .reduce(BTreeMap::new, |mut a, b| {
                    for (m, c) in b {
                        *a.entry(m).or_insert_with(Rational::zero) += c;
                    }
                    a
                })
        } else {
            work(&lhs)
        };
        let poly = TruncatedPoly::from_terms(spec.d, spec.n, acc);
        Ok(Self { spec, poly })
    }

    pub fn commutator(&self, other: &Self) -> Result<Self, WeylError> {
        self.star(other)?.sub(&other.star(self)?)
    }

    /// The antiinvolution fixing `x_i`, `y_i` and sending `h` to `-h`.
    ///
    /// On a normal-ordered monomial, `iota(x^a y^b h^k) = (-h)^k y^b x^a`, which
    /// is then brought back to normal order.
    pub fn iota(&self) -> Self {
        let spec = self.spec;
        let d = spec.d;
        let mut acc = BTreeMap::new();
        for (m, c) in self.poly.terms() {
            let ys = Monomial::from_exponents(
                &(0..2 * d).map(|j| if j < d { 0 } else { m.exp(j) }).collect::<Vec<_>>(),
                m.hexp(),
            );
            let xs = Monomial::from_exponents(
                &(0..2 * d).map(|j| if j < d { m.exp(j) } else { 0 }).collect::<Vec<_>>(),
                0,
            );
            let c = if m.hexp() % 2 == 1 { -c } else { c.clone() };
            monomial_star_into(&spec, &ys, &xs, &c, &mut acc);
        }
        Self { spec, poly: TruncatedPoly::from_terms(d, spec.n, acc) }
    }

    /// Reduction modulo `h`, an algebra map onto the commutative truncation.
    pub fn mod_h(&self) -> TruncatedPoly {
        self.poly.mod_h()
    }

    /// Whether the element commutes with every generator in `D` itself.
    ///
    /// The check runs one weight and one `h`-order above the element's own
    /// truncation: otherwise e.g. `y h^p` would look central, because its
    /// commutator with `x` is `-h^{p+1}`, which vanishes in `D_p`.
    pub fn center_check(&self) -> bool {
        let work = TruncationSpec::new(self.spec.d, self.spec.p + 1, self.spec.n + 1);
        let a = self.retruncate(work);
        WeylElement::generators(work)
            .iter()
            .all(|g| a.commutator(g).map(|c| c.is_zero()).unwrap_or(false))
    }

    /// First term whose coefficient differs, as a witness for failed equalities.
    pub fn first_difference(&self, other: &Self) -> Option<(Monomial, Rational, Rational)> {
        let diff = &self.poly - &other.poly;
        let m = diff.terms().next().map(|(m, _)| m.clone())?;
        let (a, b) = (self.coeff(&m), other.coeff(&m));
        Some((m, a, b))
    }

    pub fn to_json(&self) -> PolyJson {
        let mut j = self.poly.to_json();
        j.p = Some(self.spec.p);
        j
    }

    pub fn from_json(j: &PolyJson) -> Result<Self, WeylError> {
        let p = j.p.ok_or_else(|| SeriesError::Json("missing \"p\" field".into()))?;
        let poly = TruncatedPoly::from_json(j)?;
        Self::from_symbol(TruncationSpec::new(j.d, p, j.cutoff), poly)
    }
}

/// Poisson bracket induced by the quantization: `(1/h)[a~, b~] mod h`.
///
/// The lifts are the normal-order symbols taken at `p = 1` and weight `N + 2`,
/// which is enough for the result to be exact at weight `N`.
pub fn induced_poisson(a: &TruncatedPoly, b: &TruncatedPoly) -> Result<TruncatedPoly, WeylError> {
    let d = a.dim();
    let n = a.cutoff();
    if b.dim() != d {
        return Err(SeriesError::DimensionMismatch { left: d, right: b.dim() }.into());
    }
    if b.cutoff() != n {
        return Err(SeriesError::CutoffMismatch { left: n, right: b.cutoff() }.into());
    }
    if !a.is_h_free() || !b.is_h_free() {
        return Err(SeriesError::HDependent.into());
    }
    let spec = TruncationSpec::new(d, 1, n + 2);
    let comm = WeylElement::lift(spec, a)?.commutator(&WeylElement::lift(spec, b)?)?;
    divide_by_h_mod_h(&comm, n)
}

/// `(1/h) c mod h`, requiring `c` to be divisible by `h`.
pub(crate) fn divide_by_h_mod_h(c: &WeylElement, cutoff: u32) -> Result<TruncatedPoly, WeylError> {
    let mut out = TruncatedPoly::zero(c.spec.d, cutoff);
    for (m, k) in c.terms() {
        match m.hexp() {
            0 => return Err(WeylError::NotDivisibleByH(m.clone())),
            1 => out.add_term(m.without_h(), k.clone()),
            _ => {}
        }
    }
    Ok(out)
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.poly, self.spec)
    }
}

impl std::ops::Add for &WeylElement {
    type Output = WeylElement;
    fn add(self, rhs: Self) -> WeylElement {
        WeylElement::add(self, rhs).expect("matching truncation")
    }
}

impl std::ops::Sub for &WeylElement {
    type Output = WeylElement;
    fn sub(self, rhs: Self) -> WeylElement {
        WeylElement::sub(self, rhs).expect("matching truncation")
    }
}

#[cfg(test)]
mod tests;
