use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::{Monomial, SeriesError, TruncatedPoly};
use crate::rational::{self, Rational};

/// A differential form `sum_I f_I dz_I` on the formal polydisc.
///
/// `dz_c` has weight 1, so the cutoff applies to the total weight
/// `deg f_I + |I|`: a form of degree `k` stores coefficients truncated at
/// `N - k`. With this convention `d` and `wedge` are exact operations on
/// truncations (they preserve total weight) and pullback by a chart fixing the
/// origin is well defined.
#[derive(Clone, PartialEq, Eq)]
pub struct DifferentialForm {
    d: usize,
    degree: usize,
    cutoff: u32,
    components: BTreeMap<Vec<usize>, TruncatedPoly>,
}

/// Sign of the permutation sorting the concatenation `a ++ b`, or `None` when
/// the two index sets intersect.
fn merge_sign(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut inversions = 0usize;
    for &i in a {
        for &j in b {
            if i == j {
                return None;
            }
            if i > j {
                inversions += 1;
            }
        }
    }
    let mut merged: Vec<usize> = a.iter().chain(b).copied().collect();
    merged.sort_unstable();
    Some((merged, inversions % 2 == 1))
}

impl DifferentialForm {
    pub fn zero(d: usize, degree: usize, cutoff: u32) -> Self {
        Self { d, degree, cutoff, components: BTreeMap::new() }
    }

    /// A function viewed as a 0-form; the polynomial must carry cutoff `N`.
    pub fn from_poly(f: TruncatedPoly) -> Self {
        let (d, cutoff) = (f.dim(), f.cutoff());
        let mut w = Self::zero(d, 0, cutoff);
        if !f.is_zero() {
            w.components.insert(Vec::new(), f);
        }
        w
    }

    /// The 1-form `dz_coord` (coordinates `0..d` are `x`, `d..2d` are `y`).
    pub fn dz(d: usize, cutoff: u32, coord: usize) -> Result<Self, SeriesError> {
        if coord >= 2 * d {
            return Err(SeriesError::CoordinateOutOfRange { index: coord, dim: d });
        }
        let mut w = Self::zero(d, 1, cutoff);
        w.add_component(vec![coord], TruncatedPoly::one(d, cutoff.saturating_sub(1)))?;
        Ok(w)
    }

    /// The standard symplectic form `sum_i dx_i /\ dy_i`.
    pub fn standard_symplectic(d: usize, cutoff: u32) -> Self {
        let mut w = Self::zero(d, 2, cutoff);
        for i in 0..d {
            w.add_component(vec![i, d + i], TruncatedPoly::one(d, w.coeff_cutoff()))
                .expect("valid index");
        }
        w
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// Cutoff carried by the coefficient polynomials (`N - degree`).
    pub fn coeff_cutoff(&self) -> u32 {
        self.cutoff.saturating_sub(self.degree as u32)
    }

    fn in_range(&self) -> bool {
        self.degree as u32 <= self.cutoff
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&[usize], &TruncatedPoly)> + '_ {
        self.components.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn component(&self, idx: &[usize]) -> TruncatedPoly {
        self.components
            .get(idx)
            .cloned()
            .unwrap_or_else(|| TruncatedPoly::zero(self.d, self.coeff_cutoff()))
    }

    /// Adds `f dz_idx`. The index tuple may be in any order; it is sorted with
    /// the appropriate sign, and tuples with a repeated index contribute zero.
    pub fn add_component(&mut self, idx: Vec<usize>, f: TruncatedPoly) -> Result<(), SeriesError> {
        if idx.len() != self.degree {
            return Err(SeriesError::WrongDegree { expected: self.degree, found: idx.len() });
        }
        if f.dim() != self.d {
            return Err(SeriesError::DimensionMismatch { left: self.d, right: f.dim() });
        }
        if let Some(&bad) = idx.iter().find(|&&c| c >= 2 * self.d) {
            return Err(SeriesError::CoordinateOutOfRange { index: bad, dim: self.d });
        }
        if !self.in_range() || f.is_zero() {
            return Ok(());
        }
        let mut sorted = idx.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Ok(());
        }
        // parity of the sorting permutation of idx
        let mut inv = 0usize;
        for i in 0..idx.len() {
            for j in i + 1..idx.len() {
                if idx[i] > idx[j] {
                    inv += 1;
                }
            }
        }
        let cut = self.coeff_cutoff();
        let f = if f.cutoff() > cut { f.truncate(cut) } else { f.with_cutoff(cut) };
        let f = if inv % 2 == 1 { f.neg() } else { f };
        let slot = self
            .components
            .entry(sorted.clone())
            .or_insert_with(|| TruncatedPoly::zero(self.d, cut));
        *slot = &*slot + &f;
        if slot.is_zero() {
            self.components.remove(&sorted);
        }
        Ok(())
    }

    fn check_compatible(&self, other: &Self) -> Result<(), SeriesError> {
        if self.d != other.d {
            return Err(SeriesError::DimensionMismatch { left: self.d, right: other.d });
        }
        if self.cutoff != other.cutoff {
            return Err(SeriesError::CutoffMismatch { left: self.cutoff, right: other.cutoff });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(SeriesError::WrongDegree { expected: self.degree, found: other.degree });
        }
        let mut out = self.clone();
        for (k, f) in &other.components {
            out.add_component(k.clone(), f.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-rational::one())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut out = Self::zero(self.d, self.degree, self.cutoff);
        if k.is_zero() {
            return out;
        }
        out.components = self.components.iter().map(|(i, f)| (i.clone(), f.scale(k))).collect();
        out
    }

    /// `g * self` for a function `g` given at the form's cutoff.
    pub fn mul_function(&self, g: &TruncatedPoly) -> Result<Self, SeriesError> {
        if g.dim() != self.d {
            return Err(SeriesError::DimensionMismatch { left: self.d, right: g.dim() });
        }
        let cut = self.coeff_cutoff();
        let g = g.with_cutoff(cut);
        let mut out = Self::zero(self.d, self.degree, self.cutoff);
        for (i, f) in &self.components {
            out.add_component(i.clone(), f.mul_into_cutoff(&g, cut))?;
        }
        Ok(out)
    }

    /// Exterior derivative. Fails on forms of top degree `2d`.
    pub fn exterior_d(&self) -> Result<Self, SeriesError> {
        let max = 2 * self.d;
        if self.degree >= max {
            return Err(SeriesError::DegreeOverflow { degree: self.degree + 1, max });
        }
        let mut out = Self::zero(self.d, self.degree + 1, self.cutoff);
        let cut = out.coeff_cutoff();
        for (idx, f) in &self.components {
            for c in 0..max {
                if idx.contains(&c) {
                    continue;
                }
                let df = f.partial(c)?;
                if df.is_zero() {
                    continue;
                }
                let mut key = Vec::with_capacity(idx.len() + 1);
                key.push(c);
                key.extend_from_slice(idx);
                out.add_component(key, df.truncate(cut.min(df.cutoff())))?;
            }
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_compatible(other)?;
        let max = 2 * self.d;
        let degree = self.degree + other.degree;
        if degree > max {
            return Err(SeriesError::DegreeOverflow { degree, max });
        }
        let mut out = Self::zero(self.d, degree, self.cutoff);
        if !out.in_range() {
            return Ok(out);
        }
        let cut = out.coeff_cutoff();
        for (a, f) in &self.components {
            for (b, g) in &other.components {
                let Some((key, odd)) = merge_sign(a, b) else { continue };
                let mut prod = f.truncate(cut).mul_into_cutoff(&g.truncate(cut), cut);
                if odd {
                    prod = prod.neg();
                }
                out.add_component(key, prod)?;
            }
        }
        Ok(out)
    }

    /// The same form at a lower cutoff.
    pub fn truncate(&self, cutoff: u32) -> Result<Self, SeriesError> {
        if cutoff > self.cutoff {
            return Err(SeriesError::CutoffMismatch { left: self.cutoff, right: cutoff });
        }
        let mut out = Self::zero(self.d, self.degree, cutoff);
        for (i, f) in &self.components {
            out.add_component(i.clone(), f.clone())?;
        }
        Ok(out)
    }

    /// Keeps only coefficient terms of the given polynomial weight.
    pub fn homogeneous_part(&self, coeff_weight: u32) -> Self {
        let mut out = Self::zero(self.d, self.degree, self.cutoff);
        for (i, f) in &self.components {
            let p = f.homogeneous_part(coeff_weight);
            if !p.is_zero() {
                out.components.insert(i.clone(), p);
            }
        }
        out
    }

    /// Contraction with the Euler field `E = sum_c z_c d/dz_c`.
    ///
    /// Together with `d` this is the radial homotopy of the Poincaré lemma:
    /// for a closed form whose coefficients are homogeneous of degree `k`,
    /// `d(iota_E w) = (k + deg w) w`.
    pub fn euler_contraction(&self) -> Result<Self, SeriesError> {
        if self.degree == 0 {
            return Err(SeriesError::WrongDegree { expected: 1, found: 0 });
        }
        let mut out = Self::zero(self.d, self.degree - 1, self.cutoff);
        let cut = out.coeff_cutoff();
        for (idx, f) in &self.components {
            for (j, &c) in idx.iter().enumerate() {
                let z = TruncatedPoly::coordinate(self.d, cut, c);
                let mut term = f.with_cutoff(cut).mul_into_cutoff(&z, cut);
                if j % 2 == 1 {
                    term = term.neg();
                }
                let mut rest = idx.clone();
                rest.remove(j);
                out.add_component(rest, term)?;
            }
        }
        Ok(out)
    }

    /// Antisymmetric coefficient matrix `M` of a 2-form, `w = sum_{i<j} M_ij dz_i /\ dz_j`.
    pub fn two_form_matrix(&self) -> Result<Vec<Vec<TruncatedPoly>>, SeriesError> {
        if self.degree != 2 {
            return Err(SeriesError::WrongDegree { expected: 2, found: self.degree });
        }
        let n = 2 * self.d;
        let cut = self.coeff_cutoff();
        let mut m = vec![vec![TruncatedPoly::zero(self.d, cut); n]; n];
        for (idx, f) in &self.components {
            m[idx[0]][idx[1]] = f.clone();
            m[idx[1]][idx[0]] = f.neg();
        }
        Ok(m)
    }

    /// Inverse of [`two_form_matrix`](Self::two_form_matrix); only the upper
    /// triangle is read.
    pub fn from_two_form_matrix(d: usize, cutoff: u32, m: &[Vec<TruncatedPoly>]) -> Result<Self, SeriesError> {
        let mut w = Self::zero(d, 2, cutoff);
        for (i, row) in m.iter().enumerate() {
            for (j, f) in row.iter().enumerate().skip(i + 1) {
                w.add_component(vec![i, j], f.clone())?;
            }
        }
        Ok(w)
    }

    /// Largest absolute coefficient weight present, if any (diagnostics).
    pub fn max_coeff_weight(&self) -> Option<u32> {
        self.components
            .values()
            .flat_map(|f| f.terms().map(|(m, _)| m.weight()))
            .max()
    }

    /// Leading coefficient of the lowest coefficient-weight part, used as a
    /// witness when a residual is nonzero.
    pub fn first_term(&self) -> Option<(Vec<usize>, Monomial, Rational)> {
        self.components
            .iter()
            .flat_map(|(i, f)| f.terms().map(move |(m, c)| (i.clone(), m.clone(), c.clone())))
            .min_by(|a, b| a.1.cmp(&b.1))
    }
}

impl fmt::Display for DifferentialForm {
    /// Prints `(coef)*dx1 /\ dy1 + ...`, parseable by the expression grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("0");
        }
        if self.degree == 0 {
            return write!(f, "{}", self.components.values().next().unwrap());
        }
        let mut first = true;
        for (idx, coef) in &self.components {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let names: Vec<String> =
                idx.iter().map(|&c| format!("d{}", Monomial::coord_name(self.d, c))).collect();
            let wedge = names.join(" /\\ ");
            if coef.is_one() {
                f.write_str(&wedge)?;
            } else {
                write!(f, "({coef})*{wedge}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}] (deg={}, d={}, N={})", self.degree, self.d, self.cutoff)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn dz(c: usize) -> DifferentialForm {
        DifferentialForm::dz(1, 6, c).unwrap()
    }

    #[test]
    fn d_of_x_dy() {
        let x = TruncatedPoly::x(1, 5, 0);
        let mut w = DifferentialForm::zero(1, 1, 6);
        w.add_component(vec![1], x).unwrap();
        assert_eq!(w.exterior_d().unwrap(), dz(0).wedge(&dz(1)).unwrap());
    }

    #[test]
    fn area_form_is_closed_at_d2() {
        let w = DifferentialForm::standard_symplectic(2, 6);
        assert!(w.exterior_d().unwrap().is_zero());
        assert!(matches!(
            DifferentialForm::standard_symplectic(1, 6).exterior_d(),
            Err(SeriesError::DegreeOverflow { .. })
        ));
    }

    #[test]
    fn wedge_is_graded_commutative() {
        let a = dz(0);
        let b = dz(1);
        assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap().neg());
        assert!(a.wedge(&a).unwrap().is_zero());
    }

    #[test]
    fn euler_contraction_homotopy() {
        // w = x y dx /\ dy (closed, coefficient degree 2) at d = 1:
        // d(iota_E w) = (2 + 2) w
        let mut w = DifferentialForm::zero(1, 2, 8);
        w.add_component(vec![0, 1], TruncatedPoly::monomial(1, 6, Monomial::new(&[1], &[1], 0), int(1)))
            .unwrap();
        let back = w.euler_contraction().unwrap().exterior_d().unwrap();
        assert_eq!(back, w.scale(&int(4)));
    }

    #[test]
    fn unsorted_indices_pick_up_sign() {
        let mut w = DifferentialForm::zero(1, 2, 4);
        w.add_component(vec![1, 0], TruncatedPoly::one(1, 2)).unwrap();
        assert_eq!(w.component(&[0, 1]), TruncatedPoly::one(1, 2).neg());
        w.add_component(vec![0, 0], TruncatedPoly::one(1, 2)).unwrap();
        assert_eq!(w.components().count(), 1);
    }

    #[test]
    fn display() {
        let x = TruncatedPoly::x(1, 2, 0);
        let mut w = DifferentialForm::standard_symplectic(1, 4);
        w.add_component(vec![0, 1], x).unwrap();
        assert_eq!(w.to_string(), "(1 + x1)*dx1 /\\ dy1");
    }
}
