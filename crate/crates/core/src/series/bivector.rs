use super::{SeriesError, TruncatedPoly};

/// A bivector `Theta = sum_{i,j} Theta_ij d/dz_i (x) d/dz_j` with
/// antisymmetric coefficient matrix.
///
/// The bracket is `{f, g} = sum_ij Theta_ij (d_i f)(d_j g)`; the standard
/// bivector has `Theta[x_i][y_i] = 1`, so `{x_i, y_j} = delta_ij`, matching
/// `[x_i, y_j] = delta_ij h` in the Weyl algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonBivector {
    d: usize,
    cutoff: u32,
    entries: Vec<Vec<TruncatedPoly>>,
}

impl PoissonBivector {
    pub fn standard(d: usize, cutoff: u32) -> Self {
        let n = 2 * d;
        let mut entries = vec![vec![TruncatedPoly::zero(d, cutoff); n]; n];
        for i in 0..d {
            entries[i][d + i] = TruncatedPoly::one(d, cutoff);
            entries[d + i][i] = TruncatedPoly::one(d, cutoff).neg();
        }
        Self { d, cutoff, entries }
    }

    /// Validates antisymmetry (including a zero diagonal).
    pub fn from_matrix(d: usize, cutoff: u32, entries: Vec<Vec<TruncatedPoly>>) -> Result<Self, SeriesError> {
        let n = 2 * d;
        if entries.len() != n || entries.iter().any(|r| r.len() != n) {
            return Err(SeriesError::DimensionMismatch { left: n, right: entries.len() });
        }
        for i in 0..n {
            for j in 0..n {
                let e = &entries[i][j];
                if e.dim() != d {
                    return Err(SeriesError::DimensionMismatch { left: d, right: e.dim() });
                }
                if e.cutoff() != cutoff {
                    return Err(SeriesError::CutoffMismatch { left: cutoff, right: e.cutoff() });
                }
                if *e != entries[j][i].neg() {
                    return Err(SeriesError::NotAntisymmetric(i, j));
                }
            }
        }
        Ok(Self { d, cutoff, entries })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn entry(&self, i: usize, j: usize) -> &TruncatedPoly {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<TruncatedPoly>] {
        &self.entries
    }

    /// The same entries carried at another cutoff. Raising the cutoff does not
    /// invent terms, so brackets are then exact only up to the old cutoff.
    pub fn with_cutoff(&self, cutoff: u32) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|row| row.iter().map(|e| if cutoff < self.cutoff { e.truncate(cutoff) } else { e.with_cutoff(cutoff) }).collect())
            .collect();
        Self { d: self.d, cutoff, entries }
    }

    /// `{f, g}` for h-independent `f`, `g` at the bivector's cutoff.
    pub fn bracket(&self, f: &TruncatedPoly, g: &TruncatedPoly) -> Result<TruncatedPoly, SeriesError> {
        for p in [f, g] {
            if p.dim() != self.d {
                return Err(SeriesError::DimensionMismatch { left: self.d, right: p.dim() });
            }
            if p.cutoff() != self.cutoff {
                return Err(SeriesError::CutoffMismatch { left: self.cutoff, right: p.cutoff() });
            }
            if !p.is_h_free() {
                return Err(SeriesError::HDependent);
            }
        }
        let n = 2 * self.d;
        let df: Vec<TruncatedPoly> = (0..n).map(|c| f.partial(c)).collect::<Result<_, _>>()?;
        let dg: Vec<TruncatedPoly> = (0..n).map(|c| g.partial(c)).collect::<Result<_, _>>()?;
        let mut acc = TruncatedPoly::zero(self.d, self.cutoff);
        for i in 0..n {
            if df[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if dg[j].is_zero() || self.entries[i][j].is_zero() {
                    continue;
                }
                let t = self.entries[i][j].mul_into_cutoff(&df[i], self.cutoff);
                acc = &acc + &t.mul_into_cutoff(&dg[j], self.cutoff);
            }
        }
        Ok(acc)
    }

    /// `{f,{g,k}} + {g,{k,f}} + {k,{f,g}}`.
    pub fn jacobiator(&self, f: &TruncatedPoly, g: &TruncatedPoly, k: &TruncatedPoly) -> Result<TruncatedPoly, SeriesError> {
        let a = self.bracket(f, &self.bracket(g, k)?)?;
        let b = self.bracket(g, &self.bracket(k, f)?)?;
        let c = self.bracket(k, &self.bracket(f, g)?)?;
        Ok(&(&a + &b) + &c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::Monomial;

    #[test]
    fn standard_normalization() {
        let th = PoissonBivector::standard(2, 4);
        let x1 = TruncatedPoly::x(2, 4, 0);
        let x2 = TruncatedPoly::x(2, 4, 1);
        let y1 = TruncatedPoly::y(2, 4, 0);
        assert_eq!(th.bracket(&x1, &y1).unwrap(), TruncatedPoly::one(2, 4));
        assert!(th.bracket(&x1, &x2).unwrap().is_zero());
        assert_eq!(th.bracket(&y1, &x1).unwrap(), TruncatedPoly::one(2, 4).neg());
    }

    #[test]
    fn x_squared_y_squared() {
        let th = PoissonBivector::standard(1, 4);
        let x2 = TruncatedPoly::monomial(1, 4, Monomial::new(&[2], &[0], 0), int(1));
        let y2 = TruncatedPoly::monomial(1, 4, Monomial::new(&[0], &[2], 0), int(1));
        let xy = TruncatedPoly::monomial(1, 4, Monomial::new(&[1], &[1], 0), int(4));
        assert_eq!(th.bracket(&x2, &y2).unwrap(), xy);
    }

    #[test]
    fn rejects_h_and_asymmetry() {
        let th = PoissonBivector::standard(1, 4);
        let h = TruncatedPoly::h(1, 4);
        assert_eq!(th.bracket(&h, &h), Err(SeriesError::HDependent));
        let mut m = th.entries().to_vec();
        m[0][1] = TruncatedPoly::x(1, 4, 0);
        assert!(matches!(PoissonBivector::from_matrix(1, 4, m), Err(SeriesError::NotAntisymmetric(..))));
    }
}
