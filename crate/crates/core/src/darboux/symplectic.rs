use super::chart::invert;
use super::{DarbouxError, FormalCoordChange};
use crate::rational::{self, Rational};
use crate::series::{DifferentialForm, PoissonBivector, SeriesError, TruncatedPoly};

/// A closed 2-form, nondegenerate at the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalSymplecticForm {
    form: DifferentialForm,
}

impl FormalSymplecticForm {
    pub fn form(&self) -> &DifferentialForm {
        &self.form
    }

    pub fn dim(&self) -> usize {
        self.form.dim()
    }

    pub fn cutoff(&self) -> u32 {
        self.form.cutoff()
    }

    /// Constant part of the coefficient matrix.
    pub fn constant_matrix(&self) -> Vec<Vec<Rational>> {
        constant_matrix(&self.form).expect("validated 2-form")
    }
}

fn constant_matrix(w: &DifferentialForm) -> Result<Vec<Vec<Rational>>, SeriesError> {
    Ok(w.two_form_matrix()?
        .iter()
        .map(|row| row.iter().map(|f| f.constant_term()).collect())
        .collect())
}

/// Validates closedness and nondegeneracy at the origin, reporting each
/// failure separately.
pub fn check_symplectic(w: &DifferentialForm) -> Result<FormalSymplecticForm, DarbouxError> {
    if w.degree() != 2 {
        return Err(DarbouxError::NotATwoForm(w.degree()));
    }
    // a 2-form in two variables is top degree and closed
    if 2 * w.dim() > 2 {
        let dw = w.exterior_d()?;
        if let Some((index, monomial, c)) = dw.first_term() {
            return Err(DarbouxError::NotClosed { index, monomial, coefficient: rational::to_display(&c) });
        }
    }
    let m0 = constant_matrix(w)?;
    if invert(&m0).is_none() {
        let rows: Vec<_> = m0
            .iter()
            .map(|r| crate::linalg::SparseVec::from_pairs(r.iter().cloned().enumerate()))
            .collect();
        return Err(DarbouxError::Degenerate { rank: crate::linalg::rank(&rows), expected: 2 * w.dim() });
    }
    Ok(FormalSymplecticForm { form: w.clone() })
}

type PolyMatrix = Vec<Vec<TruncatedPoly>>;

fn mat_mul(a: &PolyMatrix, b: &PolyMatrix, d: usize, cutoff: u32) -> PolyMatrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = TruncatedPoly::zero(d, cutoff);
                    for k in 0..n {
                        if a[i][k].is_zero() || b[k][j].is_zero() {
                            continue;
                        }
                        acc = &acc + &a[i][k].mul_into_cutoff(&b[k][j], cutoff);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Inverse of a matrix of power series whose constant part is invertible:
/// `M^{-1} = sum_k (-M0^{-1} R)^k M0^{-1}` with `M = M0 + R`.
fn invert_series_matrix(m: &PolyMatrix, d: usize, cutoff: u32) -> Result<PolyMatrix, DarbouxError> {
    let n = m.len();
    let m0: Vec<Vec<Rational>> = m.iter().map(|r| r.iter().map(|f| f.constant_term()).collect()).collect();
    let m0inv = invert(&m0).ok_or_else(|| {
        let rows: Vec<_> = m0
            .iter()
            .map(|r| crate::linalg::SparseVec::from_pairs(r.iter().cloned().enumerate()))
            .collect();
        DarbouxError::Degenerate { rank: crate::linalg::rank(&rows), expected: n }
    })?;
    let constant = |a: &Rational| TruncatedPoly::constant(d, cutoff, a.clone());
    let m0inv_p: PolyMatrix = m0inv.iter().map(|r| r.iter().map(constant).collect()).collect();
    let r: PolyMatrix = m
        .iter()
        .map(|row| {
            row.iter()
                .map(|f| {
                    let mut g = f.with_cutoff(cutoff);
                    g.add_term(crate::series::Monomial::one(d), -f.constant_term());
                    g
                })
                .collect()
        })
        .collect();
    let step: PolyMatrix = mat_mul(&m0inv_p, &r, d, cutoff)
        .into_iter()
        .map(|row| row.into_iter().map(|f| f.neg()).collect())
        .collect();
    let mut acc = m0inv_p.clone();
    let mut term = m0inv_p;
    loop {
        term = mat_mul(&step, &term, d, cutoff);
        if term.iter().all(|row| row.iter().all(|f| f.is_zero())) {
            break;
        }
        for (ar, tr) in acc.iter_mut().zip(&term) {
            for (a, t) in ar.iter_mut().zip(tr) {
                *a = &*a + t;
            }
        }
    }
    Ok(acc)
}

/// `Theta = -M^{-1}`, carried at the coefficient cutoff `N - 2` of the form.
pub fn form_to_bivector(w: &FormalSymplecticForm) -> Result<PoissonBivector, DarbouxError> {
    let d = w.dim();
    let cut = w.form.coeff_cutoff();
    let m = w.form.two_form_matrix()?;
    let inv = invert_series_matrix(&m, d, cut)?;
    let entries = inv.into_iter().map(|row| row.into_iter().map(|f| f.neg()).collect()).collect();
    Ok(PoissonBivector::from_matrix(d, cut, entries)?)
}

/// `M = -Theta^{-1}`, as a 2-form at cutoff `cutoff(Theta) + 2`.
pub fn bivector_to_form(theta: &PoissonBivector) -> Result<DifferentialForm, DarbouxError> {
    let d = theta.dim();
    let cut = theta.cutoff();
    let inv = invert_series_matrix(&theta.entries().to_vec(), d, cut)?;
    let m: PolyMatrix = inv.into_iter().map(|row| row.into_iter().map(|f| f.neg()).collect()).collect();
    Ok(DifferentialForm::from_two_form_matrix(d, cut + 2, &m)?)
}

/// `phi^* w`: substitute `phi` into the coefficients and each `dz_c` by
/// `d(phi_c)`.
pub fn pullback(w: &DifferentialForm, phi: &FormalCoordChange) -> Result<DifferentialForm, DarbouxError> {
    if w.cutoff() != phi.cutoff() {
        return Err(DarbouxError::CutoffMismatch { left: w.cutoff(), right: phi.cutoff() });
    }
    if w.dim() != phi.dim() {
        return Err(SeriesError::DimensionMismatch { left: w.dim(), right: phi.dim() }.into());
    }
    let (d, n) = (w.dim(), w.cutoff());
    let dphi: Vec<DifferentialForm> = phi
        .components()
        .iter()
        .map(|f| DifferentialForm::from_poly(f.clone()).exterior_d())
        .collect::<Result<_, _>>()?;
    let mut out = DifferentialForm::zero(d, w.degree(), n);
    for (idx, f) in w.components() {
        let coeff = f.compose(phi.components())?;
        if coeff.is_zero() {
            continue;
        }
        let mut jac = DifferentialForm::from_poly(TruncatedPoly::one(d, n));
        for &c in idx {
            jac = jac.wedge(&dphi[c])?;
        }
        out = out.add(&jac.mul_function(&coeff)?)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::series::Monomial;

    #[test]
    fn x_times_area_form_is_degenerate() {
        let mut w = DifferentialForm::zero(1, 2, 4);
        w.add_component(vec![0, 1], TruncatedPoly::x(1, 2, 0)).unwrap();
        assert!(matches!(check_symplectic(&w), Err(DarbouxError::Degenerate { rank: 0, expected: 2 })));
    }

    #[test]
    fn non_closed_form_is_reported() {
        let mut w = DifferentialForm::standard_symplectic(2, 4);
        w.add_component(vec![0, 2], TruncatedPoly::x(2, 2, 1)).unwrap();
        let err = check_symplectic(&w).unwrap_err();
        assert!(matches!(err, DarbouxError::NotClosed { .. }), "{err}");
    }

    #[test]
    fn scaled_area_form_inverts_to_geometric_series() {
        let n = 8;
        let mut w = DifferentialForm::zero(1, 2, n);
        let f = &TruncatedPoly::one(1, n - 2) + &TruncatedPoly::x(1, n - 2, 0);
        w.add_component(vec![0, 1], f).unwrap();
        let theta = form_to_bivector(&check_symplectic(&w).unwrap()).unwrap();
        let mut expected = TruncatedPoly::zero(1, n - 2);
        for k in 0..=n - 2 {
            let sign = if k % 2 == 0 { int(1) } else { int(-1) };
            expected.add_term(Monomial::new(&[k as u16], &[0], 0), sign);
        }
        assert_eq!(theta.entry(0, 1), &expected);
    }
}
