use num_traits::Zero;

use super::{pullback, DarbouxError, FormalCoordChange, FormalSymplecticForm};
use crate::rational::{self, Rational};
use crate::series::{DifferentialForm, TruncatedPoly};

fn pairing(m: &[Vec<Rational>], u: &[Rational], v: &[Rational]) -> Rational {
    let mut acc = rational::zero();
    for (i, ui) in u.iter().enumerate() {
        if ui.is_zero() {
            continue;
        }
        for (j, vj) in v.iter().enumerate() {
            if !vj.is_zero() && !m[i][j].is_zero() {
                acc += ui * &m[i][j] * vj;
            }
        }
    }
    acc
}

/// A matrix `P` with `P^T M P = J` (so `z |-> P z` pulls the constant form
/// `M` back to the standard one), or `None` if `M` is degenerate.
///
/// Basis vectors are processed in order; each is paired with the first
/// remaining vector it pairs nontrivially with.
pub fn symplectic_gram_schmidt(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    if n % 2 == 1 {
        return None;
    }
    let d = n / 2;
    let mut pool: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { rational::one() } else { rational::zero() }).collect())
        .collect();
    let mut pairs: Vec<(Vec<Rational>, Vec<Rational>)> = Vec::with_capacity(d);
    while let Some(pos) = pool.iter().position(|u| u.iter().any(|a| !a.is_zero())) {
        let u = pool.remove(pos);
        pool.retain(|w| w.iter().any(|a| !a.is_zero()));
        let j = pool.iter().position(|v| !pairing(m, &u, v).is_zero())?;
        let v = pool.remove(j);
        let k = pairing(m, &u, &v);
        let f: Vec<Rational> = v.iter().map(|a| a / &k).collect();
        for w in pool.iter_mut() {
            let a = pairing(m, w, &f);
            let b = pairing(m, w, &u);
            for (idx, wi) in w.iter_mut().enumerate() {
                *wi = &*wi - &a * &u[idx] + &b * &f[idx];
            }
        }
        pairs.push((u, f));
    }
    if pairs.len() != d {
        return None;
    }
    let mut p = vec![vec![rational::zero(); n]; n];
    for (k, (e, f)) in pairs.iter().enumerate() {
        for i in 0..n {
            p[i][k] = e[i].clone();
            p[i][d + k] = f[i].clone();
        }
    }
    Some(p)
}

/// `phi^* Omega - omega_std` at the chart's cutoff.
pub fn darboux_residual(w: &DifferentialForm, phi: &FormalCoordChange) -> Result<DifferentialForm, DarbouxError> {
    let w = w.truncate(phi.cutoff())?;
    let std = DifferentialForm::standard_symplectic(w.dim(), w.cutoff());
    Ok(pullback(&w, phi)?.sub(&std)?)
}

/// A chart `phi` with `phi^* Omega = sum dx_i /\ dy_i` exactly at cutoff `n`.
///
/// Every run verifies its output; a nonzero residual is a hard error.
pub fn darboux_normalize(omega: &FormalSymplecticForm, n: u32) -> Result<FormalCoordChange, DarbouxError> {
    if n > omega.cutoff() {
        return Err(DarbouxError::CutoffMismatch { left: omega.cutoff(), right: n });
    }
    let d = omega.dim();
    let w = omega.form().truncate(n)?;
    let std = DifferentialForm::standard_symplectic(d, n);
    let p = symplectic_gram_schmidt(&omega.constant_matrix())
        .ok_or_else(|| DarbouxError::VerificationFailed("linear normalization failed".into()))?;
    let mut phi = FormalCoordChange::linear(d, n, &p)?;

    for k in 1..=n.saturating_sub(2) {
        let r = pullback(&w, &phi)?.sub(&std)?;
        let rk = r.homogeneous_part(k);
        if rk.is_zero() {
            continue;
        }
        let beta = rk.euler_contraction()?.scale(&rational::rat(1, i64::from(k) + 2));
        if beta.exterior_d()? != rk {
            return Err(DarbouxError::VerificationFailed(format!("weight-{k} discrepancy is not exact")));
        }
        let mut step = Vec::with_capacity(2 * d);
        for c in 0..2 * d {
            let mut z = TruncatedPoly::coordinate(d, n, c);
            let field = if c < d { beta.component(&[d + c]).neg() } else { beta.component(&[c - d]) };
            for (m, a) in field.terms() {
                z.add_term(m.clone(), a.clone());
            }
            step.push(z);
        }
        phi = phi.compose(&FormalCoordChange::new(step)?)?;
    }

    let residual = pullback(&w, &phi)?.sub(&std)?;
    if let Some((idx, m, c)) = residual.first_term() {
        return Err(DarbouxError::VerificationFailed(format!(
            "pullback residual has the term {} * {m} on dz{idx:?}",
            rational::to_display(&c)
        )));
    }
    Ok(phi)
}
