use rand::Rng;
use serde_json::json;

use super::{form_to_bivector, DarbouxError, FormalCoordChange, FormalSymplecticForm};
use crate::check::{Check, CheckList};
use crate::random;
use crate::series::{SeriesError, TruncatedPoly};
use crate::weyl::{TruncationSpec, WeylElement};

/// The Weyl product carried to the original coordinates along a Darboux
/// chart: `a *' b = ((a o phi) * (b o phi)) o phi^{-1}`.
#[derive(Debug, Clone)]
pub struct TransportedStar {
    phi: FormalCoordChange,
    inverse: FormalCoordChange,
    spec: TruncationSpec,
}

impl TransportedStar {
    pub fn new(phi: FormalCoordChange, spec: TruncationSpec) -> Result<Self, DarbouxError> {
        if spec.d != phi.dim() {
            return Err(SeriesError::DimensionMismatch { left: spec.d, right: phi.dim() }.into());
        }
        if spec.n != phi.cutoff() {
            return Err(DarbouxError::CutoffMismatch { left: phi.cutoff(), right: spec.n });
        }
        let inverse = phi.inverse()?;
        Ok(Self { phi, inverse, spec })
    }

    pub fn spec(&self) -> TruncationSpec {
        self.spec
    }

    pub fn chart(&self) -> &FormalCoordChange {
        &self.phi
    }

    pub fn star(&self, a: &TruncatedPoly, b: &TruncatedPoly) -> Result<TruncatedPoly, DarbouxError> {
        let wa = WeylElement::from_symbol(self.spec, self.phi.apply(a)?)?;
        let wb = WeylElement::from_symbol(self.spec, self.phi.apply(b)?)?;
        let prod = wa.star(&wb)?;
        Ok(prod.symbol().compose(self.inverse.components())?)
    }

    pub fn commutator(&self, a: &TruncatedPoly, b: &TruncatedPoly) -> Result<TruncatedPoly, DarbouxError> {
        Ok(&self.star(a, b)? - &self.star(b, a)?)
    }

    /// `(1/h)(a *' b - b *' a) mod h`, at cutoff `N - 2`.
    pub fn induced_bracket(&self, a: &TruncatedPoly, b: &TruncatedPoly) -> Result<TruncatedPoly, DarbouxError> {
        let c = self.commutator(a, b)?;
        if let Some((m, _)) = c.terms().find(|(m, _)| m.hexp() == 0) {
            return Err(crate::weyl::WeylError::NotDivisibleByH(m.clone()).into());
        }
        let mut out = TruncatedPoly::zero(self.spec.d, self.spec.n.saturating_sub(2));
        for (m, k) in c.terms() {
            if m.hexp() == 1 {
                out.add_term(m.without_h(), k.clone());
            }
        }
        Ok(out)
    }

    /// Associativity, unit, commutativity mod `h` and the induced bracket
    /// against the bivector of `omega`, on seeded random inputs.
    pub fn axiom_checks(&self, omega: &FormalSymplecticForm, seed: u64, samples: usize) -> CheckList {
        let mut out = CheckList::new();
        let (d, n, p) = (self.spec.d, self.spec.n, self.spec.p);
        let mut rng = random::rng(seed);
        let max_h = p.min(u32::from(u16::MAX)) as u16;
        let mut sample = |h: u16| {
            let terms = rng.gen_range(1..=4);
            random::poly(&mut rng, d, n, terms, h)
        };
        let triples: Vec<_> = (0..samples).map(|_| (sample(max_h), sample(max_h), sample(max_h))).collect();
        let pairs: Vec<_> = (0..samples).map(|_| (sample(0), sample(0))).collect();

        let assoc = triples.iter().enumerate().find_map(|(i, (a, b, c))| {
            let lhs = self.star(&self.star(a, b).ok()?, c).ok()?;
            let rhs = self.star(a, &self.star(b, c).ok()?).ok()?;
            (lhs != rhs).then_some(i)
        });
        out.push(sample_check("transported product is associative", samples, assoc));

        let one = TruncatedPoly::one(d, n);
        let unit = triples.iter().enumerate().find_map(|(i, (a, _, _))| {
            let ok = self.star(&one, a).ok().as_ref() == Some(a) && self.star(a, &one).ok().as_ref() == Some(a);
            (!ok).then_some(i)
        });
        out.push(sample_check("1 is a two-sided unit", samples, unit));

        let comm = pairs.iter().enumerate().find_map(|(i, (a, b))| {
            let c = self.commutator(a, b).ok()?;
            (!c.mod_h().is_zero()).then_some(i)
        });
        out.push(sample_check("product is commutative mod h", samples, comm));

        let name = "induced bracket equals the Poisson bracket of the form";
        match omega.form().truncate(n).map_err(DarbouxError::from).and_then(|w| {
            let w = super::check_symplectic(&w)?;
            form_to_bivector(&w)
        }) {
            Ok(theta) => {
                let theta = theta.with_cutoff(n);
                let bad = pairs.iter().enumerate().find_map(|(i, (a, b))| {
                    let got = self.induced_bracket(a, b).ok()?;
                    let want = theta.bracket(a, b).ok()?.truncate(n.saturating_sub(2));
                    (got != want).then_some(i)
                });
                out.push(sample_check(name, samples, bad));
            }
            Err(e) => out.push(Check::fail(name, json!(e.to_string()))),
        }
        out
    }
}

fn sample_check(name: &str, samples: usize, bad: Option<usize>) -> Check {
    match bad {
        None => Check::pass(name).with_witness(json!({ "samples": samples })),
        Some(i) => Check::fail(name, json!({ "sample": i })),
    }
}

/// One product `a *' b`; builds the inverse chart on every call, so prefer
/// [`TransportedStar`] for repeated use.
pub fn transported_star(
    phi: &FormalCoordChange,
    a: &TruncatedPoly,
    b: &TruncatedPoly,
    spec: TruncationSpec,
) -> Result<TruncatedPoly, DarbouxError> {
    TransportedStar::new(phi.clone(), spec)?.star(a, b)
}
