//! The split model of `D_1 = D / h^2 D`.
//!
//! The antiinvolution `iota` acts on `D_1` with eigenvalue `+1` on the
//! symmetrized lifts `sigma(f) = f - (h/2) sum_i d_{x_i} d_{y_i} f` and `-1` on
//! `h A`, giving the vector space identification `D_1 = A (+) hA`,
//! `(a0, a1) <-> sigma(a0) + h a1`. Transporting the product of `D_1` through it
//! gives
//!
//! ```text
//! (a0 + h a1) * (b0 + h b1) = a0 b0 + h (a0 b1 + a1 b0 + 1/2 {a0, b0})
//! ```
//!
//! with `{x_i, y_i} = 1`. The factor `1/2` is forced: with factor 1 the
//! commutator `x * y - y * x` would come out as `2h` instead of `h`. The Lie
//! bracket `(1/h)[a, b] mod h^2` becomes the `h`-linear extension of `{,}`,
//! because commutators of symmetrized lifts have no `h^2` term.

use super::{TruncationSpec, WeylElement, WeylError};
use crate::rational::{self, Rational};
use crate::series::{PoissonBivector, SeriesError, TruncatedPoly};

/// `a0 + h a1` with `a0`, `a1` independent of `h`.
///
/// With weight cutoff `N`, the even part is kept to weight `N` and the odd part
/// to weight `N - 2` (it is multiplied by `h`, which has weight 2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct D1Element {
    pub even: TruncatedPoly,
    pub odd: TruncatedPoly,
}

impl D1Element {
    /// `even` must carry cutoff `N >= 2`; `odd` is truncated to `N - 2`.
    pub fn new(even: TruncatedPoly, odd: TruncatedPoly) -> Result<Self, SeriesError> {
        if even.dim() != odd.dim() {
            return Err(SeriesError::DimensionMismatch { left: even.dim(), right: odd.dim() });
        }
        if !even.is_h_free() || !odd.is_h_free() {
            return Err(SeriesError::HDependent);
        }
        let n = even.cutoff();
        if n < 2 || odd.cutoff() < n - 2 {
            return Err(SeriesError::CutoffMismatch { left: n.saturating_sub(2), right: odd.cutoff() });
        }
        let odd = odd.truncate(n - 2);
        Ok(Self { even, odd })
    }

    pub fn from_even(even: TruncatedPoly) -> Result<Self, SeriesError> {
        let odd = TruncatedPoly::zero(even.dim(), even.cutoff().saturating_sub(2));
        Self::new(even, odd)
    }

    pub fn dim(&self) -> usize {
        self.even.dim()
    }

    pub fn cutoff(&self) -> u32 {
        self.even.cutoff()
    }

    pub fn one(d: usize, cutoff: u32) -> Self {
        Self::from_even(TruncatedPoly::one(d, cutoff)).expect("cutoff >= 2")
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(Self { even: self.even.add(&other.even)?, odd: self.odd.add(&other.odd)? })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(Self { even: self.even.sub(&other.even)?, odd: self.odd.sub(&other.odd)? })
    }

    pub fn is_zero(&self) -> bool {
        self.even.is_zero() && self.odd.is_zero()
    }

    /// The element `sigma(a0) + h a1` of `D_1`.
    pub fn to_weyl(&self) -> WeylElement {
        let spec = TruncationSpec::new(self.dim(), 1, self.cutoff());
        let odd = WeylElement::lift(spec, &self.odd.with_cutoff(self.cutoff()))
            .expect("dimensions agree")
            .mul_h_power(1);
        sym_lift(spec, &self.even).add(&odd).expect("same spec")
    }

    /// Inverse of [`to_weyl`](Self::to_weyl); terms of `h`-order above 1 are ignored.
    pub fn from_weyl(w: &WeylElement) -> Result<Self, WeylError> {
        let spec = w.spec();
        if spec.p < 1 {
            return Err(WeylError::SpecMismatch { left: spec, right: TruncationSpec::new(spec.d, 1, spec.n) });
        }
        let spec1 = TruncationSpec::new(spec.d, 1, spec.n);
        let w = w.retruncate(spec1);
        let even = w.mod_h();
        let rest = w.sub(&sym_lift(spec1, &even))?;
        let odd = rest.symbol().h_coefficient(1).truncate(spec.n.saturating_sub(2));
        Ok(D1Element::new(even, odd)?)
    }
}

/// `sigma(f) = f - (h/2) sum_i d_{x_i} d_{y_i} f`, the `iota`-invariant lift of an
/// h-free `f` modulo `h^2`, read in `spec`.
pub fn sym_lift(spec: TruncationSpec, f: &TruncatedPoly) -> WeylElement {
    let d = f.dim();
    let mut e = WeylElement::lift(spec, f).expect("dimensions agree");
    if spec.p == 0 {
        return e;
    }
    let half = rational::rat(-1, 2);
    let mut lap = TruncatedPoly::zero(d, f.cutoff());
    for i in 0..d {
        let t = f.partial(i).and_then(|g| g.partial(d + i)).expect("valid coordinate");
        lap = &lap + &t;
    }
    let corr = WeylElement::lift(spec, &lap.with_cutoff(spec.n)).expect("dimensions agree");
    e = e.add(&corr.mul_h_power(1).scale(&half)).expect("same spec");
    e
}

fn bracket(a: &TruncatedPoly, b: &TruncatedPoly) -> TruncatedPoly {
    let n = a.cutoff().max(b.cutoff());
    let th = PoissonBivector::standard(a.dim(), n);
    th.bracket(&a.with_cutoff(n), &b.with_cutoff(n)).expect("h-free operands")
}

/// The transported product `ab + h(a0 b1 + a1 b0 + 1/2 {a0, b0})`.
pub fn d1_product(a: &D1Element, b: &D1Element) -> Result<D1Element, SeriesError> {
    if a.dim() != b.dim() {
        return Err(SeriesError::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    if a.cutoff() != b.cutoff() {
        return Err(SeriesError::CutoffMismatch { left: a.cutoff(), right: b.cutoff() });
    }
    let n = a.cutoff();
    let m = n - 2;
    let even = a.even.mul(&b.even)?;
    let mut odd = a.even.truncate(m).mul(&b.odd)?;
    odd = &odd + &a.odd.mul(&b.even.truncate(m))?;
    let pb = bracket(&a.even, &b.even).truncate(m);
    odd = &odd + &pb.scale(&rational::rat(1, 2));
    D1Element::new(even, odd)
}

/// The `h`-linear extension of the Poisson bracket:
/// `{a0, b0} + h ({a0, b1} + {a1, b0})`.
pub fn d1_bracket(a: &D1Element, b: &D1Element) -> Result<D1Element, SeriesError> {
    if a.dim() != b.dim() {
        return Err(SeriesError::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    if a.cutoff() != b.cutoff() {
        return Err(SeriesError::CutoffMismatch { left: a.cutoff(), right: b.cutoff() });
    }
    let n = a.cutoff();
    let even = bracket(&a.even, &b.even).truncate(n);
    let odd = &bracket(&a.even, &b.odd) + &bracket(&a.odd, &b.even);
    let odd = odd.truncate(n - 2);
    D1Element::new(even, odd)
}

impl D1Element {
    /// The difference `a*b - b*a` as an element of the split model; equals
    /// `h {a0, b0}` (even part zero).
    pub fn commutator(&self, other: &Self) -> Result<Self, SeriesError> {
        d1_product(self, other)?.sub(&d1_product(other, self)?)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self { even: self.even.scale(k), odd: self.odd.scale(k) }
    }
}
