use std::collections::BTreeMap;
use std::fmt;
use std::ops;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{Monomial, SeriesError};
use crate::rational::{self, Rational};

/// Truncated power series in `x1..xd, y1..yd, h` with exact rational
/// coefficients.
///
/// Only monomials of weight `<= cutoff` are retained and zero coefficients are
/// never stored, so two values are equal iff their term maps are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedPoly {
    d: usize,
    cutoff: u32,
    terms: BTreeMap<Monomial, Rational>,
}

impl TruncatedPoly {
    pub fn zero(d: usize, cutoff: u32) -> Self {
        Self { d, cutoff, terms: BTreeMap::new() }
    }

    pub fn constant(d: usize, cutoff: u32, c: Rational) -> Self {
        Self::monomial(d, cutoff, Monomial::one(d), c)
    }

    pub fn one(d: usize, cutoff: u32) -> Self {
        Self::constant(d, cutoff, rational::one())
    }

    pub fn monomial(d: usize, cutoff: u32, m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(d, cutoff);
        p.add_term(m, c);
        p
    }

    /// The coordinate function `x_i` or `y_i` (see [`Monomial`] for indexing).
    pub fn coordinate(d: usize, cutoff: u32, coord: usize) -> Self {
        Self::monomial(d, cutoff, Monomial::coordinate(d, coord), rational::one())
    }

    pub fn x(d: usize, cutoff: u32, i: usize) -> Self {
        Self::coordinate(d, cutoff, i)
    }

    pub fn y(d: usize, cutoff: u32, i: usize) -> Self {
        Self::coordinate(d, cutoff, d + i)
    }

    pub fn h(d: usize, cutoff: u32) -> Self {
        Self::monomial(d, cutoff, Monomial::h_power(d, 1), rational::one())
    }

    pub fn from_terms(
        d: usize,
        cutoff: u32,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut p = Self::zero(d, cutoff);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, Rational> {
        self.terms
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one(self.d))
    }

    /// Adds `c * m`, discarding it if it lies above the cutoff.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        assert_eq!(m.dim(), self.d, "monomial dimension does not match");
        if c.is_zero() || m.weight() > self.cutoff {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
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
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            d: self.d,
            cutoff: self.cutoff,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero(self.d, self.cutoff);
        }
        Self {
            d: self.d,
            cutoff: self.cutoff,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_compatible(other)?;
        Ok(self.mul_into_cutoff(other, self.cutoff))
    }

    /// Product truncated at an explicit cutoff; operand cutoffs are not compared.
    pub(crate) fn mul_into_cutoff(&self, other: &Self, cutoff: u32) -> Self {
        debug_assert_eq!(self.d, other.d);
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            let wa = ma.weight();
            if wa > cutoff {
                break;
            }
            for (mb, cb) in &other.terms {
                if wa + mb.weight() > cutoff {
                    // terms are sorted by weight
                    break;
                }
                *acc.entry(ma.mul(mb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Self { d: self.d, cutoff, terms: acc }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.d, self.cutoff);
        for _ in 0..k {
            acc = acc.mul_into_cutoff(self, self.cutoff);
        }
        acc
    }

    /// Formal partial derivative in coordinate `coord` (`0..2d`).
    pub fn partial(&self, coord: usize) -> Result<Self, SeriesError> {
        if coord >= 2 * self.d {
            return Err(SeriesError::CoordinateOutOfRange { index: coord, dim: self.d });
        }
        let mut out = Self::zero(self.d, self.cutoff);
        for (m, c) in &self.terms {
            let e = m.exp(coord);
            if let Some(lower) = m.lower(coord) {
                out.add_term(lower, c * Rational::from_integer(e.into()));
            }
        }
        Ok(out)
    }

    /// Same element viewed at a smaller cutoff.
    pub fn truncate(&self, cutoff: u32) -> Self {
        assert!(cutoff <= self.cutoff, "cannot raise the cutoff of a truncated series");
        Self {
            d: self.d,
            cutoff,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight() <= cutoff)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Reinterprets the stored polynomial at another cutoff, dropping terms
    /// above it. Only meaningful when the value is an exact polynomial.
    pub fn with_cutoff(&self, cutoff: u32) -> Self {
        Self::from_terms(self.d, cutoff, self.terms.iter().map(|(m, c)| (m.clone(), c.clone())))
    }

    pub fn is_h_free(&self) -> bool {
        self.terms.keys().all(|m| m.hexp() == 0)
    }

    /// Drops every term divisible by `h`.
    pub fn mod_h(&self) -> Self {
        self.filter(|m| m.hexp() == 0)
    }

    /// The h-free coefficient of `h^k`.
    pub fn h_coefficient(&self, k: u16) -> Self {
        Self {
            d: self.d,
            cutoff: self.cutoff,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.hexp() == k)
                .map(|(m, c)| (m.without_h(), c.clone()))
                .collect(),
        }
    }

    pub fn max_hexp(&self) -> u16 {
        self.terms.keys().map(|m| m.hexp()).max().unwrap_or(0)
    }

    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Self {
        Self {
            d: self.d,
            cutoff: self.cutoff,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Terms of exactly this weight.
    pub fn homogeneous_part(&self, weight: u32) -> Self {
        self.filter(|m| m.weight() == weight)
    }

    /// Smallest weight carrying a nonzero term.
    pub fn lowest_weight(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.weight())
    }

    /// Substitutes `subs[c]` for coordinate `c`; `h` is left alone.
    ///
    /// All substituted series must have zero constant term, so the result is
    /// determined up to the cutoff. Result cutoff is `self.cutoff`.
    pub fn compose(&self, subs: &[TruncatedPoly]) -> Result<Self, SeriesError> {
        if subs.len() != 2 * self.d {
            return Err(SeriesError::DimensionMismatch { left: 2 * self.d, right: subs.len() });
        }
        let n = self.cutoff;
        for s in subs {
            if s.d != self.d {
                return Err(SeriesError::DimensionMismatch { left: self.d, right: s.d });
            }
            if !s.constant_term().is_zero() {
                return Err(SeriesError::NonzeroConstantTerm);
            }
        }
        let subs: Vec<TruncatedPoly> = subs.iter().map(|s| s.with_cutoff(n)).collect();
        // powers[c][e] = subs[c]^e, built lazily
        let mut powers: Vec<Vec<TruncatedPoly>> =
            subs.iter().map(|_| vec![TruncatedPoly::one(self.d, n)]).collect();
        let mut out = Self::zero(self.d, n);
        for (m, c) in &self.terms {
            let mut term = TruncatedPoly::monomial(self.d, n, Monomial::h_power(self.d, m.hexp()), c.clone());
            for (coord, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[coord].len() <= e as usize {
                    let next = powers[coord].last().unwrap().mul_into_cutoff(&subs[coord], n);
                    powers[coord].push(next);
                }
                term = term.mul_into_cutoff(&powers[coord][e as usize], n);
                if term.is_zero() {
                    break;
                }
            }
            for (tm, tc) in term.terms {
                out.add_term(tm, tc);
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse by order-by-order geometric series.
    ///
    /// Writes `self = c (1 + r)` with `r(0) = 0` and sums `(1/c) sum (-r)^k`
    /// until the powers of `r` fall below the cutoff.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(SeriesError::NotInvertible);
        }
        let inv_c = rational::one() / &c;
        let mut r = self.scale(&inv_c);
        r.add_term(Monomial::one(self.d), -rational::one());
        let minus_r = r.neg();
        let mut acc = Self::one(self.d, self.cutoff);
        let mut power = Self::one(self.d, self.cutoff);
        loop {
            power = power.mul_into_cutoff(&minus_r, self.cutoff);
            if power.is_zero() {
                break;
            }
            for (m, k) in &power.terms {
                acc.add_term(m.clone(), k.clone());
            }
        }
        Ok(acc.scale(&inv_c))
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }
}

impl fmt::Display for TruncatedPoly {
    /// Canonical print, lowest weight first, that parses back to the same
    /// value: `1 - x1 + 1/2*x1*y1 - h`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = rational::is_negative(c);
            let abs = if neg { -c } else { c.clone() };
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                f.write_str(&rational::to_display(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", rational::to_display(&abs))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TruncatedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}] (d={}, N={})", self.d, self.cutoff)
    }
}

// Operator forms panic on mismatched dimension or cutoff; use the methods
// above when the operands come from untrusted input.
impl ops::Add for &TruncatedPoly {
    type Output = TruncatedPoly;
    fn add(self, rhs: Self) -> TruncatedPoly {
        TruncatedPoly::add(self, rhs).expect("incompatible truncated series")
    }
}

impl ops::Sub for &TruncatedPoly {
    type Output = TruncatedPoly;
    fn sub(self, rhs: Self) -> TruncatedPoly {
        TruncatedPoly::sub(self, rhs).expect("incompatible truncated series")
    }
}

impl ops::Mul for &TruncatedPoly {
    type Output = TruncatedPoly;
    fn mul(self, rhs: Self) -> TruncatedPoly {
        TruncatedPoly::mul(self, rhs).expect("incompatible truncated series")
    }
}

impl ops::Neg for &TruncatedPoly {
    type Output = TruncatedPoly;
    fn neg(self) -> TruncatedPoly {
        TruncatedPoly::neg(self)
    }
}

/// JSON form: exponent arrays `[x1..xd, y1..yd, h]` in monomial order with
/// `"num/den"` coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub schema: u32,
    pub d: usize,
    #[serde(rename = "N")]
    pub cutoff: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    pub terms: Vec<(Vec<u16>, String)>,
}

impl TruncatedPoly {
    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            schema: crate::JSON_SCHEMA_VERSION,
            d: self.d,
            cutoff: self.cutoff,
            p: None,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.exponents().to_vec();
                    e.push(m.hexp());
                    (e, rational::to_wire(c))
                })
                .collect(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<Self, SeriesError> {
        let mut p = Self::zero(j.d, j.cutoff);
        for (e, c) in &j.terms {
            if e.len() != 2 * j.d + 1 {
                return Err(SeriesError::Json(format!("exponent array {e:?} has wrong length")));
            }
            let c = rational::parse(c).map_err(|e| SeriesError::Json(e.to_string()))?;
            let m = Monomial::from_exponents(&e[..2 * j.d], e[2 * j.d]);
            if m.weight() > j.cutoff {
                return Err(SeriesError::Json(format!("term {m} exceeds cutoff {}", j.cutoff)));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }
}
