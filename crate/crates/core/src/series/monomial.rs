use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// Exponent vector of `x1..xd y1..yd h`.
///
/// Coordinates are indexed `0..2d`: index `i < d` is `x_{i+1}`, index `d + i`
/// is `y_{i+1}`. `h` is not a coordinate (it cannot be differentiated).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: SmallVec<[u16; 8]>,
    h: u16,
}

impl Monomial {
    pub fn one(d: usize) -> Self {
        Self { exps: SmallVec::from_elem(0, 2 * d), h: 0 }
    }

    pub fn new(xexp: &[u16], yexp: &[u16], hexp: u16) -> Self {
        assert_eq!(xexp.len(), yexp.len(), "x and y exponent vectors differ in length");
        let mut exps = SmallVec::with_capacity(2 * xexp.len());
        exps.extend_from_slice(xexp);
        exps.extend_from_slice(yexp);
        Self { exps, h: hexp }
    }

    pub fn from_exponents(exps: &[u16], hexp: u16) -> Self {
        assert!(exps.len() % 2 == 0, "coordinate exponent vector must have even length");
        Self { exps: SmallVec::from_slice(exps), h: hexp }
    }

    /// The coordinate function with index `coord` (see type docs).
    pub fn coordinate(d: usize, coord: usize) -> Self {
        let mut m = Self::one(d);
        m.exps[coord] = 1;
        m
    }

    pub fn h_power(d: usize, k: u16) -> Self {
        let mut m = Self::one(d);
        m.h = k;
        m
    }

    pub fn dim(&self) -> usize {
        self.exps.len() / 2
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    pub fn xexp(&self) -> &[u16] {
        &self.exps[..self.dim()]
    }

    pub fn yexp(&self) -> &[u16] {
        &self.exps[self.dim()..]
    }

    pub fn exp(&self, coord: usize) -> u16 {
        self.exps[coord]
    }

    pub fn hexp(&self) -> u16 {
        self.h
    }

    /// Total degree in the coordinates (h excluded).
    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    /// `deg_x + deg_y + 2 deg_h`.
    pub fn weight(&self) -> u32 {
        self.degree() + 2 * self.h as u32
    }

    pub fn is_one(&self) -> bool {
        self.h == 0 && self.exps.iter().all(|&e| e == 0)
    }

    /// True when no coordinate occurs (a pure power of `h`, including 1).
    pub fn is_pure_h(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
            h: self.h + other.h,
        }
    }

    pub fn with_h(&self, hexp: u16) -> Monomial {
        Monomial { exps: self.exps.clone(), h: hexp }
    }

    pub fn without_h(&self) -> Monomial {
        self.with_h(0)
    }

    /// Exponent vector with `coord` lowered by one, if possible.
    pub fn lower(&self, coord: usize) -> Option<Monomial> {
        if self.exps[coord] == 0 {
            return None;
        }
        let mut m = self.clone();
        m.exps[coord] -= 1;
        Some(m)
    }

    pub fn raise(&self, coord: usize) -> Monomial {
        let mut m = self.clone();
        m.exps[coord] += 1;
        m
    }

    pub fn coord_name(d: usize, coord: usize) -> String {
        if coord < d {
            format!("x{}", coord + 1)
        } else {
            format!("y{}", coord - d + 1)
        }
    }

    /// All h-free monomials of the given degree in `2d` coordinates.
    pub fn all_of_degree(d: usize, degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut exps = vec![0u16; 2 * d];
        fn rec(pos: usize, left: u32, exps: &mut Vec<u16>, out: &mut Vec<Monomial>) {
            if pos + 1 == exps.len() {
                exps[pos] = left as u16;
                out.push(Monomial::from_exponents(exps, 0));
                return;
            }
            for e in (0..=left).rev() {
                exps[pos] = e as u16;
                rec(pos + 1, left - e, exps, out);
            }
            exps[pos] = 0;
        }
        if d == 0 {
            return out;
        }
        rec(0, degree, &mut exps, &mut out);
        out.sort();
        out
    }

    /// All monomials (h allowed) of weight at most `max_weight`, sorted.
    pub fn all_up_to_weight(d: usize, max_weight: u32, max_h: u16) -> Vec<Monomial> {
        let mut out = Vec::new();
        for hexp in 0..=max_h {
            let hw = 2 * hexp as u32;
            if hw > max_weight {
                break;
            }
            for deg in 0..=(max_weight - hw) {
                out.extend(Monomial::all_of_degree(d, deg).into_iter().map(|m| m.with_h(hexp)));
            }
        }
        out.sort();
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then(self.h.cmp(&other.h))
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    /// `x1^2*y1*h`, or `1` for the unit.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.dim();
        let mut parts = Vec::new();
        for (c, &e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(Monomial::coord_name(d, c)),
                _ => parts.push(format!("{}^{}", Monomial::coord_name(d, c), e)),
            }
        }
        match self.h {
            0 => {}
            1 => parts.push("h".to_string()),
            k => parts.push(format!("h^{k}")),
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
