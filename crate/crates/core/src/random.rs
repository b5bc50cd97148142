//! Seeded random elements for property sweeps.
//!
//! Everything is driven by a `ChaCha8Rng` so that a sweep is reproducible from
//! its seed alone, across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rational::{rat, Rational};
use crate::series::{Monomial, TruncatedPoly};
use crate::weyl::{TruncationSpec, WeylElement};

pub type SweepRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SweepRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small nonzero rational with numerator in `[-4, 4]` and denominator in `[1, 3]`.
pub fn rational(rng: &mut SweepRng) -> Rational {
    let mut n = 0;
    while n == 0 {
        n = rng.gen_range(-4..=4);
    }
    rat(n, rng.gen_range(1..=3))
}

/// Random polynomial with up to `nterms` terms drawn from monomials of weight
/// `<= cutoff` and `h`-order `<= max_h`.
pub fn poly(rng: &mut SweepRng, d: usize, cutoff: u32, nterms: usize, max_h: u16) -> TruncatedPoly {
    let pool = Monomial::all_up_to_weight(d, cutoff, max_h);
    poly_from_pool(rng, d, cutoff, nterms, &pool)
}

pub fn poly_from_pool(
    rng: &mut SweepRng,
    d: usize,
    cutoff: u32,
    nterms: usize,
    pool: &[Monomial],
) -> TruncatedPoly {
    let mut p = TruncatedPoly::zero(d, cutoff);
    for _ in 0..nterms {
        let m = pool[rng.gen_range(0..pool.len())].clone();
        p.add_term(m, rational(rng));
    }
    p
}

/// Random `h`-free polynomial.
pub fn h_free_poly(rng: &mut SweepRng, d: usize, cutoff: u32, nterms: usize) -> TruncatedPoly {
    poly(rng, d, cutoff, nterms, 0)
}

/// Random `h`-free polynomial without constant term.
pub fn vanishing_poly(rng: &mut SweepRng, d: usize, cutoff: u32, nterms: usize) -> TruncatedPoly {
    let pool: Vec<Monomial> =
        Monomial::all_up_to_weight(d, cutoff, 0).into_iter().filter(|m| !m.is_one()).collect();
    poly_from_pool(rng, d, cutoff, nterms, &pool)
}

/// Random element of `D_p` with up to `nterms` normal-ordered terms.
pub fn weyl(rng: &mut SweepRng, spec: TruncationSpec, nterms: usize) -> WeylElement {
    let p = poly(rng, spec.d, spec.n, nterms, spec.p.min(u16::MAX as u32) as u16);
    WeylElement::lift(spec, &p).expect("dimensions agree")
}
