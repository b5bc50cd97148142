//! Normal ordering of words in the generators by explicit rewriting.
//!
//! This is the slow, obviously-correct path: it applies one rule at a time
//! (`y_i x_i -> x_i y_i - h`, and plain swaps for commuting neighbours) until
//! every word is sorted as `x.. y.. h..`. The star product uses a closed
//! formula instead; the two are compared in tests.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{TruncationSpec, WeylElement};
use crate::rational::{self, Rational};
use crate::series::Monomial;

/// A generator; indices are 0-based (`X(0)` is `x1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    X(usize),
    Y(usize),
    H,
}

impl Letter {
    fn key(self) -> (u8, usize) {
        match self {
            Letter::X(i) => (0, i),
            Letter::Y(i) => (1, i),
            Letter::H => (2, 0),
        }
    }

    fn weight(self) -> u32 {
        match self {
            Letter::H => 2,
            _ => 1,
        }
    }
}

pub type Word = Vec<Letter>;

/// Which out-of-order adjacent pair to rewrite next.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
    /// Uniformly random redex, reproducible from the seed.
    Random(u64),
}

fn redexes(w: &[Letter]) -> impl Iterator<Item = usize> + '_ {
    (0..w.len().saturating_sub(1)).filter(move |&j| w[j].key() > w[j + 1].key())
}

fn to_monomial(d: usize, w: &[Letter]) -> Monomial {
    let mut exps = vec![0u16; 2 * d];
    let mut h = 0;
    for l in w {
        match *l {
            Letter::X(i) => exps[i] += 1,
            Letter::Y(i) => exps[d + i] += 1,
            Letter::H => h += 1,
        }
    }
    Monomial::from_exponents(&exps, h)
}

/// Rewrites a linear combination of words to canonical form in `D_p`.
///
/// Every rule preserves weight and never lowers the number of `h` letters, so
/// words leaving the truncation are dropped as soon as they appear. Each rule
/// strictly lowers the number of inversions of the non-`h` letters or removes
/// two of them, so rewriting terminates.
pub fn normal_order(spec: TruncationSpec, words: &[(Rational, Word)], strategy: Strategy) -> WeylElement {
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let in_range = |w: &Word| {
        let weight: u32 = w.iter().map(|l| l.weight()).sum();
        let hs = w.iter().filter(|l| **l == Letter::H).count() as u32;
        weight <= spec.n && hs <= spec.p
    };
    let mut pending: BTreeMap<Word, Rational> = BTreeMap::new();
    let push = |pending: &mut BTreeMap<Word, Rational>, w: Word, c: Rational| {
        if c.is_zero() || !in_range(&w) {
            return;
        }
        let slot = pending.entry(w.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            pending.remove(&w);
        }
    };
    for (c, w) in words {
        assert!(
            w.iter().all(|l| !matches!(l, Letter::X(i) | Letter::Y(i) if *i >= spec.d)),
            "letter index out of range for d={}",
            spec.d
        );
        push(&mut pending, w.clone(), c.clone());
    }
    let mut out = WeylElement::zero(spec);
    while let Some((w, c)) = pending.pop_first() {
        let positions: Vec<usize> = redexes(&w).collect();
        if positions.is_empty() {
            out.poly.add_term(to_monomial(spec.d, &w), c);
            continue;
        }
        let j = match strategy {
            Strategy::Leftmost => positions[0],
            Strategy::Rightmost => positions[positions.len() - 1],
            Strategy::Random(_) => positions[rng.as_mut().unwrap().gen_range(0..positions.len())],
        };
        let mut swapped = w.clone();
        swapped.swap(j, j + 1);
        if let (Letter::Y(a), Letter::X(b)) = (w[j], w[j + 1]) {
            if a == b {
                let mut contracted = w.clone();
                contracted[j] = Letter::H;
                contracted.remove(j + 1);
                push(&mut pending, contracted, -c.clone());
            }
        }
        push(&mut pending, swapped, c);
    }
    out
}

/// Convenience: a single word with coefficient one.
pub fn normal_order_word(spec: TruncationSpec, w: &[Letter], strategy: Strategy) -> WeylElement {
    normal_order(spec, &[(rational::one(), w.to_vec())], strategy)
}

/// The concatenation of the normal-ordered words of two elements, rewritten;
/// an independent definition of the star product.
pub fn star_by_rewriting(a: &WeylElement, b: &WeylElement, strategy: Strategy) -> WeylElement {
    let d = a.spec().d;
    let word_of = |m: &Monomial| -> Word {
        let mut w = Vec::new();
        for i in 0..d {
            w.extend(std::iter::repeat(Letter::X(i)).take(m.exp(i) as usize));
        }
        for i in 0..d {
            w.extend(std::iter::repeat(Letter::Y(i)).take(m.exp(d + i) as usize));
        }
        w.extend(std::iter::repeat(Letter::H).take(m.hexp() as usize));
        w
    };
    let mut words = Vec::new();
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            let mut w = word_of(ma);
            w.extend(word_of(mb));
            words.push((ca * cb, w));
        }
    }
    normal_order(a.spec(), &words, strategy)
}
