use std::collections::BTreeMap;

use num_traits::Zero;
use proptest::prelude::{any, prop_assert, prop_assert_eq, proptest, ProptestConfig};

use super::*;
use crate::random;
use crate::rational::int;
use crate::series::PoissonBivector;

fn spec(d: usize, p: u32, n: u32) -> TruncationSpec {
    TruncationSpec::new(d, p, n)
}

fn mono(spec: TruncationSpec, x: &[u16], y: &[u16], h: u16, c: Rational) -> WeylElement {
    WeylElement::from_monomial(spec, Monomial::new(x, y, h), c)
}

// ---------------------------------------------------------------------------
// Independent oracle: the Weyl algebra in one variable acting on Q[h][t] by
// x = h d/dt and y = multiplication by t, so that [x, y] = h.

type TPoly = BTreeMap<(u32, u32), Rational>; // (t exponent, h exponent)

fn apply_letter(l: Letter, f: &TPoly) -> TPoly {
    let mut out = TPoly::new();
    for (&(t, hh), c) in f {
        let (key, c) = match l {
            Letter::X(_) => {
                if t == 0 {
                    continue;
                }
                ((t - 1, hh + 1), c * int(t as i64))
            }
            Letter::Y(_) => ((t + 1, hh), c.clone()),
            Letter::H => ((t, hh + 1), c.clone()),
        };
        *out.entry(key).or_insert_with(Rational::zero) += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Applies a word as an operator: the rightmost letter acts first.
fn apply_word(w: &[Letter], f: &TPoly) -> TPoly {
    w.iter().rev().fold(f.clone(), |acc, &l| apply_letter(l, &acc))
}

fn apply_element(e: &WeylElement, f: &TPoly) -> TPoly {
    let mut out = TPoly::new();
    for (m, c) in e.terms() {
        let mut w = vec![Letter::X(0); m.exp(0) as usize];
        w.extend(vec![Letter::Y(0); m.exp(1) as usize]);
        w.extend(vec![Letter::H; m.hexp() as usize]);
        for (k, v) in apply_word(&w, f) {
            *out.entry(k).or_insert_with(Rational::zero) += c * v;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn t_power(n: u32) -> TPoly {
    TPoly::from([((n, 0), int(1))])
}

fn same_operator(w: &[Letter], e: &WeylElement) -> bool {
    (0..8).all(|n| apply_word(w, &t_power(n)) == apply_element(e, &t_power(n)))
}

#[test]
fn matrix_oracle_confirms_relation_sign() {
    let big = spec(1, 6, 16);
    let yx = normal_order_word(big, &[Letter::Y(0), Letter::X(0)], Strategy::Leftmost);
    let expect = &mono(big, &[1], &[1], 0, int(1)) - &mono(big, &[0], &[0], 1, int(1));
    assert_eq!(yx, expect);
    assert!(same_operator(&[Letter::Y(0), Letter::X(0)], &yx));
}

#[test]
fn y_squared_x() {
    let big = spec(1, 6, 16);
    let w = [Letter::Y(0), Letter::Y(0), Letter::X(0)];
    let e = normal_order_word(big, &w, Strategy::Leftmost);
    let expect = &mono(big, &[1], &[2], 0, int(1)) - &mono(big, &[0], &[1], 1, int(2));
    assert_eq!(e, expect);
    assert!(same_operator(&w, &e));
}

#[test]
fn already_normal() {
    let s = spec(1, 2, 6);
    let e = normal_order_word(s, &[Letter::X(0), Letter::Y(0)], Strategy::Rightmost);
    assert_eq!(e, mono(s, &[1], &[1], 0, int(1)));
}

#[test]
fn rewriting_agrees_with_operator_oracle_on_random_words() {
    let big = spec(1, 10, 20);
    let mut rng = random::rng(7);
    use rand::Rng;
    for _ in 0..40 {
        let len = rng.gen_range(1..7);
        let w: Vec<Letter> = (0..len)
            .map(|_| match rng.gen_range(0..5) {
                0 => Letter::H,
                1 | 2 => Letter::X(0),
                _ => Letter::Y(0),
            })
            .collect();
        let e = normal_order_word(big, &w, Strategy::Random(rng.gen()));
        assert!(same_operator(&w, &e), "word {w:?} -> {e:?}");
    }
}

#[test]
fn star_formula_matches_operator_oracle() {
    let big = spec(1, 10, 20);
    let mut rng = random::rng(11);
    for _ in 0..30 {
        let a = random::weyl(&mut rng, spec(1, 3, 6), 3).retruncate(big);
        let b = random::weyl(&mut rng, spec(1, 3, 6), 3).retruncate(big);
        let ab = a.star(&b).unwrap();
        for n in 0..6 {
            let lhs = apply_element(&ab, &t_power(n));
            let rhs = apply_element(&a, &apply_element(&b, &t_power(n)));
            assert_eq!(lhs, rhs);
        }
    }
}

// ---------------------------------------------------------------------------

#[test]
fn defining_relations_at_d2() {
    let s = spec(2, 3, 8);
    let h = WeylElement::h(s);
    for i in 0..2 {
        for j in 0..2 {
            let (xi, xj) = (WeylElement::x(s, i), WeylElement::x(s, j));
            let (yi, yj) = (WeylElement::y(s, i), WeylElement::y(s, j));
            let expect = if i == j { h.clone() } else { WeylElement::zero(s) };
            assert_eq!(xi.commutator(&yj).unwrap(), expect);
            assert!(xi.commutator(&xj).unwrap().is_zero());
            assert!(yi.commutator(&yj).unwrap().is_zero());
            assert!(xi.commutator(&h).unwrap().is_zero());
            assert!(yj.commutator(&h).unwrap().is_zero());
        }
    }
}

#[test]
fn commutator_of_x_squared_and_y() {
    let s = spec(1, 2, 6);
    let x2 = mono(s, &[2], &[0], 0, int(1));
    let c = x2.commutator(&WeylElement::y(s, 0)).unwrap();
    assert_eq!(c, mono(s, &[1], &[0], 1, int(2)));
}

#[test]
fn star_agrees_with_rewriting() {
    let s = spec(2, 2, 6);
    let mut rng = random::rng(3);
    for (k, strategy) in [Strategy::Leftmost, Strategy::Rightmost, Strategy::Random(9)].into_iter().enumerate() {
        for _ in 0..10 {
            let a = random::weyl(&mut rng, s, 4);
            let b = random::weyl(&mut rng, s, 4);
            assert_eq!(a.star(&b).unwrap(), star_by_rewriting(&a, &b, strategy), "strategy {k}");
        }
    }
}

#[test]
fn unit_and_spec_mismatch() {
    let s = spec(1, 2, 6);
    let mut rng = random::rng(5);
    let a = random::weyl(&mut rng, s, 5);
    assert_eq!(a.star(&WeylElement::one(s)).unwrap(), a);
    assert!(matches!(a.star(&WeylElement::one(spec(1, 1, 6))), Err(WeylError::SpecMismatch { .. })));
}

#[test]
fn iota_on_generators() {
    let s = spec(1, 2, 6);
    assert_eq!(WeylElement::h(s).iota(), WeylElement::h(s).neg());
    assert_eq!(WeylElement::x(s, 0).iota(), WeylElement::x(s, 0));
    // iota(x y) = iota(y) iota(x) = y x = x y - h
    let xy = mono(s, &[1], &[1], 0, int(1));
    let yx = WeylElement::y(s, 0).star(&WeylElement::x(s, 0)).unwrap();
    assert_eq!(xy.iota(), yx);
}

/// iota computed by reversing words, negating h and rewriting.
fn iota_by_rewriting(a: &WeylElement) -> WeylElement {
    let d = a.spec().d;
    let mut words = Vec::new();
    for (m, c) in a.terms() {
        let mut w = Vec::new();
        for i in 0..d {
            w.extend(std::iter::repeat(Letter::X(i)).take(m.exp(i) as usize));
        }
        for i in 0..d {
            w.extend(std::iter::repeat(Letter::Y(i)).take(m.exp(d + i) as usize));
        }
        w.reverse();
        let sign = if m.hexp() % 2 == 1 { int(-1) } else { int(1) };
        w.extend(std::iter::repeat(Letter::H).take(m.hexp() as usize));
        words.push((c * sign, w));
    }
    normal_order(a.spec(), &words, Strategy::Leftmost)
}

#[test]
fn iota_matches_word_reversal() {
    let s = spec(2, 2, 6);
    let mut rng = random::rng(13);
    for _ in 0..20 {
        let a = random::weyl(&mut rng, s, 6);
        assert_eq!(a.iota(), iota_by_rewriting(&a));
    }
}

#[test]
fn mod_h_examples() {
    let s = spec(1, 2, 6);
    let e = &mono(s, &[1], &[1], 0, int(1)) - &WeylElement::h(s);
    assert_eq!(e.mod_h(), TruncatedPoly::monomial(1, 6, Monomial::new(&[1], &[1], 0), int(1)));
    assert!(WeylElement::h(s).mod_h().is_zero());
}

#[test]
fn mod_h_kernel_is_h_divisible_terms() {
    let s = spec(1, 2, 4);
    for m in Monomial::all_up_to_weight(1, 4, 2) {
        let e = WeylElement::from_monomial(s, m.clone(), int(1));
        assert_eq!(e.mod_h().is_zero(), m.hexp() > 0);
    }
}

#[test]
fn induced_poisson_normalization() {
    let x = TruncatedPoly::x(1, 4, 0);
    let y = TruncatedPoly::y(1, 4, 0);
    assert_eq!(induced_poisson(&x, &y).unwrap(), TruncatedPoly::one(1, 4));
    assert!(induced_poisson(&x, &x).unwrap().is_zero());
    assert!(matches!(induced_poisson(&TruncatedPoly::h(1, 4), &x), Err(WeylError::Series(SeriesError::HDependent))));
}

#[test]
fn induced_poisson_is_lift_independent() {
    let n = 6;
    let s = spec(2, 1, n + 2);
    let mut rng = random::rng(17);
    for _ in 0..10 {
        let a = random::h_free_poly(&mut rng, 2, n, 5);
        let b = random::h_free_poly(&mut rng, 2, n, 5);
        let base = divide_by_h_mod_h(
            &WeylElement::lift(s, &a).unwrap().commutator(&WeylElement::lift(s, &b).unwrap()).unwrap(),
            n,
        )
        .unwrap();
        let other = WeylElement::lift(s, &a).unwrap().add(&random::weyl(&mut rng, s, 4).mul_h_power(1)).unwrap();
        let alt = divide_by_h_mod_h(&other.commutator(&WeylElement::lift(s, &b).unwrap()).unwrap(), n).unwrap();
        assert_eq!(base, alt);
        assert_eq!(base, induced_poisson(&a, &b).unwrap());
    }
}

#[test]
fn center_check_examples() {
    let s = spec(1, 2, 6);
    let e = &mono(s, &[0], &[0], 2, int(1)) + &WeylElement::scalar(s, int(3));
    assert!(e.center_check());
    assert!(!WeylElement::x(s, 0).center_check());
    // y h^p is central only in the truncation, not in D
    assert!(!mono(s, &[0], &[1], 2, int(1)).center_check());
}

#[test]
fn center_is_pure_h_exhaustively() {
    let s = spec(1, 2, 4);
    for m in Monomial::all_up_to_weight(1, 4, 2) {
        let e = WeylElement::from_monomial(s, m.clone(), int(1));
        assert_eq!(e.center_check(), m.is_pure_h(), "{m}");
    }
}

#[test]
fn json_roundtrip() {
    let s = spec(2, 2, 6);
    let mut rng = random::rng(1);
    let a = random::weyl(&mut rng, s, 6);
    let j = a.to_json();
    assert_eq!(j.p, Some(2));
    assert_eq!(WeylElement::from_json(&j).unwrap(), a);
}

// ---------------------------------------------------------------------------
// The split model of D_1.

fn d1_basis(d: usize, max_weight: u32, n: u32) -> Vec<D1Element> {
    let mut out = Vec::new();
    for m in Monomial::all_up_to_weight(d, max_weight, 0) {
        let f = TruncatedPoly::monomial(d, n, m.clone(), int(1));
        out.push(D1Element::from_even(f.clone()).unwrap());
        if m.weight() + 2 <= max_weight {
            out.push(D1Element::new(TruncatedPoly::zero(d, n), f.with_cutoff(n - 2)).unwrap());
        }
    }
    out
}

#[test]
fn d1_product_of_generators() {
    let n = 6;
    let x = D1Element::from_even(TruncatedPoly::x(1, n, 0)).unwrap();
    let y = D1Element::from_even(TruncatedPoly::y(1, n, 0)).unwrap();
    let c = x.commutator(&y).unwrap();
    // x*y - y*x = h {x, y} = h
    assert!(c.even.is_zero());
    assert_eq!(c.odd, TruncatedPoly::one(1, n - 2));
    assert_eq!(d1_product(&x, &D1Element::one(1, n)).unwrap(), x);
}

#[test]
fn d1_product_transports_star_up_to_weight_6() {
    // Product weight can reach 12; work at N = 12 so nothing is truncated.
    let n = 12;
    let basis = d1_basis(1, 6, n);
    for a in &basis {
        let wa = a.to_weyl();
        assert_eq!(&D1Element::from_weyl(&wa).unwrap(), a);
        for b in &basis {
            let lhs = d1_product(a, b).unwrap().to_weyl();
            let rhs = wa.star(&b.to_weyl()).unwrap();
            assert_eq!(lhs, rhs, "a = {a:?}, b = {b:?}");
        }
    }
}

#[test]
fn split_is_the_iota_eigenspace_decomposition() {
    let n = 8;
    for a in d1_basis(1, 6, n) {
        let w = a.to_weyl();
        let expect = D1Element::new(a.even.clone(), a.odd.neg()).unwrap().to_weyl();
        assert_eq!(w.iota(), expect);
    }
}

#[test]
fn d1_bracket_is_scaled_commutator() {
    let n = 10;
    let basis = d1_basis(1, 5, n);
    let s2 = spec(1, 2, n);
    let s1 = spec(1, 1, n);
    for a in &basis {
        for b in &basis {
            let c = a.to_weyl().retruncate(s2).commutator(&b.to_weyl().retruncate(s2)).unwrap();
            let q = c.divide_by_h().unwrap().retruncate(s1);
            assert_eq!(d1_bracket(a, b).unwrap().to_weyl(), q);
        }
    }
}

// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn star_is_associative(seed in any::<u64>()) {
        let s = spec(2, 2, 6);
        let mut rng = random::rng(seed);
        let (a, b, c) = (random::weyl(&mut rng, s, 4), random::weyl(&mut rng, s, 4), random::weyl(&mut rng, s, 4));
        prop_assert_eq!(a.star(&b).unwrap().star(&c).unwrap(), a.star(&b.star(&c).unwrap()).unwrap());
    }

    #[test]
    fn iota_is_involutive_antihomomorphism(seed in any::<u64>()) {
        let s = spec(1, 2, 6);
        let mut rng = random::rng(seed);
        let (a, b) = (random::weyl(&mut rng, s, 5), random::weyl(&mut rng, s, 5));
        prop_assert_eq!(a.iota().iota(), a.clone());
        prop_assert_eq!(a.star(&b).unwrap().iota(), b.iota().star(&a.iota()).unwrap());
    }

    #[test]
    fn mod_h_is_multiplicative(seed in any::<u64>()) {
        let s = spec(2, 2, 6);
        let mut rng = random::rng(seed);
        let (a, b) = (random::weyl(&mut rng, s, 5), random::weyl(&mut rng, s, 5));
        prop_assert_eq!(a.star(&b).unwrap().mod_h(), &a.mod_h() * &b.mod_h());
    }

    #[test]
    fn induced_poisson_matches_standard_bivector(seed in any::<u64>()) {
        let n = 6;
        let mut rng = random::rng(seed);
        let a = random::h_free_poly(&mut rng, 2, n, 4);
        let b = random::h_free_poly(&mut rng, 2, n, 4);
        let th = PoissonBivector::standard(2, n);
        prop_assert_eq!(induced_poisson(&a, &b).unwrap(), th.bracket(&a, &b).unwrap());
    }

    #[test]
    fn rewriting_strategies_are_confluent(seed in any::<u64>()) {
        use rand::Rng;
        let s = spec(2, 3, 10);
        let mut rng = random::rng(seed);
        let len = rng.gen_range(0..9);
        let w: Vec<Letter> = (0..len).map(|_| match rng.gen_range(0..5) {
            0 => Letter::H,
            1 => Letter::X(rng.gen_range(0..2)),
            _ => Letter::Y(rng.gen_range(0..2)),
        }).collect();
        let left = normal_order_word(s, &w, Strategy::Leftmost);
        prop_assert_eq!(&left, &normal_order_word(s, &w, Strategy::Rightmost));
        prop_assert_eq!(&left, &normal_order_word(s, &w, Strategy::Random(rng.gen())));
    }

    #[test]
    fn commutator_satisfies_jacobi(seed in any::<u64>()) {
        let s = spec(1, 3, 8);
        let mut rng = random::rng(seed);
        let (a, b, c) = (random::weyl(&mut rng, s, 3), random::weyl(&mut rng, s, 3), random::weyl(&mut rng, s, 3));
        let j = a.commutator(&b.commutator(&c).unwrap()).unwrap()
            .add(&b.commutator(&c.commutator(&a).unwrap()).unwrap()).unwrap()
            .add(&c.commutator(&a.commutator(&b).unwrap()).unwrap()).unwrap();
        prop_assert!(j.is_zero());
        prop_assert!(a.commutator(&a).unwrap().is_zero());
        prop_assert!(WeylElement::h(s).commutator(&a).unwrap().is_zero());
    }
}
