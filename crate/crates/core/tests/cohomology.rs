use std::sync::Arc;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use dqkit_core::cohomology::{
    ce_differential, check_cocycle, cohomology_dim, is_coboundary, omega_checks, omega_class, tower_obstruction,
    Cochain, CohomologyError, Complex, LieModule,
};
use dqkit_core::lie::{build_g_tower, build_h, build_sp, extension_cocycle, BasisElement, GradedLieAlgebra};
use dqkit_core::random;
use dqkit_core::SparseVec;

fn unit_trivial(alg: Arc<GradedLieAlgebra>) -> LieModule {
    LieModule::trivial("k", alg, vec![BasisElement::new("1", 0)])
}

/// The textbook Chevalley–Eilenberg formula evaluated tuple by tuple.
fn naive_d(c: &Cochain, m: &LieModule, s: &[usize]) -> SparseVec {
    let alg = m.algebra();
    let mut out = SparseVec::new();
    for i in 0..s.len() {
        let rest: Vec<usize> = s.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &x)| x).collect();
        let term = m.act(s[i], &c.get(&rest));
        if i % 2 == 0 {
            out = out.add(&term);
        } else {
            out = out.sub(&term);
        }
    }
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            let rest: Vec<usize> =
                s.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, &x)| x).collect();
            let br = alg.bracket(s[i], s[j]);
            let mut term = SparseVec::new();
            for (q, k) in br.iter() {
                let mut t = vec![q];
                t.extend(&rest);
                term.axpy(k, &c.get(&t));
            }
            if (i + j) % 2 == 0 {
                out = out.add(&term);
            } else {
                out = out.sub(&term);
            }
        }
    }
    out
}

fn random_cochain(cx: &Complex<'_>, k: usize, w: i32, seed: u64, terms: usize) -> Cochain {
    let mut rng = random::rng(seed);
    let basis = cx.block_basis(k, w);
    let mut c = Cochain::new(k, w);
    if basis.is_empty() {
        return c;
    }
    for _ in 0..terms {
        let (t, v) = &basis[rng.gen_range(0..basis.len())];
        c.add_at(t, &SparseVec::unit(*v).scaled(&random::rational(&mut rng)));
    }
    c
}

fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, t: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if t.len() == k {
            out.push(t.clone());
            return;
        }
        for i in start..n {
            t.push(i);
            rec(n, k, i + 1, t, out);
            t.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}

fn assert_matches_naive(c: &Cochain, m: &LieModule) {
    let cx = Complex::new(m);
    let dc = cx.differential(c);
    for s in tuples(m.algebra().dim(), c.degree() + 1) {
        if !cx.admissible(&s, c.weight()) {
            assert!(dc.get(&s).is_zero(), "value on inadmissible tuple {s:?}");
            continue;
        }
        assert_eq!(dc.get(&s), naive_d(c, m, &s), "tuple {s:?}");
    }
}

#[test]
fn differential_matches_textbook_formula_on_sp4_adjoint() {
    let sp = build_sp(2).unwrap();
    let m = LieModule::adjoint(sp.algebra.clone());
    let cx = Complex::new(&m);
    for k in 0..=2 {
        for seed in 0..3 {
            assert_matches_naive(&random_cochain(&cx, k, 0, seed, 12), &m);
        }
    }
}

#[test]
fn differential_matches_textbook_formula_on_truncated_h() {
    let h = build_h(1, 4).unwrap();
    let m = LieModule::adjoint(h.algebra.clone());
    let cx = Complex::new(&m);
    for (k, w) in [(0, 0), (1, 0), (1, 1), (2, 0), (2, -1)] {
        for seed in 0..3 {
            assert_matches_naive(&random_cochain(&cx, k, w, seed, 10), &m);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn d_squared_vanishes_on_h(seed in any::<u64>(), k in 0usize..3, w in -1i32..2) {
        let h = build_h(1, 5).unwrap();
        let m = LieModule::adjoint(h.algebra.clone());
        let cx = Complex::new(&m);
        let c = random_cochain(&cx, k, w, seed, 8);
        let ddc = cx.differential(&cx.differential(&c));
        prop_assert!(ddc.is_zero());
    }

    #[test]
    fn d_squared_vanishes_with_trivial_coefficients(seed in any::<u64>(), k in 0usize..3, w in -2i32..3) {
        let h = build_h(1, 5).unwrap();
        let m = unit_trivial(h.algebra.clone());
        let cx = Complex::new(&m);
        let c = random_cochain(&cx, k, w, seed, 8);
        prop_assert!(ce_differential(&ce_differential(&c, &m), &m).is_zero());
    }

    #[test]
    fn cohomology_is_basis_independent(seed in any::<u64>()) {
        let sp = build_sp(2).unwrap();
        let mut perm: Vec<usize> = (0..sp.dim()).collect();
        perm.shuffle(&mut random::rng(seed));
        let alg = Arc::new(sp.algebra.permuted(&perm));
        let adj = LieModule::adjoint(alg.clone());
        let triv = unit_trivial(alg);
        let adj0 = LieModule::adjoint(sp.algebra.clone());
        let triv0 = unit_trivial(sp.algebra.clone());
        for k in 0..=2 {
            prop_assert_eq!(cohomology_dim(&adj, k, 0).unwrap(), cohomology_dim(&adj0, k, 0).unwrap());
            prop_assert_eq!(cohomology_dim(&triv, k, 0).unwrap(), cohomology_dim(&triv0, k, 0).unwrap());
        }
    }
}

#[test]
fn zero_cochain_differential_is_the_action() {
    let sp = build_sp(1).unwrap();
    let m = LieModule::adjoint(sp.algebra.clone());
    let mut c = Cochain::new(0, 0);
    let v = SparseVec::unit(1);
    c.set(&[], v.clone());
    let dc = ce_differential(&c, &m);
    for a in 0..3 {
        assert_eq!(dc.get(&[a]), m.act(a, &v));
    }
}

#[test]
fn invariants_of_h_with_trivial_coefficients() {
    let h = build_h(1, 4).unwrap();
    let m = unit_trivial(h.algebra.clone());
    assert_eq!(cohomology_dim(&m, 0, 0).unwrap(), 1);
}

#[test]
fn one_dimensional_abelian_algebra() {
    let alg = Arc::new(GradedLieAlgebra::abelian("k", vec![BasisElement::new("e", 0)], 0));
    let m = unit_trivial(alg);
    assert_eq!(cohomology_dim(&m, 0, 0).unwrap(), 1);
    assert_eq!(cohomology_dim(&m, 1, 0).unwrap(), 1);
    assert_eq!(cohomology_dim(&m, 2, 0).unwrap(), 0);
}

#[test]
fn sp2_cohomology_matches_whitehead() {
    let sp = build_sp(1).unwrap();
    let k = unit_trivial(sp.algebra.clone());
    let ad = LieModule::adjoint(sp.algebra.clone());
    assert_eq!(cohomology_dim(&k, 0, 0).unwrap(), 1);
    assert_eq!(cohomology_dim(&k, 1, 0).unwrap(), 0);
    assert_eq!(cohomology_dim(&k, 2, 0).unwrap(), 0);
    assert_eq!(cohomology_dim(&k, 3, 0).unwrap(), 1);
    for k_deg in 0..=3 {
        assert_eq!(cohomology_dim(&ad, k_deg, 0).unwrap(), 0, "H^{k_deg}(sp(2), ad)");
    }
}

#[test]
fn sp4_second_cohomology_vanishes() {
    let sp = build_sp(2).unwrap();
    assert_eq!(cohomology_dim(&unit_trivial(sp.algebra.clone()), 2, 0).unwrap(), 0);
}

#[test]
fn truncated_module_blocks_are_refused() {
    let h = build_h(1, 3).unwrap();
    let m = LieModule::adjoint(h.algebra.clone());
    assert!(matches!(cohomology_dim(&m, 1, 0), Err(CohomologyError::IncompleteBlock { .. })));
}

#[test]
fn zero_is_a_coboundary() {
    let sp = build_sp(1).unwrap();
    let m = unit_trivial(sp.algebra.clone());
    let b = is_coboundary(&Cochain::new(2, 0), &m).unwrap().unwrap();
    assert!(ce_differential(&b, &m).is_zero());
}

#[test]
fn non_cocycle_is_rejected() {
    let sp = build_sp(1).unwrap();
    let m = LieModule::adjoint(sp.algebra.clone());
    let mut c = Cochain::new(1, 0);
    c.set(&[0], SparseVec::unit(0));
    if check_cocycle(&c, &m).is_err() {
        assert!(matches!(is_coboundary(&c, &m), Err(CohomologyError::NotACocycle { .. })));
    }
}

#[test]
fn coboundaries_are_recognised() {
    let h = build_h(1, 5).unwrap();
    let m = LieModule::adjoint(h.algebra.clone());
    let cx = Complex::new(&m);
    for seed in 0..4 {
        let b = random_cochain(&cx, 1, 0, seed, 6);
        let c = cx.differential(&b);
        let b2 = cx.primitive(&c).unwrap().expect("a coboundary has a primitive");
        assert_eq!(cx.differential(&b2), c);
    }
}

#[test]
fn symplectic_class_is_nontrivial() {
    for (d, n) in [(1, 4), (2, 3)] {
        let o = omega_class(d, n).unwrap();
        let checks = omega_checks(&o);
        assert!(checks.all_passed(), "{:?}", checks.failures().collect::<Vec<_>>());
        assert!(is_coboundary(&o.class.representative, &o.module).unwrap().is_none());
    }
}

#[test]
fn tower_obstruction_low_orders() {
    for (p, n, seed) in [(0, 4, 1), (1, 4, 7)] {
        let t = tower_obstruction(1, p, n).unwrap();
        let checks = t.checks(seed);
        assert!(checks.all_passed(), "p={p}: {:?}", checks.failures().collect::<Vec<_>>());
    }
}

#[test]
fn central_row_does_not_split_on_all_of_der_d() {
    // restricted to sp(2d) the row cocycle is a coboundary (the Levi split);
    // on the whole truncated (Der D)_q it is not: mod h it is the class of
    // the symplectic form
    let tower = build_g_tower(1, 1, 4).unwrap();
    for (q, row) in tower.rows.iter().enumerate() {
        let c = extension_cocycle(row).unwrap();
        let m = LieModule::from_extension("k[h]", row).unwrap();
        assert!(m.is_trivial(), "the centre acts trivially");
        check_cocycle(&c, &m).unwrap();
        assert!(is_coboundary(&c, &m).unwrap().is_none(), "row {q} splits");
    }
}
