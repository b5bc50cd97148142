use dqkit_core::cohomology::{check_cocycle, Cochain, LieModule};
use dqkit_core::lie::{
    build_a, build_derd, build_derd_tower, build_g, build_g_tower, build_h, build_hamiltonian_map, build_sp,
    build_w, build_w0, commu_diagram_check, d1_semidirect_split, extension_cocycle, levi_restriction_split,
    DiagramFault, ExtensionData, GradedLieAlgebra, LinearMap,
};
use dqkit_core::rational::{int, one};
use dqkit_core::series::{Monomial, PoissonBivector, TruncatedPoly};
use dqkit_core::weyl::{TruncationSpec, WeylElement};
use dqkit_core::SparseVec;

fn mono(exps: &[u16], h: u16) -> Monomial {
    Monomial::from_exponents(exps, h)
}

fn assert_jacobi(alg: &GradedLieAlgebra) {
    let r = alg.check_jacobi();
    assert!(r.passed(), "{}: {:?}", alg.name(), r.failures);
    assert!(r.checked > 0 || alg.dim() < 3);
}

#[test]
fn euler_fields_commute() {
    let w = build_w(1, 4).unwrap();
    let xdx = w.index_of(&mono(&[1, 0], 0), 0).unwrap();
    let ydy = w.index_of(&mono(&[0, 1], 0), 1).unwrap();
    assert!(w.algebra.bracket(xdx, ydy).is_zero());
    // [x d/dx, x^2 d/dy] = 2 x^2 d/dy
    let x2dy = w.index_of(&mono(&[2, 0], 0), 1).unwrap();
    assert_eq!(w.algebra.bracket(xdx, x2dy), SparseVec::unit(x2dy).scaled(&int(2)));
}

#[test]
fn hamiltonian_bracket_of_squares() {
    let h = build_h(1, 4).unwrap();
    let x2 = h.index_of(&mono(&[2, 0], 0)).unwrap();
    let y2 = h.index_of(&mono(&[0, 2], 0)).unwrap();
    let xy = h.index_of(&mono(&[1, 1], 0)).unwrap();
    assert_eq!(h.algebra.bracket(x2, y2), SparseVec::unit(xy).scaled(&int(4)));
    // cross-check with the bivector bracket
    let th = PoissonBivector::standard(1, 6);
    let f = TruncatedPoly::monomial(1, 6, mono(&[2, 0], 0), one());
    let g = TruncatedPoly::monomial(1, 6, mono(&[0, 2], 0), one());
    assert_eq!(h.vector(&th.bracket(&f, &g).unwrap()).unwrap(), h.algebra.bracket(x2, y2));
}

#[test]
fn poisson_structure_constants_match_bivector_exhaustively() {
    let a = build_a(2, 3).unwrap();
    let th = PoissonBivector::standard(2, 5);
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            if !a.algebra.in_cutoff(i, j) {
                continue;
            }
            let f = TruncatedPoly::monomial(2, 5, a.monomials[i].clone(), one());
            let g = TruncatedPoly::monomial(2, 5, a.monomials[j].clone(), one());
            assert_eq!(a.vector(&th.bracket(&f, &g).unwrap()).unwrap(), a.algebra.bracket(i, j));
        }
    }
}

#[test]
fn vector_field_dimensions_by_weight() {
    for d in 1..=2 {
        let w = build_w(d, 4).unwrap();
        for (weight, dim) in w.algebra.dims_by_weight() {
            let count = Monomial::all_of_degree(d, (weight + 1) as u32).len();
            assert_eq!(dim, 2 * d * count, "d={d} weight={weight}");
        }
        let w0 = build_w0(d, 4).unwrap();
        assert!(w0.algebra.weights().iter().all(|&x| x >= 0));
    }
}

#[test]
fn built_algebras_satisfy_jacobi() {
    assert_jacobi(&build_w(1, 5).unwrap().algebra);
    assert_jacobi(&build_w0(2, 3).unwrap().algebra);
    assert_jacobi(&build_h(1, 6).unwrap().algebra);
    assert_jacobi(&build_a(2, 4).unwrap().algebra);
    assert_jacobi(&build_sp(2).unwrap().algebra);
    for p in 0..=2 {
        assert_jacobi(&build_g(1, p, 6).unwrap().algebra);
        assert_jacobi(&build_derd(1, p, 6).unwrap().algebra);
    }
    assert_jacobi(&build_g(2, 1, 4).unwrap().algebra);
}

#[test]
fn hamiltonian_fields_embed_h_into_w() {
    for d in 1..=2 {
        let n = 4;
        let h = build_h(d, n).unwrap();
        let w = build_w(d, n).unwrap();
        let map = build_hamiltonian_map(&h, &w).unwrap();
        assert!(map.verify().passed());
        assert_eq!(map.matrix().rank(), h.dim(), "Hamiltonian map is injective");
    }
}

#[test]
fn sp2_is_closed_and_three_dimensional() {
    let sp = build_sp(1).unwrap();
    assert_eq!(sp.dim(), 3);
    assert!(sp.algebra.is_closed());
    assert_eq!(build_sp(2).unwrap().dim(), 10);
}

#[test]
fn derd0_is_isomorphic_to_h() {
    let n = 6;
    let d0 = build_derd(1, 0, n).unwrap();
    let h = build_h(1, n).unwrap();
    let fwd = d0.monomial_map("(Der D)_0 -> H", &h, |m| Some(m.clone())).unwrap();
    let back = h.monomial_map("H -> (Der D)_0", &d0, |m| Some(m.clone())).unwrap();
    assert!(fwd.verify().passed());
    assert!(back.verify().passed());
    assert_eq!(fwd.matrix().rank(), d0.dim());
    assert_eq!(d0.dim(), h.dim());
}

#[test]
fn g_bracket_of_x_and_y_is_the_unit_scalar() {
    let g = build_g(1, 1, 4).unwrap();
    let x = g.index_of(&mono(&[1, 0], 0)).unwrap();
    let y = g.index_of(&mono(&[0, 1], 0)).unwrap();
    let unit = g.index_of(&Monomial::one(1)).unwrap();
    assert_eq!(g.algebra.bracket(x, y), SparseVec::unit(unit));
    // the same through the Weyl algebra: x*y - y*x = h, so ad(h^-1 x) sends y to 1
    let spec = TruncationSpec::new(1, 2, 6);
    let c = WeylElement::x(spec, 0).commutator(&WeylElement::y(spec, 0)).unwrap();
    assert_eq!(c, WeylElement::h(spec));
    // [h^-1 x^2, h^-1 y^2] = 4 h^-1 xy - 2
    let x2 = g.index_of(&mono(&[2, 0], 0)).unwrap();
    let y2 = g.index_of(&mono(&[0, 2], 0)).unwrap();
    let xy = g.index_of(&mono(&[1, 1], 0)).unwrap();
    let hh = g.index_of(&Monomial::h_power(1, 1)).unwrap();
    let expected = SparseVec::from_pairs([(xy, int(4)), (hh, int(-2))]);
    assert_eq!(g.algebra.bracket(x2, y2), expected);
}

#[test]
fn tower_rows_are_central_extensions() {
    let t = build_g_tower(1, 2, 6).unwrap();
    for (q, row) in t.rows.iter().enumerate() {
        let checks = row.verify(&format!("row {q}"));
        assert!(checks.all_passed(), "{:?}", checks.failures().collect::<Vec<_>>());
        assert!(row.central_check("row").passed());
        let c = extension_cocycle(row).unwrap();
        let module = LieModule::from_extension("center", row).unwrap();
        assert!(module.is_trivial());
        check_cocycle(&c, &module).unwrap();
    }
    for m in t.g_quotients.iter().chain(&t.derd_quotients) {
        assert!(m.verify().passed(), "{}", m.name());
    }
    let (levels, maps) = build_derd_tower(1, 2, 6).unwrap();
    assert_eq!(levels.len(), 3);
    assert_eq!(maps.len(), 2);
}

#[test]
fn derd_kernel_matches_h_weight_by_weight() {
    let (levels, maps) = build_derd_tower(1, 2, 6).unwrap();
    let h = build_h(1, 6).unwrap();
    let f = &maps[1]; // (Der D)_2 -> (Der D)_1
    for w in levels[2].algebra.weights() {
        let ker = levels[2].algebra.indices_of_weight(w).len() - f.rank_at_weight(w);
        // kernel elements h^2 f have weight deg f + 2 = (weight of f in H) + 4
        let expected = h.algebra.indices_of_weight(w - 4).len();
        assert_eq!(ker, expected, "weight {w}");
    }
}

#[test]
fn diagram_checks_pass() {
    for (d, p, n) in [(1, 0, 6), (1, 1, 6), (1, 2, 6), (1, 3, 8), (2, 1, 4), (2, 2, 4)] {
        let checks = commu_diagram_check(d, p, n, DiagramFault::None).unwrap();
        let bad: Vec<_> = checks.failures().collect();
        assert!(bad.is_empty(), "d={d} p={p} N={n}: {bad:?}");
    }
}

#[test]
fn corrupted_structure_constant_is_reported() {
    let checks = commu_diagram_check(1, 1, 6, DiagramFault::StructureConstant).unwrap();
    let names: Vec<&str> = checks.failures().map(|c| c.name.as_str()).collect();
    assert!(names.iter().any(|n| n.contains("G_2 -> G_1 is a Lie map")), "{names:?}");
}

#[test]
fn corrupted_map_entry_breaks_the_bottom_right_square() {
    let checks = commu_diagram_check(1, 1, 6, DiagramFault::MapEntry).unwrap();
    let failed: Vec<_> = checks.failures().collect();
    assert!(failed.iter().any(|c| c.name.starts_with("square bottom-right")), "{failed:?}");
    let sq = failed.iter().find(|c| c.name.starts_with("square bottom-right")).unwrap();
    assert!(sq.witness.get("weight").is_some());
}

#[test]
fn levi_section_is_bracket_preserving() {
    for (d, p, n) in [(1, 1, 4), (1, 2, 6), (2, 1, 2)] {
        let split = levi_restriction_split(d, p, n).unwrap();
        let checks = split.checks();
        assert!(checks.all_passed(), "{:?}", checks.failures().collect::<Vec<_>>());
    }
}

#[test]
fn levi_cocycle_is_nonzero_at_positive_order() {
    // [h^-1 x^2, h^-1 y^2] has the scalar part -2, so the restricted cocycle
    // of the monomial section is nonzero once h is visible.
    let split = levi_restriction_split(1, 1, 4).unwrap();
    assert!(!split.cocycle.is_zero());
    assert!(!split.primitive.is_zero());
    let split0 = levi_restriction_split(1, 0, 4).unwrap();
    assert!(split0.cocycle.is_zero());
}

#[test]
fn d1_section_preserves_brackets_and_products() {
    let split = d1_semidirect_split(1, 4).unwrap();
    let checks = split.checks(3);
    assert!(checks.all_passed(), "{:?}", checks.failures().collect::<Vec<_>>());
}

#[test]
fn extension_cocycle_vanishes_for_a_bracket_preserving_section() {
    // 0 -> k -> A -> H -> 0 over sp(2): quadratic Hamiltonians bracket without
    // constant terms, so the monomial section is a Lie map there.
    let a = build_a(1, 4).unwrap();
    let sp = build_sp(1).unwrap();
    let sub = build_a(1, 4).unwrap().subalgebra("k", |m| m.is_one(), true).unwrap();
    // k ⊕ sp inside A
    let total = a.subalgebra("k+sp", |m| m.is_one() || m.degree() == 2, true).unwrap();
    let inject = sub.monomial_map("k -> k+sp", &total, |m| Some(m.clone())).unwrap();
    let project = total.monomial_map("k+sp -> sp", &sp, |m| Some(m.clone())).unwrap();
    let cols = sp.monomials.iter().map(|m| SparseVec::unit(total.index_of(m).unwrap())).collect();
    let splitting = LinearMap::new(sp.dim(), total.dim(), cols).unwrap();
    let e = ExtensionData::new(inject, project, splitting).unwrap();
    assert!(e.verify("k -> k+sp -> sp").all_passed());
    assert!(extension_cocycle(&e).unwrap().is_zero());
}

#[test]
fn cochain_pullback_along_identity_is_identity() {
    let id = LinearMap::new(3, 3, (0..3).map(SparseVec::unit).collect()).unwrap();
    let mut c = Cochain::new(2, 0);
    c.set(&[0, 2], SparseVec::unit(0));
    c.set(&[1, 2], SparseVec::unit(0).scaled(&int(3)));
    assert_eq!(c.pullback(&id), c);
}

#[test]
fn algebra_json_lists_basis_and_brackets() {
    let sp = build_sp(1).unwrap();
    let j = sp.algebra.to_json();
    assert_eq!(j["schema"], 1);
    assert_eq!(j["basis"].as_array().unwrap().len(), 3);
    assert_eq!(j["brackets"].as_array().unwrap().len(), 3);
}
