//! Splittings: the Levi section over `sp(2d)` of the central extension, and
//! the semidirect decomposition `(Der D)_1 = H ⋊ (Der D)_0` from the
//! `iota`-split model of `D_1`.

use rayon::prelude::*;
use serde_json::json;

use super::build::derd_from_g;
use super::tower::cent_row;
use super::{
    build_g, build_h, build_sp, extension_cocycle, scalars, ExtensionData, LieError, LieMap, LinearMap,
    MonomialAlgebra,
};
use crate::check::{Check, CheckList};
use crate::cohomology::{Cochain, Complex, LieModule};
use crate::linalg::SparseVec;
use crate::rational::{self, rat};
use crate::series::{Monomial, TruncatedPoly};
use crate::weyl::{d1_bracket, d1_product, sym_lift, D1Element, TruncationSpec, WeylElement};

/// A bracket-preserving section `sp(2d) -> G_p` of the central extension.
#[derive(Debug, Clone)]
pub struct LeviSplit {
    pub sp: MonomialAlgebra,
    pub g: MonomialAlgebra,
    pub derd: MonomialAlgebra,
    pub row: ExtensionData,
    /// `sp(2d) -> (Der D)_p`.
    pub inclusion: LieMap,
    /// The row's cocycle (for the monomial section) restricted to `sp(2d)`.
    pub cocycle: Cochain,
    /// `b` with `db = cocycle`.
    pub primitive: Cochain,
    /// `xi |-> s(xi) - b(xi)`.
    pub section: LieMap,
}

/// Solves the coboundary equation for the restricted cocycle on the
/// (closed) algebra `sp(2d)` and corrects the monomial section by the
/// primitive. A missing primitive or a non-bracket-preserving result is a
/// hard error.
pub fn levi_restriction_split(d: usize, p: u32, n: u32) -> Result<LeviSplit, LieError> {
    let g = build_g(d, p, n)?;
    let derd = derd_from_g(&g, p)?;
    let center = scalars(d, p, n);
    let row = cent_row(&center, &g, &derd, p)?;
    let sp = build_sp(d)?;
    let inclusion = sp.monomial_map(format!("sp({}) -> (Der D)_{p}", 2 * d), &derd, |m| Some(m.clone()))?;
    let c = inclusion.verify();
    if !c.passed() {
        return Err(LieError::VerificationFailed(format!("{}: {}", c.name, c.witness)));
    }
    let cocycle = extension_cocycle(&row)?.pullback(inclusion.matrix());
    let module = LieModule::trivial(center.algebra.name(), sp.algebra.clone(), center.algebra.basis().to_vec());
    let primitive = Complex::new(&module)
        .primitive(&cocycle)
        .map_err(|e| LieError::VerificationFailed(e.to_string()))?
        .ok_or_else(|| LieError::VerificationFailed("the restricted cocycle has no primitive".into()))?;
    let cols = (0..sp.dim())
        .map(|a| {
            let s = row.splitting.apply(inclusion.matrix().column(a));
            s.sub(&row.inject.apply(&primitive.get(&[a])))
        })
        .collect();
    let matrix = LinearMap::new(sp.dim(), g.dim(), cols)?;
    let section = LieMap::new_verified(format!("sp({}) -> G_{p}", 2 * d), sp.algebra.clone(), g.algebra.clone(), matrix)?;
    Ok(LeviSplit { sp, g, derd, row, inclusion, cocycle, primitive, section })
}

impl LeviSplit {
    pub fn checks(&self) -> CheckList {
        let mut out = CheckList::new();
        let module = LieModule::trivial("k[h]", self.sp.algebra.clone(), self.row.sub.basis().to_vec());
        let cx = Complex::new(&module);
        out.push(Check::from_bool(
            "restricted cocycle is a cocycle",
            cx.cocycle_defect(&self.cocycle).is_none(),
            serde_json::Value::Null,
        ));
        out.push(Check::from_bool(
            "d(primitive) equals the restricted cocycle",
            cx.differential(&self.primitive) == self.cocycle,
            json!({ "primitive": self.primitive.to_json(&self.sp.algebra, &module.labels()) }),
        ));
        out.push(self.section.verify());
        let ps = self.row.project.matrix().compose(self.section.matrix()).expect("shapes agree");
        let bad = ps.first_difference(self.inclusion.matrix());
        out.push(Check::from_bool(
            "projection ∘ section = inclusion of sp",
            bad.is_none(),
            bad.map(|i| json!({ "element": self.sp.algebra.label(i) })).unwrap_or_default(),
        ));
        if self.sp.monomials[0].dim() == 1 {
            out.push(self.standard_table_check());
        }
        out
    }

    /// For `d = 1`: `e = x^2/2`, `f = -y^2/2`, `H = -xy` satisfy
    /// `[H, e] = 2e`, `[H, f] = -2f`, `[e, f] = H` in the section's image.
    pub fn standard_table_check(&self) -> Check {
        let name = "section image satisfies the standard sp(2) table";
        let vec_of = |exps: [u16; 2], c: rational::Rational| -> SparseVec {
            let m = Monomial::from_exponents(&exps, 0);
            let mut v = SparseVec::new();
            v.add_at(self.sp.index_of(&m).expect("quadratic in sp(2)"), &c);
            v
        };
        let e = vec_of([2, 0], rat(1, 2));
        let f = vec_of([0, 2], rat(-1, 2));
        let hh = vec_of([1, 1], rat(-1, 1));
        let (se, sf, sh) = (self.section.apply(&e), self.section.apply(&f), self.section.apply(&hh));
        let g = &self.g.algebra;
        let relations = [
            ("[H,e] = 2e", g.bracket_vec(&sh, &se), se.scaled(&rational::int(2))),
            ("[H,f] = -2f", g.bracket_vec(&sh, &sf), sf.scaled(&rational::int(-2))),
            ("[e,f] = H", g.bracket_vec(&se, &sf), sh.clone()),
        ];
        for (rel, lhs, rhs) in relations {
            if lhs != rhs {
                return Check::fail(name, json!({ "relation": rel, "lhs": lhs.wire_pairs(), "rhs": rhs.wire_pairs() }));
            }
        }
        Check::pass(name)
    }
}

/// The section `(Der D)_0 -> (Der D)_1`, `f |-> sigma(f)` (the `iota`-invariant
/// lift, scalars dropped).
#[derive(Debug, Clone)]
pub struct D1Split {
    pub d: usize,
    pub n: u32,
    pub derd0: MonomialAlgebra,
    pub derd1: MonomialAlgebra,
    pub h: MonomialAlgebra,
    pub section: LieMap,
}

/// Builds the section and verifies that it preserves brackets (hard error
/// otherwise).
pub fn d1_semidirect_split(d: usize, n: u32) -> Result<D1Split, LieError> {
    let derd0 = derd_from_g(&build_g(d, 0, n)?, 0)?;
    let derd1 = derd_from_g(&build_g(d, 1, n)?, 1)?;
    let h = build_h(d, n)?;
    let spec = TruncationSpec::new(d, 1, n + 2);
    let mut cols = Vec::with_capacity(derd0.dim());
    for m in &derd0.monomials {
        let f = TruncatedPoly::monomial(d, n + 2, m.clone(), rational::one());
        let lift = sym_lift(spec, &f);
        let mut col = SparseVec::new();
        for (mm, c) in lift.terms() {
            if mm.is_pure_h() {
                continue;
            }
            let k = derd1
                .index_of(mm)
                .ok_or_else(|| LieError::NotInImage(format!("{mm} is not in (Der D)_1")))?;
            col.add_at(k, c);
        }
        cols.push(col);
    }
    let matrix = LinearMap::new(derd0.dim(), derd1.dim(), cols)?;
    let section = LieMap::new_verified("(Der D)_0 -> (Der D)_1", derd0.algebra.clone(), derd1.algebra.clone(), matrix)?;
    Ok(D1Split { d, n, derd0, derd1, h, section })
}

/// Basis of the split model `A ⊕ hA` up to weight `w` (odd part `h m` has
/// weight `deg m + 2`).
pub(crate) fn d1_basis(d: usize, w: u32, cutoff: u32) -> Vec<D1Element> {
    let mut out = Vec::new();
    for deg in 0..=w {
        for m in Monomial::all_of_degree(d, deg) {
            let even = TruncatedPoly::monomial(d, cutoff, m, rational::one());
            out.push(D1Element::from_even(even).expect("cutoff >= 2"));
        }
    }
    for deg in 0..=w.saturating_sub(2) {
        if deg + 2 > w {
            break;
        }
        for m in Monomial::all_of_degree(d, deg) {
            let odd = TruncatedPoly::monomial(d, cutoff - 2, m, rational::one());
            out.push(D1Element::new(TruncatedPoly::zero(d, cutoff), odd).expect("valid split element"));
        }
    }
    out
}

impl D1Split {
    /// The derivation of the split model induced by `section(e_i)`:
    /// `v |-> (u v - v u)/h mod h^2`, at split cutoff `m`.
    fn derivation(&self, u: &WeylElement, v: &D1Element, m: u32) -> D1Element {
        let work = u.spec();
        let vw = v.to_weyl().retruncate(work);
        let c = u.commutator(&vw).expect("same spec").divide_by_h().expect("commutators are divisible by h");
        let c1 = c.retruncate(TruncationSpec::new(self.d, 1, m));
        D1Element::from_weyl(&c1).expect("p = 1")
    }

    fn section_element(&self, i: usize, work: TruncationSpec) -> WeylElement {
        let poly = self.derd1.poly(self.section.matrix().column(i), self.d, work.n);
        WeylElement::lift(work, &poly).expect("dimensions agree")
    }

    /// Bracket preservation, the section property, preservation of the split
    /// product and bracket by every section element on all basis pairs of
    /// weight `<= product_weight`, and agreement of the action on the kernel
    /// `hA/k` with the adjoint action of `H`.
    pub fn checks(&self, product_weight: u32) -> CheckList {
        let mut out = CheckList::new();
        out.push(self.section.verify());

        let proj = self
            .derd1
            .monomial_map("(Der D)_1 -> (Der D)_0", &self.derd0, |m| (m.hexp() == 0).then(|| m.clone()))
            .expect("projection");
        out.push(proj.verify());
        let ps = proj.matrix().compose(self.section.matrix()).expect("shapes agree");
        let bad = (0..self.derd0.dim()).find(|&i| ps.column(i) != &SparseVec::unit(i));
        out.push(Check::from_bool(
            "projection ∘ section = id",
            bad.is_none(),
            bad.map(|i| json!({ "element": self.derd0.algebra.label(i) })).unwrap_or_default(),
        ));

        out.push(self.product_check(product_weight));
        out.push(self.kernel_action_check());
        out
    }

    /// Every section element acts on `D_1 = A ⊕ hA` by a derivation of both
    /// the split product and the split bracket.
    pub fn product_check(&self, product_weight: u32) -> Check {
        let name = format!("section acts by derivations of the split product and bracket (weight <= {product_weight})");
        let m = 2 * product_weight + self.n;
        let work = TruncationSpec::new(self.d, 2, m + 2);
        let basis = d1_basis(self.d, product_weight, m);
        let jobs: Vec<(usize, usize)> =
            (0..self.derd0.dim()).flat_map(|i| (0..basis.len()).map(move |a| (i, a))).collect();
        let failure = jobs.par_iter().find_map_any(|&(i, a)| {
            let u = self.section_element(i, work);
            let da = self.derivation(&u, &basis[a], m);
            for (b, eb) in basis.iter().enumerate() {
                let db = self.derivation(&u, eb, m);
                let prod = d1_product(&basis[a], eb).expect("same cutoff");
                let lhs = self.derivation(&u, &prod, m);
                let rhs = d1_product(&da, eb).and_then(|x| x.add(&d1_product(&basis[a], &db)?)).expect("same cutoff");
                if lhs != rhs {
                    return Some(json!({ "kind": "product", "element": self.derd0.algebra.label(i), "pair": [a, b] }));
                }
                let br = d1_bracket(&basis[a], eb).expect("same cutoff");
                let lhs = self.derivation(&u, &br, m);
                let rhs = d1_bracket(&da, eb).and_then(|x| x.add(&d1_bracket(&basis[a], &db)?)).expect("same cutoff");
                if lhs != rhs {
                    return Some(json!({ "kind": "bracket", "element": self.derd0.algebra.label(i), "pair": [a, b] }));
                }
            }
            None
        });
        match failure {
            None => Check::pass(name).with_witness(json!({
                "derivations": self.derd0.dim(),
                "basis": basis.len(),
                "pairs": basis.len() * basis.len(),
            })),
            Some(w) => Check::fail(name, w),
        }
    }

    /// `[section(g), h f] = h {g, f}` in `(Der D)_1` for `f` nonconstant.
    pub fn kernel_action_check(&self) -> Check {
        let name = "action on the kernel H is the adjoint action";
        let alg1 = &self.derd1.algebra;
        let kernel: Vec<usize> = self.derd1.indices_where(|m| m.hexp() == 1);
        for g in 0..self.derd0.dim() {
            let sg = self.section.matrix().column(g);
            for &k in &kernel {
                let w = self.derd0.algebra.weight(g) + alg1.weight(k);
                if w > alg1.cutoff() {
                    continue;
                }
                let lhs = alg1.bracket_vec(sg, &SparseVec::unit(k));
                let f = self.derd1.monomials[k].without_h();
                let (Some(gi), Some(fi)) = (self.h.index_of(&self.derd0.monomials[g]), self.h.index_of(&f)) else {
                    return Check::fail(name, json!({ "missing": f.to_string() }));
                };
                let hb = self.h.algebra.bracket(gi, fi);
                let mut rhs = SparseVec::new();
                for (q, c) in hb.iter() {
                    let target = self.h.monomials[q].with_h(1);
                    match self.derd1.index_of(&target) {
                        Some(t) => rhs.add_at(t, c),
                        None => return Check::fail(name, json!({ "missing": target.to_string() })),
                    }
                }
                if lhs != rhs {
                    return Check::fail(
                        name,
                        json!({
                            "pair": [self.derd0.algebra.label(g), alg1.label(k)],
                            "lhs": lhs.wire_pairs(),
                            "rhs": rhs.wire_pairs(),
                        }),
                    );
                }
            }
        }
        Check::pass(name)
    }
}
