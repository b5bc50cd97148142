use std::collections::BTreeMap;

use rand::Rng;
use serde_json::json;

use super::{check_cocycle, Cochain, CohomologyError, Complex, LieModule};
use crate::check::{Check, CheckList};
use crate::lie::{
    build_a, build_derd, build_g, build_h, build_sp, extension_cocycle, scalars, ExtensionData, LieMap, LinearMap,
    MonomialAlgebra,
};
use crate::linalg::SparseVec;
use crate::random;
use crate::series::Monomial;

/// A cohomology class given by a representative cocycle.
#[derive(Debug, Clone)]
pub struct CohomologyClass {
    pub degree: usize,
    pub weight: i32,
    pub representative: Cochain,
}

fn identity_section(from: &MonomialAlgebra, to: &MonomialAlgebra) -> Result<LinearMap, CohomologyError> {
    let cols = from
        .monomials
        .iter()
        .map(|m| {
            to.index_of(m).map(SparseVec::unit).ok_or_else(|| {
                CohomologyError::BadModule(format!("{m} has no counterpart in {}", to.algebra.name()))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LinearMap::new(from.dim(), to.dim(), cols)?)
}

/// The class of the symplectic form: the cocycle of `0 -> k -> A -> H -> 0`
/// for the section sending a Hamiltonian monomial to itself.
#[derive(Debug, Clone)]
pub struct OmegaClass {
    pub h: MonomialAlgebra,
    pub a: MonomialAlgebra,
    pub extension: ExtensionData,
    pub module: LieModule,
    pub class: CohomologyClass,
}

pub fn omega_class(d: usize, n: u32) -> Result<OmegaClass, CohomologyError> {
    let a = build_a(d, n)?;
    let h = build_h(d, n)?;
    let k = scalars(d, 0, n);
    let inject = k.monomial_map("k -> A", &a, |m| Some(m.clone()))?;
    let project = a.monomial_map("A -> H", &h, |m| Some(m.clone()))?;
    let splitting = identity_section(&h, &a)?;
    let extension = ExtensionData::new(inject, project, splitting)?;
    let module = LieModule::from_extension("k", &extension)?;
    let representative = extension_cocycle(&extension)?;
    Ok(OmegaClass { h, a, extension, module, class: CohomologyClass { degree: 2, weight: 0, representative } })
}

/// Cocycle, normalization, support and non-triviality of the class.
pub fn omega_checks(o: &OmegaClass) -> CheckList {
    let mut out = o.extension.verify("0 -> k -> A -> H -> 0");
    let c = &o.class.representative;
    out.push(match check_cocycle(c, &o.module) {
        Ok(()) => Check::pass("omega is a cocycle"),
        Err(e) => Check::fail("omega is a cocycle", json!(e.to_string())),
    });
    let d = o.h.monomials[0].dim();
    let mut bad = None;
    for i in 0..d {
        let xi = o.h.index_of(&Monomial::coordinate(d, i)).expect("x_i in H");
        let yi = o.h.index_of(&Monomial::coordinate(d, d + i)).expect("y_i in H");
        if c.get(&[xi, yi]) != SparseVec::unit(0) {
            bad = Some(i);
        }
    }
    out.push(Check::from_bool(
        "omega(x_i, y_i) = 1",
        bad.is_none(),
        bad.map(|i| json!({ "index": i + 1 })).unwrap_or_default(),
    ));
    let off = c.values().find(|(t, _)| t.iter().any(|&i| o.h.algebra.weight(i) != -1));
    out.push(Check::from_bool(
        "omega is supported on pairs of linear Hamiltonians",
        off.is_none(),
        off.map(|(t, _)| json!(t.iter().map(|&i| o.h.algebra.label(i)).collect::<Vec<_>>())).unwrap_or_default(),
    ));
    out.push(match Complex::new(&o.module).primitive(c) {
        Ok(None) => Check::pass("omega is not a coboundary"),
        Ok(Some(b)) => Check::fail(
            "omega is not a coboundary",
            json!({ "primitive": b.to_json(&o.h.algebra, &o.module.labels()) }),
        ),
        Err(e) => Check::fail("omega is not a coboundary", json!(e.to_string())),
    });
    out
}

/// The extension `0 -> V -> G_{p+1} -> (Der D)_p -> 0` with
/// `V = (k[h]/h^{p+2} ⊕ A h^p) / k h^p`, realized inside `G_{p+1}` as the span
/// of the scalars `h^c` (`c <= p+1`) and the `h^{p+1} f` (`f` nonconstant),
/// together with its cocycle for the monomial section.
#[derive(Debug, Clone)]
pub struct TowerObstruction {
    pub d: usize,
    pub p: u32,
    pub n: u32,
    pub derd: MonomialAlgebra,
    pub g: MonomialAlgebra,
    pub v: MonomialAlgebra,
    pub extension: ExtensionData,
    pub module: LieModule,
    pub class: CohomologyClass,
}

pub fn tower_obstruction(d: usize, p: u32, n: u32) -> Result<TowerObstruction, CohomologyError> {
    let g = build_g(d, p + 1, n)?;
    let derd = build_derd(d, p, n)?;
    let top = (p + 1) as u16;
    let v = g.subalgebra("V", |m| m.is_pure_h() || m.hexp() == top, true)?;
    if !v.algebra.is_abelian() {
        return Err(CohomologyError::BadModule("V is not abelian".into()));
    }
    let inject = v.monomial_map("V -> G_{p+1}", &g, |m| Some(m.clone()))?;
    let project = g.monomial_map("G_{p+1} -> (Der D)_p", &derd, |m| Some(m.clone()))?;
    let splitting = identity_section(&derd, &g)?;
    let extension = ExtensionData::new(inject, project, splitting)?;
    let module = LieModule::from_extension("V", &extension)?;
    let representative = extension_cocycle(&extension)?;
    Ok(TowerObstruction {
        d,
        p,
        n,
        derd,
        g,
        v,
        extension,
        module,
        class: CohomologyClass { degree: 2, weight: 0, representative },
    })
}

impl TowerObstruction {
    /// Indices of `U = k[h]/h^{p+2}` inside `V`.
    pub fn u_indices(&self) -> Vec<usize> {
        self.v.indices_where(Monomial::is_pure_h)
    }

    /// The quotient module `W = V/U ≅ H` and the pushed-forward cocycle.
    pub fn w_pushforward(&self) -> Result<(LieModule, Cochain), CohomologyError> {
        let keep = self.v.indices_where(|m| !m.is_pure_h());
        let (w, pos) = self.module.quotient("W = V/U", &keep)?;
        let c = self.class.representative.map_value_indices(|k| pos.get(&k).copied());
        Ok((w, c))
    }

    /// `sp(2d) -> (Der D)_p`, the quadratic Hamiltonians.
    pub fn sp_inclusion(&self) -> Result<(MonomialAlgebra, LieMap), CohomologyError> {
        let sp = build_sp(self.d)?;
        let incl = sp.monomial_map("sp -> (Der D)_p", &self.derd, |m| Some(m.clone()))?;
        Ok((sp, incl))
    }

    /// The `U`-component of the cocycle restricted to `sp(2d)`, with the
    /// trivial `sp(2d)`-module `U`.
    pub fn u_on_sp(&self) -> Result<(MonomialAlgebra, LieModule, Cochain), CohomologyError> {
        let (sp, incl) = self.sp_inclusion()?;
        let u = self.u_indices();
        let pos: BTreeMap<usize, usize> = u.iter().enumerate().map(|(a, &i)| (i, a)).collect();
        let c = self.class.representative.pullback(incl.matrix()).map_value_indices(|k| pos.get(&k).copied());
        let basis = u.iter().map(|&i| self.v.algebra.basis()[i].clone()).collect();
        let module = LieModule::trivial("U", sp.algebra.clone(), basis);
        Ok((sp, module, c))
    }

    /// A seeded random weight-preserving linear map `(Der D)_p -> V`.
    pub fn random_shift(&self, seed: u64) -> LinearMap {
        let mut rng = random::rng(seed);
        let alg = &self.derd.algebra;
        let cols = (0..alg.dim())
            .map(|a| {
                let same: Vec<usize> = self.v.algebra.indices_of_weight(alg.weight(a));
                let mut col = SparseVec::new();
                for &k in &same {
                    if rng.gen_bool(0.5) {
                        col.add_at(k, &random::rational(&mut rng));
                    }
                }
                col
            })
            .collect();
        LinearMap::new(alg.dim(), self.v.dim(), cols).expect("shape")
    }

    /// The cocycle for the section `s + inject ∘ t`.
    pub fn resplit(&self, t: &LinearMap) -> Result<Cochain, CohomologyError> {
        let shifted = self.extension.inject.matrix().compose(t)?;
        let cols = (0..self.derd.dim())
            .map(|a| self.extension.splitting.column(a).add(shifted.column(a)))
            .collect();
        let s2 = LinearMap::new(self.derd.dim(), self.g.dim(), cols)?;
        let e2 = self.extension.with_splitting(s2)?;
        Ok(extension_cocycle(&e2)?)
    }

    /// All claims about the obstruction cocycle, with two seeded splittings
    /// derived from `seed` for the independence test.
    pub fn checks(&self, seed: u64) -> CheckList {
        let mut out = self.extension.verify("0 -> V -> G_{p+1} -> (Der D)_p -> 0");
        out.push(Check::from_bool("V is abelian", self.v.algebra.is_abelian(), serde_json::Value::Null));
        out.push(self.module.verify());
        let cx = Complex::new(&self.module);
        let c = &self.class.representative;
        out.push(cocycle_check("obstruction cocycle satisfies dc = 0", &cx, c));

        match self.w_pushforward() {
            Ok((w, cw)) => {
                out.push(w.verify());
                out.push(cocycle_check("pushforward to W = H is a cocycle", &Complex::new(&w), &cw));
            }
            Err(e) => out.push(Check::fail("pushforward to W = H is a cocycle", json!(e.to_string()))),
        }

        match self.u_on_sp() {
            Ok((sp, u, cu)) => {
                let ux = Complex::new(&u);
                out.push(cocycle_check("U-part on sp is a cocycle", &ux, &cu));
                out.push(match ux.primitive(&cu) {
                    Ok(Some(b)) => {
                        let ok = ux.differential(&b) == cu;
                        Check::from_bool(
                            "U-part on sp is a coboundary",
                            ok,
                            json!({ "primitive": b.to_json(&sp.algebra, &u.labels()) }),
                        )
                    }
                    Ok(None) => Check::fail("U-part on sp is a coboundary", json!("no primitive")),
                    Err(e) => Check::fail("U-part on sp is a coboundary", json!(e.to_string())),
                });
            }
            Err(e) => out.push(Check::fail("U-part on sp is a coboundary", json!(e.to_string()))),
        }

        out.push(self.splitting_independence(seed));
        out
    }

    /// Two distinct seeded splittings give cocycles differing by `d(t2 - t1)`,
    /// and the coboundary solver recovers a primitive for the difference.
    pub fn splitting_independence(&self, seed: u64) -> Check {
        let name = "changing the splitting changes the cocycle by a coboundary";
        let t1 = self.random_shift(seed);
        let mut t2 = self.random_shift(seed.wrapping_add(1));
        if t2 == t1 {
            t2 = self.random_shift(seed.wrapping_add(2));
        }
        let (c1, c2) = match (self.resplit(&t1), self.resplit(&t2)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => return Check::fail(name, json!(e.to_string())),
        };
        let cx = Complex::new(&self.module);
        let diff = c2.sub(&c1).filter(|t| cx.admissible(t, 0));
        let mut dt = Cochain::new(1, 0);
        let delta = t2.sub(&t1);
        for a in 0..delta.source_dim() {
            dt.add_at(&[a], delta.column(a));
        }
        let expected = cx.differential(&dt);
        if diff != expected {
            return Check::fail(name, json!({ "reason": "c2 - c1 != d(t2 - t1)" }));
        }
        match cx.primitive(&diff) {
            Ok(Some(b)) if cx.differential(&b) == diff => Check::pass(name).with_witness(json!({
                "seed": seed,
                "distinct_cocycles": c1 != c2,
                "difference_support": diff.support_len(),
            })),
            Ok(_) => Check::fail(name, json!({ "reason": "no primitive found for c2 - c1" })),
            Err(e) => Check::fail(name, json!(e.to_string())),
        }
    }
}

fn cocycle_check(name: &str, cx: &Complex<'_>, c: &Cochain) -> Check {
    match cx.cocycle_defect(c) {
        None => Check::pass(name).with_witness(json!({ "support": c.support_len() })),
        Some((t, v)) => Check::fail(
            name,
            json!({
                "tuple": t.iter().map(|&i| cx.module().algebra().label(i).to_string()).collect::<Vec<_>>(),
                "value": v.wire_pairs(),
            }),
        ),
    }
}
