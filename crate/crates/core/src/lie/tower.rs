use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::build::derd_from_g;
use super::extension::exactness;
use super::{build_g, scalars, ExtensionData, GradedLieAlgebra, LieError, LieMap, LinearMap, MonomialAlgebra};
use crate::check::{Check, CheckList};
use crate::linalg::SparseVec;
use crate::rational;
use crate::series::Monomial;

/// The levels `q = 0..=p` of the tower `G_q -> (Der D)_q` with their rows
/// `0 -> k[h]/h^{q+1} -> G_q -> (Der D)_q -> 0`.
#[derive(Debug, Clone)]
pub struct GTower {
    pub d: usize,
    pub p: u32,
    pub n: u32,
    pub g: Vec<MonomialAlgebra>,
    pub derd: Vec<MonomialAlgebra>,
    pub center: Vec<MonomialAlgebra>,
    pub rows: Vec<ExtensionData>,
    /// `G_{q+1} -> G_q` for `q = 0..p`.
    pub g_quotients: Vec<LieMap>,
    /// `(Der D)_{q+1} -> (Der D)_q` for `q = 0..p`.
    pub derd_quotients: Vec<LieMap>,
}

fn drop_top(q: u32) -> impl Fn(&Monomial) -> Option<Monomial> {
    move |m| (u32::from(m.hexp()) <= q).then(|| m.clone())
}

fn same(m: &Monomial) -> Option<Monomial> {
    Some(m.clone())
}

/// Central-extension row at level `q`, with the monomial section.
pub(crate) fn cent_row(
    center: &MonomialAlgebra,
    g: &MonomialAlgebra,
    derd: &MonomialAlgebra,
    q: u32,
) -> Result<ExtensionData, LieError> {
    let inject = center.monomial_map(format!("k[h]/h^{} -> G_{q}", q + 1), g, same)?;
    let project = g.monomial_map(format!("G_{q} -> (Der D)_{q}"), derd, same)?;
    let cols = derd
        .monomials
        .iter()
        .map(|m| SparseVec::unit(g.index_of(m).expect("Der D basis lies in G")))
        .collect();
    let splitting = LinearMap::new(derd.dim(), g.dim(), cols)?;
    ExtensionData::new(inject, project, splitting)
}

/// Builds every level independently, so that the quotient maps between
/// levels are genuine checks of compatibility.
pub fn build_g_tower(d: usize, p: u32, n: u32) -> Result<GTower, LieError> {
    let mut g = Vec::new();
    let mut derd = Vec::new();
    let mut center = Vec::new();
    let mut rows = Vec::new();
    for q in 0..=p {
        let gq = build_g(d, q, n)?;
        let dq = derd_from_g(&gq, q)?;
        let cq = scalars(d, q, n);
        rows.push(cent_row(&cq, &gq, &dq, q)?);
        g.push(gq);
        derd.push(dq);
        center.push(cq);
    }
    let mut g_quotients = Vec::new();
    let mut derd_quotients = Vec::new();
    for q in 0..p {
        let qi = q as usize;
        g_quotients.push(g[qi + 1].monomial_map(format!("G_{} -> G_{q}", q + 1), &g[qi], drop_top(q))?);
        derd_quotients.push(derd[qi + 1].monomial_map(
            format!("(Der D)_{} -> (Der D)_{q}", q + 1),
            &derd[qi],
            drop_top(q),
        )?);
    }
    Ok(GTower { d, p, n, g, derd, center, rows, g_quotients, derd_quotients })
}

/// `(Der D)_q` for `q = 0..=p` and the quotient maps between them.
pub fn build_derd_tower(d: usize, p: u32, n: u32) -> Result<(Vec<MonomialAlgebra>, Vec<LieMap>), LieError> {
    let t = build_g_tower(d, p, n)?;
    Ok((t.derd, t.derd_quotients))
}

/// Faults that can be injected into the diagram check to exercise its
/// failure reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum DiagramFault {
    #[default]
    None,
    /// Perturb one structure constant of `G_{p+1}`.
    StructureConstant,
    /// Perturb one matrix entry of `G_{p+1} -> G_p`.
    MapEntry,
}

fn jacobi_check(name: &str, alg: &GradedLieAlgebra) -> Check {
    let r = alg.check_jacobi();
    let witness = json!({
        "checked": r.checked,
        "exempt": r.exempt,
        "failures": r.failures.iter().map(|(i, j, k, v)| json!({
            "triple": [alg.label(*i), alg.label(*j), alg.label(*k)],
            "jacobiator": v,
        })).collect::<Vec<_>>(),
    });
    Check::from_bool(format!("{name}: Jacobi identity"), r.passed(), witness)
}

fn square_check(name: &str, a: &LieMap, b: &LieMap, c: &LieMap, d: &LieMap) -> Check {
    // b ∘ a == d ∘ c
    let left = b.matrix().compose(a.matrix()).expect("shapes agree");
    let right = d.matrix().compose(c.matrix()).expect("shapes agree");
    match left.first_difference(&right) {
        None => Check::pass(format!("{name} commutes")),
        Some(i) => Check::fail(
            format!("{name} commutes"),
            json!({
                "element": a.source().label(i),
                "weight": a.source().weight(i),
                "via_first_path": left.column(i).wire_pairs(),
                "via_second_path": right.column(i).wire_pairs(),
            }),
        ),
    }
}

fn central_in(name: &str, sub: &LieMap) -> Check {
    let total = sub.target();
    for a in 0..sub.source().dim() {
        let v = sub.matrix().column(a);
        for j in 0..total.dim() {
            if !total.bracket_vec(&SparseVec::unit(j), v).is_zero() {
                return Check::fail(
                    format!("{name} is central"),
                    json!({ "element": sub.source().label(a), "against": total.label(j), "weight": total.weight(j) }),
                );
            }
        }
    }
    Check::pass(format!("{name} is central"))
}

fn ideal_check(name: &str, sub: &LieMap) -> Check {
    let total = sub.target();
    let image: std::collections::BTreeSet<usize> =
        (0..sub.source().dim()).flat_map(|a| sub.matrix().column(a).indices().collect::<Vec<_>>()).collect();
    for a in 0..sub.source().dim() {
        let v = sub.matrix().column(a);
        for j in 0..total.dim() {
            let br = total.bracket_vec(&SparseVec::unit(j), v);
            let leaves = br.indices().find(|k| !image.contains(k));
            let abelian_fail = image.contains(&j) && !br.is_zero();
            if leaves.is_some() || abelian_fail {
                return Check::fail(
                    format!("{name} is an abelian ideal"),
                    json!({ "element": sub.source().label(a), "against": total.label(j), "weight": total.weight(j) }),
                );
            }
        }
    }
    Check::pass(format!("{name} is an abelian ideal"))
}

/// `dim ker(f)` at each weight equals the number of monomials `f` of degree
/// `w - 2p` (all of them for `A`, nonconstant ones for `H`).
fn kernel_dims_check(name: &str, f: &LieMap, d: usize, p: u32, with_constant: bool) -> Check {
    let src = f.source();
    let mut table = Vec::new();
    for w in src.weights() {
        let dim = src.indices_of_weight(w).len();
        let ker = dim - f.rank_at_weight(w);
        let deg = w - 2 * p as i32;
        let expected = if deg < 0 || (deg == 0 && !with_constant) {
            0
        } else {
            Monomial::all_of_degree(d, deg as u32).len()
        };
        table.push(json!({ "weight": w, "kernel": ker, "expected": expected }));
        if ker != expected {
            return Check::fail(format!("{name}: kernel dimensions"), json!({ "weight": w, "kernel": ker, "expected": expected }));
        }
    }
    Check::pass(format!("{name}: kernel dimensions")).with_witness(json!(table))
}

/// Corrupts the first structure constant of `g` landing on a basis vector
/// that survives in the level below (non-scalar, `h`-order `<= p`).
fn corrupt_g(g: &mut MonomialAlgebra, p: u32) -> Option<serde_json::Value> {
    let alg = Arc::make_mut(&mut g.algebra);
    let target = alg.nonzero_brackets().find_map(|(i, j, v)| {
        v.indices()
            .find(|&k| !g.monomials[k].is_pure_h() && u32::from(g.monomials[k].hexp()) <= p)
            .map(|k| (i, j, k))
    })?;
    let (i, j, k) = target;
    alg.corrupt_structure_constant(i, j, k, &rational::one());
    Some(json!({ "bracket": [alg.label(i), alg.label(j)], "component": alg.label(k) }))
}

/// Exactness, commutativity and centrality claims of the tower diagram
///
/// ```text
///   0 -> h^p k      -> h^p A  -> h^p H        -> 0
///   0 -> k[h]/h^{p+2} -> G_{p+1} -> (Der D)_{p+1} -> 0
///   0 -> k[h]/h^{p+1} -> G_p     -> (Der D)_p     -> 0
/// ```
///
/// with the columns running downwards, checked weight by weight up to `N`.
pub fn commu_diagram_check(d: usize, p: u32, n: u32, fault: DiagramFault) -> Result<CheckList, LieError> {
    let mut out = CheckList::new();
    let mut g1 = build_g(d, p + 1, n)?;
    if fault == DiagramFault::StructureConstant {
        let w = corrupt_g(&mut g1, p);
        out.push(Check::pass("fault injected: structure constant").with_witness(w.unwrap_or_default()));
    }
    let g0 = build_g(d, p, n)?;
    let d1 = derd_from_g(&g1, p + 1)?;
    let d0 = derd_from_g(&g0, p)?;
    let s1 = scalars(d, p + 1, n);
    let s0 = scalars(d, p, n);
    let top = (p + 1) as u16;
    let a_top = g1.subalgebra("h^p A", |m| m.hexp() == top, true)?;
    let k_top = s1.subalgebra("h^p k", |m| m.hexp() == top, true)?;
    let h_top = a_top.subalgebra("h^p H", |m| !m.is_pure_h(), true)?;

    // rows
    let r1_i = k_top.monomial_map("h^p k -> h^p A", &a_top, same)?;
    let r1_p = a_top.monomial_map("h^p A -> h^p H", &h_top, same)?;
    let r2_i = s1.monomial_map(format!("k[h]/h^{} -> G_{}", p + 2, p + 1), &g1, same)?;
    let r2_p = g1.monomial_map(format!("G_{} -> (Der D)_{}", p + 1, p + 1), &d1, same)?;
    let r3_i = s0.monomial_map(format!("k[h]/h^{} -> G_{p}", p + 1), &g0, same)?;
    let r3_p = g0.monomial_map(format!("G_{p} -> (Der D)_{p}"), &d0, same)?;
    // columns
    let c1_i = k_top.monomial_map(format!("h^p k -> k[h]/h^{}", p + 2), &s1, same)?;
    let c1_p = s1.monomial_map(format!("k[h]/h^{} -> k[h]/h^{}", p + 2, p + 1), &s0, drop_top(p))?;
    let c2_i = a_top.monomial_map(format!("h^p A -> G_{}", p + 1), &g1, same)?;
    let mut c2_p = g1.monomial_map(format!("G_{} -> G_{p}", p + 1), &g0, drop_top(p))?;
    let c3_i = h_top.monomial_map(format!("h^p H -> (Der D)_{}", p + 1), &d1, same)?;
    let c3_p = d1.monomial_map(format!("(Der D)_{} -> (Der D)_{p}", p + 1), &d0, drop_top(p))?;

    if fault == DiagramFault::MapEntry {
        let src = g1
            .monomials
            .iter()
            .position(|m| !m.is_pure_h() && u32::from(m.hexp()) <= p)
            .expect("G_{p+1} has non-scalar elements");
        let tgt = g0.index_of(&g1.monomials[src]).expect("survives the projection");
        c2_p.matrix_mut().corrupt_entry(src, tgt, &rational::one());
        out.push(Check::pass("fault injected: map entry").with_witness(json!({
            "map": c2_p.name(),
            "element": g1.algebra.label(src),
        })));
    }

    for (name, alg) in [
        (format!("G_{}", p + 1), &g1.algebra),
        (format!("G_{p}"), &g0.algebra),
        (format!("(Der D)_{}", p + 1), &d1.algebra),
        (format!("(Der D)_{p}"), &d0.algebra),
    ] {
        out.push(jacobi_check(&name, alg));
    }

    out.push(exactness("row 1 (h^p k -> h^p A -> h^p H)", &r1_i, &r1_p));
    out.push(exactness("row 2 (k[h]/h^{p+2} -> G_{p+1} -> (Der D)_{p+1})", &r2_i, &r2_p));
    out.push(exactness("row 3 (k[h]/h^{p+1} -> G_p -> (Der D)_p)", &r3_i, &r3_p));
    out.push(exactness("column 1 (h^p k -> k[h]/h^{p+2} -> k[h]/h^{p+1})", &c1_i, &c1_p));
    out.push(exactness("column 2 (h^p A -> G_{p+1} -> G_p)", &c2_i, &c2_p));
    out.push(exactness("column 3 (h^p H -> (Der D)_{p+1} -> (Der D)_p)", &c3_i, &c3_p));

    for m in [&r1_i, &r1_p, &r2_i, &r2_p, &r3_i, &r3_p, &c1_i, &c1_p, &c2_i, &c2_p, &c3_i, &c3_p] {
        out.push(m.verify());
    }

    out.push(square_check("square top-left (h^p k, h^p A, k[h]/h^{p+2}, G_{p+1})", &r1_i, &c2_i, &c1_i, &r2_i));
    out.push(square_check("square top-right (h^p A, h^p H, G_{p+1}, (Der D)_{p+1})", &r1_p, &c3_i, &c2_i, &r2_p));
    out.push(square_check("square bottom-left (k[h]/h^{p+2}, G_{p+1}, k[h]/h^{p+1}, G_p)", &r2_i, &c2_p, &c1_p, &r3_i));
    out.push(square_check("square bottom-right (G_{p+1}, (Der D)_{p+1}, G_p, (Der D)_p)", &r2_p, &c3_p, &c2_p, &r3_p));

    out.push(central_in("row 2: k[h]/h^{p+2} in G_{p+1}", &r2_i));
    out.push(central_in("row 3: k[h]/h^{p+1} in G_p", &r3_i));
    let col1_trivial = k_top.algebra.is_abelian() && s1.algebra.is_abelian() && s0.algebra.is_abelian();
    out.push(Check::from_bool(
        "column 1: abelian algebras with trivial action (central by rows 2 and 3)",
        col1_trivial,
        serde_json::Value::Null,
    ));
    out.push(central_in("column 1: h^p k in G_{p+1}", &c2_i.compose(&r1_i)?));
    out.push(ideal_check("h^p A in G_{p+1}", &c2_i));
    out.push(kernel_dims_check("G_{p+1} -> G_p kernel matches A", &c2_p, d, p, true));
    out.push(kernel_dims_check("(Der D)_{p+1} -> (Der D)_p kernel matches H", &c3_p, d, p, false));
    Ok(out)
}
