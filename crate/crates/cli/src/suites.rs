//! The `verify` suites: seeded invariant sweeps over the core modules.
//!
//! Every suite turns errors from the core into failing checks rather than
//! aborting, so a report always lists everything that was attempted.

use std::fmt::Display;

use serde_json::{json, Value};

use dqkit_core::check::{Check, CheckList};
use dqkit_core::cohomology::{cohomology_dim, omega_checks, omega_class, tower_obstruction, LieModule};
use dqkit_core::darboux::{check_symplectic, darboux_normalize, darboux_residual, TransportedStar};
use dqkit_core::lie::{build_sp, commu_diagram_check, d1_semidirect_split, levi_restriction_split, BasisElement, DiagramFault};
use dqkit_core::random::{self, SweepRng};
use dqkit_core::weyl::{d1_product, induced_poisson, star_by_rewriting, Strategy};
use dqkit_core::{D1Element, DifferentialForm, PoissonBivector, TruncatedPoly, TruncationSpec, WeylElement};

use crate::report::Params;

/// Random samples per sweep.
pub const SAMPLES: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Weyl,
    Tower,
    Cohomology,
    Darboux,
    All,
}

pub fn run(suite: Suite, params: Params, fault: DiagramFault) -> CheckList {
    match suite {
        Suite::Weyl => weyl(params),
        Suite::Tower => tower(params, fault),
        Suite::Cohomology => cohomology(params),
        Suite::Darboux => darboux(params),
        Suite::All => {
            let mut out = weyl(params);
            out.extend(tower(params, fault));
            out.extend(cohomology(params));
            out.extend(darboux(params));
            out
        }
    }
}

fn error_check(name: impl Into<String>, e: impl Display) -> Check {
    Check::fail(name, json!({ "error": e.to_string() }))
}

/// Runs `f` on `samples` indices; the first `Some(witness)` fails the check.
fn sweep(name: &str, seed: u64, samples: usize, mut f: impl FnMut(usize) -> Option<Value>) -> Check {
    for i in 0..samples {
        if let Some(w) = f(i) {
            return Check::fail(name, json!({ "seed": seed, "sample": i, "detail": w }));
        }
    }
    Check::pass(name).with_witness(json!({ "seed": seed, "samples": samples }))
}

fn show<T: Display>(r: Result<T, impl Display>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

// --- weyl ------------------------------------------------------------------

pub fn weyl(params: Params) -> CheckList {
    let Params { d, p, n, seed } = params;
    let spec = TruncationSpec::new(d, p, n);
    let mut out = CheckList::new();
    let mut rng = random::rng(seed);
    let elt = |rng: &mut SweepRng| random::weyl(rng, spec, 4);

    // [x_i, y_j] = delta_ij h, everything else commutes
    let gens = WeylElement::generators(spec);
    let h = WeylElement::h(spec);
    let mut bad = None;
    'outer: for (a, ga) in gens.iter().chain([&h]).enumerate() {
        for (b, gb) in gens.iter().chain([&h]).enumerate() {
            let want = if a < d && b == a + d {
                h.clone()
            } else if b < d && a == b + d {
                h.neg()
            } else {
                WeylElement::zero(spec)
            };
            let got = ga.commutator(gb);
            if got.as_ref().ok() != Some(&want) {
                bad = Some(json!({ "pair": [a, b], "commutator": show(got), "expected": want.to_string() }));
                break 'outer;
            }
        }
    }
    out.push(match bad {
        None => Check::pass("Weyl relations on generator pairs"),
        Some(w) => Check::fail("Weyl relations on generator pairs", w),
    });

    let triples: Vec<_> = (0..SAMPLES).map(|_| (elt(&mut rng), elt(&mut rng), elt(&mut rng))).collect();
    out.push(sweep("star product is associative", seed, SAMPLES, |i| {
        let (a, b, c) = &triples[i];
        let lhs = a.star(b).and_then(|ab| ab.star(c));
        let rhs = b.star(c).and_then(|bc| a.star(&bc));
        (lhs.as_ref().ok() != rhs.as_ref().ok() || lhs.is_err())
            .then(|| json!({ "a": a.to_string(), "b": b.to_string(), "c": c.to_string() }))
    }));
    out.push(sweep("star product agrees with rewriting to normal order", seed, SAMPLES, |i| {
        let (a, b, _) = &triples[i];
        let fast = a.star(b).ok()?;
        let slow = star_by_rewriting(a, b, Strategy::Random(seed.wrapping_add(i as u64)));
        (fast != slow).then(|| json!({ "a": a.to_string(), "b": b.to_string(), "star": fast.to_string(), "rewritten": slow.to_string() }))
    }));
    out.push(sweep("iota is an involution", seed, SAMPLES, |i| {
        let a = &triples[i].0;
        (a.iota().iota() != *a).then(|| json!({ "a": a.to_string() }))
    }));
    out.push(sweep("iota reverses products", seed, SAMPLES, |i| {
        let (a, b, _) = &triples[i];
        let lhs = a.star(b).map(|ab| ab.iota());
        let rhs = b.iota().star(&a.iota());
        (lhs.as_ref().ok() != rhs.as_ref().ok() || lhs.is_err())
            .then(|| json!({ "a": a.to_string(), "b": b.to_string() }))
    }));

    // Poisson bracket: induced vs. standard, and its axioms with enough
    // headroom that nothing is lost to truncation
    let pairs: Vec<_> = (0..SAMPLES)
        .map(|_| {
            (
                random::h_free_poly(&mut rng, d, n, 3),
                random::h_free_poly(&mut rng, d, n, 3),
                random::h_free_poly(&mut rng, d, n, 3),
            )
        })
        .collect();
    let th = PoissonBivector::standard(d, n);
    out.push(sweep("induced bracket equals the standard Poisson bracket", seed, SAMPLES, |i| {
        let (a, b, _) = &pairs[i];
        let got = induced_poisson(a, b);
        let want = th.bracket(a, b);
        (got.as_ref().ok() != want.as_ref().ok() || got.is_err())
            .then(|| json!({ "a": a.to_string(), "b": b.to_string(), "induced": show(got), "poisson": show(want) }))
    }));
    let wide = 3 * n;
    let thw = PoissonBivector::standard(d, wide);
    let up = |f: &TruncatedPoly| f.with_cutoff(wide);
    out.push(sweep("Poisson bracket satisfies Jacobi", seed, SAMPLES, |i| {
        let (a, b, c) = &pairs[i];
        let j = thw.jacobiator(&up(a), &up(b), &up(c)).ok()?;
        (!j.is_zero()).then(|| json!({ "a": a.to_string(), "b": b.to_string(), "c": c.to_string(), "jacobiator": j.to_string() }))
    }));
    out.push(sweep("Poisson bracket is a derivation", seed, SAMPLES, |i| {
        let (a, b, c) = (up(&pairs[i].0), up(&pairs[i].1), up(&pairs[i].2));
        let lhs = thw.bracket(&a, &b.mul(&c).ok()?).ok()?;
        let rhs = &thw.bracket(&a, &b).ok()?.mul(&c).ok()? + &b.mul(&thw.bracket(&a, &c).ok()?).ok()?;
        (lhs != rhs).then(|| json!({ "a": a.to_string(), "b": b.to_string(), "c": c.to_string() }))
    }));

    // the split model of D/h^2
    if p >= 1 && n >= 2 {
        let spec1 = TruncationSpec::new(d, 1, n);
        out.push(sweep("split model of D/h^2 multiplies like the Weyl algebra", seed, SAMPLES, |i| {
            let (a, b, _) = &triples[i];
            let (a, b) = (a.retruncate(spec1), b.retruncate(spec1));
            let (sa, sb) = (D1Element::from_weyl(&a).ok()?, D1Element::from_weyl(&b).ok()?);
            let want = D1Element::from_weyl(&a.star(&b).ok()?).ok()?;
            let got = d1_product(&sa, &sb);
            (got.as_ref().ok() != Some(&want)).then(|| json!({ "a": a.to_string(), "b": b.to_string() }))
        }));
    }
    out
}

// --- tower -----------------------------------------------------------------

pub fn tower(params: Params, fault: DiagramFault) -> CheckList {
    let Params { d, p, n, .. } = params;
    let mut out = CheckList::new();
    match commu_diagram_check(d, p, n, fault) {
        Ok(list) => out.extend(list),
        Err(e) => out.push(error_check("tower diagram", e)),
    }
    match levi_restriction_split(d, p, n) {
        Ok(split) => out.extend(split.checks()),
        Err(e) => out.push(error_check("Levi splitting over sp(2d)", e)),
    }
    match d1_semidirect_split(d, n) {
        Ok(split) => out.extend(split.checks(n.saturating_sub(1))),
        Err(e) => out.push(error_check("section (Der D)_0 -> (Der D)_1", e)),
    }
    out
}

// --- cohomology ------------------------------------------------------------

pub fn cohomology(params: Params) -> CheckList {
    let Params { d, p, n, seed } = params;
    let mut out = CheckList::new();
    match omega_class(d, n) {
        Ok(o) => out.extend(omega_checks(&o)),
        Err(e) => out.push(error_check("class of the symplectic form", e)),
    }
    let name = format!("H^2(sp({}), k) = 0", 2 * d);
    match build_sp(d) {
        Ok(sp) => {
            let k = LieModule::trivial("k", sp.algebra.clone(), vec![BasisElement::new("1", 0)]);
            out.push(match cohomology_dim(&k, 2, 0) {
                Ok(0) => Check::pass(name),
                Ok(dim) => Check::fail(name, json!({ "dim": dim })),
                Err(e) => error_check(name, e),
            });
        }
        Err(e) => out.push(error_check(name, e)),
    }
    match tower_obstruction(d, p, n) {
        Ok(t) => out.extend(t.checks(seed)),
        Err(e) => out.push(error_check("tower obstruction class", e)),
    }
    out
}

// --- darboux ---------------------------------------------------------------

/// The forms the Darboux suite normalizes at dimension `d`: a conformal
/// rescaling of the first factor, and for `d >= 2` a closed form coupling
/// the first two factors.
pub fn suite_forms(d: usize, n: u32) -> Vec<(String, DifferentialForm)> {
    let c = n.saturating_sub(2);
    let mut out = Vec::new();
    let mut w = DifferentialForm::standard_symplectic(d, n);
    w.add_component(vec![0, d], TruncatedPoly::x(d, c, 0)).expect("valid index");
    out.push((format!("{w}"), w));
    if d >= 2 {
        let mut w = DifferentialForm::standard_symplectic(d, n);
        w.add_component(vec![0, d], TruncatedPoly::x(d, c, 1)).expect("valid index");
        w.add_component(vec![1, d], TruncatedPoly::x(d, c, 0)).expect("valid index");
        out.push((format!("{w}"), w));
    }
    out
}

pub fn darboux(params: Params) -> CheckList {
    let Params { d, p, n, seed } = params;
    let mut out = CheckList::new();
    for (label, w) in suite_forms(d, n) {
        let name = format!("Darboux chart for {label}");
        let sw = match check_symplectic(&w) {
            Ok(sw) => sw,
            Err(e) => {
                out.push(error_check(name, e));
                continue;
            }
        };
        let phi = match darboux_normalize(&sw, n) {
            Ok(phi) => phi,
            Err(e) => {
                out.push(error_check(name, e));
                continue;
            }
        };
        out.push(match darboux_residual(&w, &phi) {
            Ok(r) if r.is_zero() => Check::pass(format!("{name}: residual is zero")),
            Ok(r) => Check::fail(format!("{name}: residual is zero"), json!({ "residual": r.to_string() })),
            Err(e) => error_check(name, e),
        });
        match TransportedStar::new(phi, TruncationSpec::new(d, p, n)) {
            Ok(star) => {
                for mut c in star.axiom_checks(&sw, seed, SAMPLES / 4) {
                    c.name = format!("{label}: {}", c.name);
                    out.push(c);
                }
            }
            Err(e) => out.push(error_check(format!("transported product for {label}"), e)),
        }
    }
    out
}
