//! Acceptance sweep: one line per criterion, exact rational arithmetic
//! throughout, zero tolerance.
//!
//! Runs without the libtest harness so that the per-criterion lines are always
//! printed. Exits nonzero if a criterion fails unexpectedly, or if a criterion
//! recorded as unattainable stops failing for its documented reason.

use std::collections::{BTreeMap, HashMap};
use std::process::ExitCode;
use std::time::Instant;

use dqkit_core::check::CheckList;
use dqkit_core::cohomology::{cohomology_dim, is_coboundary, omega_checks, omega_class, tower_obstruction, LieModule};
use dqkit_core::darboux::{
    check_symplectic, darboux_normalize, darboux_residual, DarbouxError, FormalSymplecticForm, TransportedStar,
};
use dqkit_core::lie::{build_sp, commu_diagram_check, d1_semidirect_split, levi_restriction_split, BasisElement, DiagramFault};
use dqkit_core::random;
use dqkit_core::rational::one;
use dqkit_core::weyl::induced_poisson;
use dqkit_core::{DifferentialForm, Monomial, PoissonBivector, Rational, TruncatedPoly, TruncationSpec, WeylElement};
use num_traits::Zero;

const SEED: u64 = 20_241_018;

/// What a criterion is expected to do.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Expect {
    Pass,
    /// Unattainable as stated; must fail, and the detail must contain the
    /// given reason.
    Fail(&'static str),
}

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn ok(detail: impl Into<String>) -> Self {
        Self { passed: true, detail: detail.into() }
    }

    fn fail(detail: impl Into<String>) -> Self {
        Self { passed: false, detail: detail.into() }
    }

    fn from_checks(list: &CheckList, summary: impl Into<String>) -> Self {
        let failures: Vec<String> = list.failures().map(|c| format!("{}: {}", c.name, c.witness)).collect();
        if failures.is_empty() {
            Self::ok(format!("{} ({} checks)", summary.into(), list.len()))
        } else {
            Self::fail(failures.join("; "))
        }
    }

    fn all(parts: Vec<Outcome>) -> Self {
        let passed = parts.iter().all(|o| o.passed);
        let detail = parts.into_iter().map(|o| o.detail).collect::<Vec<_>>().join(" | ");
        Self { passed, detail }
    }
}

// ---------------------------------------------------------------------------

fn criterion_1() -> Outcome {
    let spec = TruncationSpec::new(2, 3, 8);
    let gens = WeylElement::generators(spec);
    let h = WeylElement::h(spec);
    let d = spec.d;
    for (a, ga) in gens.iter().enumerate() {
        if !ga.commutator(&h).unwrap().is_zero() {
            return Outcome::fail(format!("[z{a}, h] != 0"));
        }
        for (b, gb) in gens.iter().enumerate() {
            let expected = if a < d && b == a + d {
                h.clone()
            } else if b < d && a == b + d {
                h.neg()
            } else {
                WeylElement::zero(spec)
            };
            if ga.commutator(gb).unwrap() != expected {
                return Outcome::fail(format!("generator pair ({a}, {b}) violates the Weyl relation"));
            }
        }
    }
    let mut rng = random::rng(SEED);
    for i in 0..200 {
        let (a, b, c) = (random::weyl(&mut rng, spec, 4), random::weyl(&mut rng, spec, 4), random::weyl(&mut rng, spec, 4));
        if a.star(&b).unwrap().star(&c).unwrap() != a.star(&b.star(&c).unwrap()).unwrap() {
            return Outcome::fail(format!("associativity fails on triple {i}"));
        }
    }
    Outcome::ok("16 generator pairs, 200 associative triples")
}

fn criterion_2() -> Outcome {
    let spec = TruncationSpec::new(1, 2, 6);
    let mut rng = random::rng(SEED + 2);
    for i in 0..200 {
        let (a, b) = (random::weyl(&mut rng, spec, 5), random::weyl(&mut rng, spec, 5));
        if a.iota().iota() != a {
            return Outcome::fail(format!("iota is not involutive on pair {i}"));
        }
        if a.star(&b).unwrap().iota() != b.iota().star(&a.iota()).unwrap() {
            return Outcome::fail(format!("iota is not an antihomomorphism on pair {i}"));
        }
    }
    Outcome::ok("200 pairs")
}

type Terms = Vec<(Monomial, Rational)>;

fn terms_of(p: &TruncatedPoly) -> Terms {
    p.terms().map(|(m, c)| (m.clone(), c.clone())).collect()
}

fn shifted(t: &Terms, by: &Monomial) -> Terms {
    t.iter().map(|(m, c)| (m.mul(by), c.clone())).collect()
}

fn merge(a: Terms, b: Terms) -> Terms {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut a, mut b) = (a.into_iter().peekable(), b.into_iter().peekable());
    loop {
        match (a.peek(), b.peek()) {
            (Some((ma, _)), Some((mb, _))) => match ma.cmp(mb) {
                std::cmp::Ordering::Less => out.push(a.next().unwrap()),
                std::cmp::Ordering::Greater => out.push(b.next().unwrap()),
                std::cmp::Ordering::Equal => {
                    let (m, ca) = a.next().unwrap();
                    let (_, cb) = b.next().unwrap();
                    let c = ca + cb;
                    if !c.is_zero() {
                        out.push((m, c));
                    }
                }
            },
            (Some(_), None) => out.push(a.next().unwrap()),
            (None, Some(_)) => out.push(b.next().unwrap()),
            (None, None) => return out,
        }
    }
}

/// All monomials of weight <= 6 at d = 2, with a cutoff large enough that no
/// bracket, product or double bracket of them is truncated.
fn criterion_3() -> Outcome {
    let d = 2;
    let n = 16;
    let th = PoissonBivector::standard(d, n);
    let base: Vec<Monomial> = Monomial::all_up_to_weight(d, 6, 0);
    let wide: Vec<Monomial> = Monomial::all_up_to_weight(d, 12, 0);
    let index: HashMap<&Monomial, usize> = wide.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let poly = |m: &Monomial| TruncatedPoly::monomial(d, n, m.clone(), one());
    let base_p: Vec<TruncatedPoly> = base.iter().map(poly).collect();

    // pairs: induced bracket and antisymmetry
    for (i, a) in base_p.iter().enumerate() {
        for (j, b) in base_p.iter().enumerate() {
            let std = th.bracket(a, b).unwrap();
            if induced_poisson(a, b).unwrap() != std {
                return Outcome::fail(format!("induced bracket differs on ({}, {})", base[i], base[j]));
            }
            if j <= i && th.bracket(b, a).unwrap() != std.neg() {
                return Outcome::fail(format!("antisymmetry fails on ({}, {})", base[i], base[j]));
            }
        }
    }

    // the bracket of each base monomial with every monomial of weight <= 12,
    // as term lists in monomial order
    let table: Vec<Vec<Terms>> = base_p
        .iter()
        .map(|a| wide.iter().map(|m| terms_of(&th.bracket(a, &poly(m)).unwrap())).collect())
        .collect();
    let nb = base.len();
    let mut triples = 0usize;
    let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
    for i in 0..nb {
        for j in i + 1..nb {
            for k in j + 1..nb {
                acc.clear();
                // {a, {b, c}} + {b, {c, a}} + {c, {a, b}}, with {c, a} = -{a, c}
                for (outer, inner, sign) in [(i, (j, k), 1i64), (j, (i, k), -1), (k, (i, j), 1)] {
                    for (m, c) in &table[inner.0][inner.1] {
                        let coef = c * Rational::from_integer(sign.into());
                        for (m2, c2) in &table[outer][index[m]] {
                            *acc.entry(m2.clone()).or_insert_with(Rational::zero) += &coef * c2;
                        }
                    }
                }
                if acc.values().any(|c| !c.is_zero()) {
                    return Outcome::fail(format!("Jacobi fails on ({}, {}, {})", base[i], base[j], base[k]));
                }
                triples += 1;
            }
        }
    }
    // {a, bc} = {a, b} c + b {a, c}; multiplying by a monomial preserves the
    // monomial order, so the right side is a merge of two shifted lists
    let mut leibniz = 0usize;
    for i in 0..nb {
        for j in 0..nb {
            for k in j..nb {
                let lhs = &table[i][index[&base[j].mul(&base[k])]];
                let rhs = merge(shifted(&table[i][j], &base[k]), shifted(&table[i][k], &base[j]));
                if *lhs != rhs {
                    return Outcome::fail(format!("Leibniz fails on ({}, {} {})", base[i], base[j], base[k]));
                }
                leibniz += 1;
            }
        }
    }
    Outcome::ok(format!(
        "{} monomials: {} ordered pairs, {triples} Jacobi triples, {leibniz} Leibniz triples",
        nb,
        nb * nb
    ))
}

fn criterion_4() -> Outcome {
    let mut parts = Vec::new();
    for p in [1, 2] {
        match commu_diagram_check(1, p, 6, DiagramFault::None) {
            Ok(list) => parts.push(Outcome::from_checks(&list, format!("p={p}"))),
            Err(e) => parts.push(Outcome::fail(format!("p={p}: {e}"))),
        }
    }
    // the same sweep must notice injected faults
    for fault in [DiagramFault::StructureConstant, DiagramFault::MapEntry] {
        match commu_diagram_check(1, 1, 6, fault) {
            Ok(list) if !list.all_passed() => {}
            Ok(_) => parts.push(Outcome::fail(format!("{fault:?} fault went unnoticed"))),
            Err(e) => parts.push(Outcome::fail(format!("{fault:?}: {e}"))),
        }
    }
    Outcome::all(parts)
}

fn criterion_5() -> Outcome {
    match d1_semidirect_split(1, 6) {
        Ok(split) => Outcome::from_checks(&split.checks(5), format!("section on {} basis vectors", split.derd0.dim())),
        Err(e) => Outcome::fail(e.to_string()),
    }
}

fn criterion_6() -> Outcome {
    let mut parts = Vec::new();
    for p in [1, 2] {
        match levi_restriction_split(1, p, 6) {
            Ok(split) => {
                let labels: Vec<String> = split.row.sub.basis().iter().map(|b| b.label.clone()).collect();
                let primitive = split.primitive.to_json(&split.sp.algebra, &labels);
                parts.push(Outcome::from_checks(&split.checks(), format!("p={p}, primitive {primitive}")));
            }
            Err(e) => parts.push(Outcome::fail(format!("p={p}: {e}"))),
        }
    }
    Outcome::all(parts)
}

fn criterion_7() -> Outcome {
    let o = match omega_class(1, 4) {
        Ok(o) => o,
        Err(e) => return Outcome::fail(e.to_string()),
    };
    let mut parts = vec![Outcome::from_checks(&omega_checks(&o), "omega")];
    match is_coboundary(&o.class.representative, &o.module) {
        Ok(None) => {}
        Ok(Some(_)) => parts.push(Outcome::fail("omega has a primitive")),
        Err(e) => parts.push(Outcome::fail(e.to_string())),
    }
    let sp = build_sp(1).unwrap();
    let k = LieModule::trivial("k", sp.algebra.clone(), vec![BasisElement::new("1", 0)]);
    match cohomology_dim(&k, 2, 0) {
        Ok(0) => parts.push(Outcome::ok("H^2(sp(2), k) = 0")),
        Ok(n) => parts.push(Outcome::fail(format!("H^2(sp(2), k) = {n}"))),
        Err(e) => parts.push(Outcome::fail(e.to_string())),
    }
    Outcome::all(parts)
}

// --- Darboux ---------------------------------------------------------------

fn one_plus_x1(n: u32) -> DifferentialForm {
    let mut w = DifferentialForm::zero(1, 2, n);
    w.add_component(vec![0, 1], &TruncatedPoly::one(1, n - 2) + &TruncatedPoly::x(1, n - 2, 0)).unwrap();
    w
}

/// `dx1 dy1 + dx2 dy2 + x2 dx1 dy1`, as stated.
fn stated_d2_form(n: u32) -> DifferentialForm {
    let mut w = DifferentialForm::standard_symplectic(2, n);
    w.add_component(vec![0, 2], TruncatedPoly::x(2, n - 2, 1)).unwrap();
    w
}

/// The nearest closed form: add `x1 dx2 dy1`, so the perturbation is `d(x1 x2 dy1)`.
fn closed_d2_form(n: u32) -> DifferentialForm {
    let mut w = stated_d2_form(n);
    w.add_component(vec![1, 2], TruncatedPoly::x(2, n - 2, 0)).unwrap();
    w
}

fn normalize(w: &DifferentialForm, n: u32) -> Result<(FormalSymplecticForm, dqkit_core::darboux::FormalCoordChange), DarbouxError> {
    let sw = check_symplectic(w)?;
    let phi = darboux_normalize(&sw, n)?;
    Ok((sw, phi))
}

fn criterion_8(w: &DifferentialForm, n: u32) -> Outcome {
    match normalize(w, n) {
        Ok((_, phi)) => match darboux_residual(w, &phi) {
            Ok(r) if r.is_zero() => Outcome::ok(format!("N={n}, residual 0")),
            Ok(r) => Outcome::fail(format!("residual {r}")),
            Err(e) => Outcome::fail(e.to_string()),
        },
        Err(e) => Outcome::fail(e.to_string()),
    }
}

fn criterion_9(w: &DifferentialForm, n: u32) -> Outcome {
    let (sw, phi) = match normalize(w, n) {
        Ok(x) => x,
        Err(e) => return Outcome::fail(e.to_string()),
    };
    let spec = TruncationSpec::new(w.dim(), n / 2, n);
    match TransportedStar::new(phi, spec) {
        Ok(star) => Outcome::from_checks(&star.axiom_checks(&sw, SEED + 9, 100), format!("{spec}")),
        Err(e) => Outcome::fail(e.to_string()),
    }
}

fn criterion_10() -> Outcome {
    match tower_obstruction(1, 1, 6) {
        Ok(t) => Outcome::from_checks(&t.checks(SEED + 10), format!("V of dimension {}", t.v.dim())),
        Err(e) => Outcome::fail(e.to_string()),
    }
}

// ---------------------------------------------------------------------------

fn main() -> ExitCode {
    let not_closed = "form is not closed";
    let criteria: Vec<(&str, &str, Expect, Box<dyn Fn() -> Outcome>)> = vec![
        ("1", "Weyl relations and associativity, d=2 p=3 N=8", Expect::Pass, Box::new(criterion_1)),
        ("2", "antiinvolution, d=1 p=2 N=6", Expect::Pass, Box::new(criterion_2)),
        ("3", "induced bracket = standard Poisson bracket; Leibniz, Jacobi (d=2, weight <= 6)", Expect::Pass, Box::new(criterion_3)),
        ("4", "derivation-tower diagram, d=1 p=1,2 N=6", Expect::Pass, Box::new(criterion_4)),
        ("5", "(Der D)_0 -> (Der D)_1 section preserves bracket and product, d=1 N=6", Expect::Pass, Box::new(criterion_5)),
        ("6", "central row splits over sp(2) with explicit primitive", Expect::Pass, Box::new(criterion_6)),
        ("7", "[omega] is nontrivial, H^2(sp(2), k) = 0", Expect::Pass, Box::new(criterion_7)),
        ("8a", "Darboux: (1+x1) dx1^dy1 at N=8", Expect::Pass, Box::new(|| criterion_8(&one_plus_x1(8), 8))),
        ("8b", "Darboux: dx1^dy1 + dx2^dy2 + x2 dx1^dy1 at N=6 (as stated)", Expect::Fail(not_closed), Box::new(|| criterion_8(&stated_d2_form(6), 6))),
        ("8c", "Darboux: closed variant + x1 dx2^dy1 at N=6", Expect::Pass, Box::new(|| criterion_8(&closed_d2_form(6), 6))),
        ("9a", "transported product axioms for (1+x1) dx1^dy1, N=8", Expect::Pass, Box::new(|| criterion_9(&one_plus_x1(8), 8))),
        ("9b", "transported product axioms for the stated d=2 form, N=6", Expect::Fail(not_closed), Box::new(|| criterion_9(&stated_d2_form(6), 6))),
        ("9c", "transported product axioms for the closed d=2 variant, N=6", Expect::Pass, Box::new(|| criterion_9(&closed_d2_form(6), 6))),
        ("10", "tower obstruction cocycle and splitting independence, d=1 p=1 N=6", Expect::Pass, Box::new(criterion_10)),
    ];

    let mut unexpected = 0;
    let mut passed = 0;
    let total_start = Instant::now();
    for (id, title, expect, run) in &criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let status = if outcome.passed { "PASS" } else { "FAIL" };
        let note = match (expect, outcome.passed) {
            (Expect::Pass, true) => {
                passed += 1;
                ""
            }
            (Expect::Pass, false) => {
                unexpected += 1;
                "  <-- unexpected"
            }
            (Expect::Fail(reason), false) if outcome.detail.contains(reason) => "  (expected: unattainable as stated)",
            (Expect::Fail(_), _) => {
                unexpected += 1;
                "  <-- expected failure changed"
            }
        };
        println!("criterion {id:<3} {status}  {title}  [{secs:.1} s]{note}");
        println!("              {}", outcome.detail);
    }
    println!(
        "acceptance: {passed} passed, {} failed ({} expected), {:.1} s",
        criteria.len() - passed,
        criteria.len() - passed - unexpected,
        total_start.elapsed().as_secs_f64()
    );
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
