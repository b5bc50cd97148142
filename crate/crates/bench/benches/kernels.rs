use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use dqkit_bench::{conformal_form, coupled_form, weyl_pairs};
use dqkit_core::cohomology::{cohomology_dim, LieModule};
use dqkit_core::darboux::{check_symplectic, darboux_normalize};
use dqkit_core::lie::{build_h, build_sp, commu_diagram_check, BasisElement, DiagramFault};
use dqkit_core::weyl::{star_by_rewriting, Strategy};
use dqkit_core::TruncationSpec;

fn star(c: &mut Criterion) {
    let mut g = c.benchmark_group("star");
    for (d, p, n) in [(1, 2, 6), (2, 3, 8)] {
        let spec = TruncationSpec::new(d, p, n);
        let pairs = weyl_pairs(spec, 16, 4);
        g.bench_with_input(BenchmarkId::new("closed_form", spec), &pairs, |b, pairs| {
            b.iter(|| {
                for (x, y) in pairs {
                    black_box(x.star(y).unwrap());
                }
            })
        });
        g.bench_with_input(BenchmarkId::new("rewriting", spec), &pairs, |b, pairs| {
            b.iter(|| {
                for (x, y) in pairs {
                    black_box(star_by_rewriting(x, y, Strategy::Leftmost));
                }
            })
        });
    }
    g.finish();
}

fn diagram(c: &mut Criterion) {
    let mut g = c.benchmark_group("tower_diagram");
    g.sample_size(10);
    for p in [1, 2] {
        g.bench_function(BenchmarkId::new("d1_N6", p), |b| {
            b.iter(|| black_box(commu_diagram_check(1, p, 6, DiagramFault::None).unwrap()))
        });
    }
    g.finish();
}

fn cohomology(c: &mut Criterion) {
    let mut g = c.benchmark_group("cohomology_dims");
    g.sample_size(10);
    let sp = build_sp(2).unwrap();
    let k = LieModule::trivial("k", sp.algebra.clone(), vec![BasisElement::new("1", 0)]);
    g.bench_function("sp4_trivial_H2", |b| b.iter(|| black_box(cohomology_dim(&k, 2, 0).unwrap())));
    let h = build_h(1, 5).unwrap();
    let kh = LieModule::trivial("k", h.algebra.clone(), vec![BasisElement::new("1", 0)]);
    g.bench_function("H_d1_N5_trivial_H2_w0", |b| b.iter(|| black_box(cohomology_dim(&kh, 2, 0).unwrap())));
    g.finish();
}

fn darboux(c: &mut Criterion) {
    let mut g = c.benchmark_group("darboux_normalize");
    g.sample_size(10);
    let a = check_symplectic(&conformal_form(1, 8)).unwrap();
    g.bench_function("conformal_d1_N8", |b| b.iter(|| black_box(darboux_normalize(&a, 8).unwrap())));
    let w = check_symplectic(&coupled_form(6)).unwrap();
    g.bench_function("coupled_d2_N6", |b| b.iter(|| black_box(darboux_normalize(&w, 6).unwrap())));
    g.finish();
}

criterion_group!(benches, star, diagram, cohomology, darboux);
criterion_main!(benches);
