use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use morpho_bench::{formulas, universes, SEED};
use morpho_core::logic::{check_soundness, SoundnessConfig};
use morpho_core::reasoning::{FixpointMode, Reasoner, RevisionOp};
use morpho_core::sublattice::enumerate_subobjects;
use morpho_core::universes::{line_element, random_presheaf, rng};

fn eval(c: &mut Criterion) {
    let fs = formulas(200);
    let mut g = c.benchmark_group("eval");
    for (name, u) in universes() {
        g.bench_function(name, |b| {
            b.iter(|| {
                u.clear_cache();
                for f in &fs {
                    black_box(u.values(f).unwrap());
                }
            })
        });
    }
    g.finish();
}

fn subobjects(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_subobjects");
    for n in [4, 8, 12] {
        let space = line_element(n).space().clone();
        g.bench_with_input(BenchmarkId::new("line", n), &space, |b, s| {
            b.iter(|| black_box(enumerate_subobjects(s, u64::MAX).unwrap().len()))
        });
    }
    let mut r = rng(SEED);
    for i in 0..3 {
        let space = std::sync::Arc::new(random_presheaf(&mut r, 4));
        g.bench_with_input(BenchmarkId::new("random", i), &space, |b, s| {
            b.iter(|| black_box(enumerate_subobjects(s, u64::MAX).unwrap().len()))
        });
    }
    g.finish();
}

fn revise(c: &mut Criterion) {
    let fs = formulas(40);
    let mut g = c.benchmark_group("revise");
    for (name, u) in universes() {
        for op in [RevisionOp::Dilation, RevisionOp::Tau] {
            let id = BenchmarkId::new(name, format!("{op:?}").to_lowercase());
            g.bench_function(id, |b| {
                b.iter(|| {
                    u.clear_cache();
                    let r = Reasoner::new(&u, FixpointMode::Semantic);
                    for phi in &fs {
                        for psi in &fs {
                            let _ = black_box(r.revise(op, phi, psi));
                        }
                    }
                })
            });
        }
    }
    g.finish();
}

fn soundness(c: &mut Criterion) {
    let corpus = formulas(300);
    let cfg = SoundnessConfig {
        seed: SEED,
        pair_domain: 60,
        triple_domain: 12,
    };
    let mut g = c.benchmark_group("soundness");
    g.sample_size(10);
    for (name, u) in universes() {
        g.bench_function(name, |b| {
            b.iter(|| {
                u.clear_cache();
                black_box(check_soundness(&u, &corpus, cfg).unwrap().pass())
            })
        });
    }
    g.finish();
}

criterion_group!(benches, eval, subobjects, revise, soundness);
criterion_main!(benches);
