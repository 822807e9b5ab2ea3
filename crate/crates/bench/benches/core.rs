//! Benchmarks for the three hot paths: canonical labeling, class
//! enumeration, and the Smith normal form behind every group computation.
//! Inputs are fixed and deterministic so runs compare across changes.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use kprime_core::aset::FiniteASet;
use kprime_core::enumerate::{enumerate_classes, SetFlavor};
use kprime_core::ktheory::{build_presentation, smith};
use kprime_core::monoid::FiniteMonoid;

fn bench_canonical(c: &mut Criterion) {
    let ntr3 = FiniteMonoid::truncated_cyclic(3).into_arc();
    let perm = vec![0, 4, 2, 6, 1, 5, 3];
    let set = FiniteASet::free(ntr3, 2).relabel(&perm).expect("permutation");
    c.bench_function("canonical key, scrambled free pair over ntr3", |b| {
        b.iter(|| black_box(&set).canonical_key())
    });
}

fn bench_enumerate(c: &mut Criterion) {
    let ntr3 = FiniteMonoid::truncated_cyclic(3).into_arc();
    c.bench_function("enumerate pc classes over ntr3, bound 5", |b| {
        b.iter(|| enumerate_classes(black_box(&ntr3), 5, SetFlavor::Pc).len())
    });
}

fn bench_smith(c: &mut Criterion) {
    let ntr3 = FiniteMonoid::truncated_cyclic(3).into_arc();
    let pres = build_presentation(&ntr3, SetFlavor::All, 5);
    c.bench_function("smith normal form, all-flavor ntr3 presentation", |b| {
        b.iter(|| smith(black_box(&pres)).0.rank)
    });
}

criterion_group!(benches, bench_canonical, bench_enumerate, bench_smith);
criterion_main!(benches);
