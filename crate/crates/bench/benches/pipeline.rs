//! Benchmarks of the three costly paths: an ordinary invariant profile,
//! a profile whose Z² solve is large, and one full curve verification.
//! Sample counts are small; the exact arithmetic makes single runs slow
//! but perfectly repeatable.

use criterion::{criterion_group, criterion_main, Criterion};
use jorn5_core::{invariant_profile, load_catalog, load_curves, verify_curve, AlgebraId, Catalog};
use std::path::{Path, PathBuf};

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn catalog() -> Catalog {
    load_catalog(&data_dir().join("catalog.json")).expect("catalog loads")
}

fn bench_profiles(c: &mut Criterion) {
    let cat = catalog();
    let mut group = c.benchmark_group("invariant_profile");
    group.sample_size(10);
    for label in ["J_21", "J_11"] {
        let alg = cat.instantiate(&AlgebraId::plain(label)).expect("entry");
        group.bench_function(label, |b| {
            b.iter(|| invariant_profile(&alg).expect("profile"))
        });
    }
    group.finish();
}

fn bench_curve(c: &mut Criterion) {
    let cat = catalog();
    let curves = load_curves(&data_dir().join("curves.json"), &cat).expect("curves load");
    let spec = curves
        .curves
        .iter()
        .find(|s| s.id == "J21_to_J18")
        .expect("shipped curve");
    let mut group = c.benchmark_group("verify_curve");
    group.sample_size(10);
    group.bench_function(&spec.id, |b| {
        b.iter(|| verify_curve(&cat, spec).expect("curve verifies"))
    });
    group.finish();
}

criterion_group!(benches, bench_profiles, bench_curve);
criterion_main!(benches);
