//! Throughput of the enumeration and search kernels, data-parallel versus
//! sequential.
//!
//! With the default `parallel` feature each group has a `dispatch` entry
//! (rayon pool) and a `single_thread` entry (one-worker pool). Building
//! with `--no-default-features` runs the same bench IDs through the plain
//! sequential code path, so criterion baselines compare the two builds
//! directly.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use spansign::exec::map_ordered;
use spansign::generators::{pattern_factory, random_balanced, PatternKind};
use spansign::oracle::{best_hamiltonian, spectrum};
use spansign::pathsearch::path_local_search;
use spansign::trianglesearch::{triangle_local_search, TriangleFactor};

#[cfg(feature = "parallel")]
fn single_thread_pool() -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .expect("pool builds")
}

fn bench_spectrum(c: &mut Criterion) {
    let host = random_balanced(9, 1).unwrap();
    let pattern = pattern_factory(PatternKind::Path, 9, 2, 0).unwrap();
    let mut group = c.benchmark_group("spectrum_n9_path");
    group.sample_size(20);
    group.bench_function("dispatch", |b| {
        b.iter(|| spectrum(&host, &pattern, 10).unwrap())
    });
    #[cfg(feature = "parallel")]
    group.bench_function("single_thread", |b| {
        let pool = single_thread_pool();
        b.iter(|| pool.install(|| spectrum(&host, &pattern, 10).unwrap()))
    });
    group.finish();
}

fn bench_exact_hamiltonian(c: &mut Criterion) {
    let host = random_balanced(9, 2).unwrap();
    let mut group = c.benchmark_group("exact_hamiltonian_n9");
    group.sample_size(20);
    group.bench_function("dispatch", |b| {
        b.iter(|| best_hamiltonian(&host, 11).unwrap())
    });
    #[cfg(feature = "parallel")]
    group.bench_function("single_thread", |b| {
        let pool = single_thread_pool();
        b.iter(|| pool.install(|| best_hamiltonian(&host, 11).unwrap()))
    });
    group.finish();
}

fn bench_path_sweep(c: &mut Criterion) {
    let seeds: Vec<u64> = (0..32).collect();
    let run_batch = |seeds: Vec<u64>| {
        map_ordered(seeds, |seed| {
            let host = random_balanced(33, seed).unwrap();
            path_local_search(&host, None).unwrap().edge_count()
        })
    };
    let mut group = c.benchmark_group("path_search_batch_n33");
    group.sample_size(20);
    group.bench_function("dispatch", |b| {
        b.iter_batched(|| seeds.clone(), run_batch, BatchSize::SmallInput)
    });
    #[cfg(feature = "parallel")]
    group.bench_function("single_thread", |b| {
        let pool = single_thread_pool();
        b.iter_batched(
            || seeds.clone(),
            |s| pool.install(|| run_batch(s)),
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

fn bench_triangle_sweep(c: &mut Criterion) {
    let seeds: Vec<u64> = (0..32).collect();
    let run_batch = |seeds: Vec<u64>| {
        map_ordered(seeds, |seed| {
            let host = random_balanced(24, seed).unwrap();
            let start = TriangleFactor::consecutive(24).unwrap();
            triangle_local_search(&host, &start)
                .unwrap()
                .plus_count(&host)
        })
    };
    let mut group = c.benchmark_group("triangle_search_batch_n24");
    group.sample_size(20);
    group.bench_function("dispatch", |b| {
        b.iter_batched(|| seeds.clone(), run_batch, BatchSize::SmallInput)
    });
    #[cfg(feature = "parallel")]
    group.bench_function("single_thread", |b| {
        let pool = single_thread_pool();
        b.iter_batched(
            || seeds.clone(),
            |s| pool.install(|| run_batch(s)),
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_spectrum,
    bench_exact_hamiltonian,
    bench_path_sweep,
    bench_triangle_sweep
);
criterion_main!(benches);
