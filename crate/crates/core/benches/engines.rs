use criterion::{black_box, criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};
use wckr::query::{bfs_with, BfsScratch};
use wckr::workload::{generate, WorkloadSpec};
use wckr::{batch_bfs, batch_query, build_default, Query, Reachability, Variant, WeightedGraph};

fn setup(n: usize) -> (WeightedGraph, Vec<Query>) {
    let g = WeightedGraph::random(n, 2 * n, 10, 7).unwrap();
    let w = generate(&g, &WorkloadSpec::balanced(&g, 2000, 11)).unwrap();
    (g, w.queries())
}

fn build(c: &mut Criterion) {
    let (g, _) = setup(400);
    let mut group = c.benchmark_group("build");
    group.sample_size(10);
    for v in Variant::ALL {
        group.bench_function(v.name(), |b| b.iter(|| build_default(black_box(&g), v).unwrap()));
    }
    group.finish();
}

/// Batch answering through the worker pool against a plain loop on one thread.
/// With `--no-default-features` both arms run sequentially.
fn queries(c: &mut Criterion) {
    let (g, qs) = setup(1000);
    let mut group = c.benchmark_group(format!("queries/{}-workers", wckr::par::workers()));
    for v in Variant::ALL {
        let index = build_default(&g, v).unwrap();
        group.bench_with_input(BenchmarkId::new("batch", v.name()), &qs, |b, qs| {
            b.iter(|| batch_query(&index, qs).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("loop", v.name()), &qs, |b, qs| {
            b.iter(|| qs.iter().filter(|q| index.answer(q).reachable).count())
        });
    }
    group.bench_with_input(BenchmarkId::new("batch", "bfs"), &qs, |b, qs| b.iter(|| batch_bfs(&g, qs).unwrap()));
    group.bench_with_input(BenchmarkId::new("loop", "bfs"), &qs, |b, qs| {
        b.iter_batched_ref(
            || BfsScratch::new(g.vertex_count()),
            |s| qs.iter().filter(|q| bfs_with(&g, q, s).reachable).count(),
            BatchSize::LargeInput,
        )
    });
    group.finish();
}

criterion_group!(benches, build, queries);
criterion_main!(benches);
