use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use mmqi::montecarlo::{simulate_with, Execution, SimConfig};
use mmqi::CH1;

fn bench_simulate(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulate");
    group.sample_size(10);
    for &n in &[1u64 << 16, 1 << 19] {
        let config = SimConfig::new(CH1, 14, n, 7);
        group.throughput(Throughput::Elements(n));
        for (name, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
            group.bench_with_input(BenchmarkId::new(name, n), &config, |b, cfg| {
                b.iter(|| simulate_with(black_box(cfg), exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_simulate);
criterion_main!(benches);
