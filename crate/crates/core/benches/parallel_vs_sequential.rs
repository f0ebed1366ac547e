//! Parallel-vs-sequential comparison of the data-parallel inner loops:
//! exhaustive Cheeger enumeration, the H-infinity frequency sweep, and a
//! batch connectivity evaluation.
//!
//! With the default `parallel` feature the same workload runs inside a
//! 1-thread rayon pool and the default pool; built with
//! `--no-default-features` only the sequential path exists.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use consensus_core::dynamics::{hinf_numeric, ConsensusGains, ConsensusSystem};
use consensus_core::generators::generate_random_regular;
use consensus_core::spectral::{algebraic_connectivity, cheeger_exact};

fn bench_pools<F: Fn() -> f64 + Sync>(c: &mut Criterion, name: &str, work: F) {
    let mut group = c.benchmark_group(name);
    group.sample_size(10);
    #[cfg(feature = "parallel")]
    {
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        group.bench_function("threads_1", |b| {
            b.iter(|| single.install(|| black_box(work())))
        });
        group.bench_function("threads_all", |b| b.iter(|| black_box(work())));
    }
    #[cfg(not(feature = "parallel"))]
    group.bench_function("sequential", |b| b.iter(|| black_box(work())));
    group.finish();
}

fn cheeger_enumeration(c: &mut Criterion) {
    let g = generate_random_regular(18, 4, 7).unwrap();
    bench_pools(c, "cheeger_exact_n18", || {
        cheeger_exact(&g, 20).unwrap().value
    });
}

fn hinf_frequency_sweep(c: &mut Criterion) {
    let g = generate_random_regular(40, 4, 3).unwrap();
    let sys = ConsensusSystem::new(
        g,
        ConsensusGains::from_coefficients(vec![1.0, 1.0]).unwrap(),
        None,
    )
    .unwrap();
    bench_pools(c, "hinf_sweep_n2_40", || hinf_numeric(&sys).unwrap());
}

fn connectivity_batch(c: &mut Criterion) {
    bench_pools(c, "lambda2_batch_20x120", || {
        let values = consensus_core::par::map_range(0..20, |seed| {
            let g = generate_random_regular(120, 4, seed as u64).unwrap();
            algebraic_connectivity(&g).unwrap()
        });
        values.into_iter().sum()
    });
}

criterion_group!(
    benches,
    cheeger_enumeration,
    hinf_frequency_sweep,
    connectivity_batch
);
criterion_main!(benches);
