use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use recliff_bench::{rng, scrambled_state, t_circuit};
use recliff_core::circuit::random_pauli;
use recliff_core::sparsify::{sample_naive, sample_once};
use recliff_core::{recompile, Grouping, SamplingPlan};

fn pauli_rotation(c: &mut Criterion) {
    let mut group = c.benchmark_group("pauli_rotation");
    for n in [64, 128, 256] {
        let state = scrambled_state(n, 1);
        let mut r = rng(2);
        let axes: Vec<_> = (0..64).map(|_| random_pauli(n, &mut r)).collect();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            let mut i = 0;
            b.iter_batched_ref(
                || state.clone(),
                |s| {
                    i = (i + 1) % axes.len();
                    s.apply_pauli_rotation(&axes[i], 1).unwrap();
                },
                criterion::BatchSize::SmallInput,
            );
        });
    }
    group.finish();
}

fn recompilation(c: &mut Criterion) {
    let mut group = c.benchmark_group("recompile");
    for gates in [200, 2000] {
        let circuit = t_circuit(40, gates, 16, 3);
        group.bench_with_input(BenchmarkId::from_parameter(gates), &circuit, |b, circuit| {
            b.iter(|| recompile(circuit).unwrap());
        });
    }
    group.finish();
}

fn sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("sample");
    for gates in [200, 2000] {
        let circuit = t_circuit(40, gates, 16, 4);
        let plan = SamplingPlan::new(&recompile(&circuit).unwrap(), Grouping::PerGate, 1 << 30, 5).unwrap();
        let mut i = 0;
        group.bench_with_input(BenchmarkId::new("recompiled", gates), &plan, |b, plan| {
            b.iter(|| {
                i += 1;
                sample_once(plan, i).unwrap()
            });
        });
        let mut j = 0;
        group.bench_with_input(BenchmarkId::new("naive", gates), &circuit, |b, circuit| {
            b.iter(|| {
                j += 1;
                sample_naive(circuit, 5, j).unwrap()
            });
        });
    }
    group.finish();
}

criterion_group!(benches, pauli_rotation, recompilation, sampling);
criterion_main!(benches);
