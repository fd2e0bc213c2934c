use cohnoise::circuits::{build_grover, execute, inject_noise};
use cohnoise::noise::Matrix2;
use cohnoise::propagation::{build_approx_circuit, propagate_variances};
use cohnoise::qec::CodeCircuit;
use cohnoise::{CodeExperimentSpec, CodeId, GroverSpec, MetricMode, NoiseSpec, StateVector};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

fn apply_1q(c: &mut Criterion) {
    let mut g = c.benchmark_group("apply_1q");
    for n in [5, 12, 18] {
        let mut s = StateVector::zero(n).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| s.apply_1q(black_box(&Matrix2::H), n / 2).unwrap())
        });
    }
    g.finish();
}

fn code_instance(c: &mut Criterion) {
    let mut g = c.benchmark_group("code_instance");
    for (code, m, ec) in [(CodeId::Five, 10, true), (CodeId::Steane, 10, true), (CodeId::Five, 100, false)] {
        let cc = CodeCircuit::build(CodeExperimentSpec { code, m, ec, metric: MetricMode::Overlap }).unwrap();
        let noise = NoiseSpec::Gaussian { sigma: 0.01 };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        g.bench_function(format!("{code}_m{m}_ec{}", u8::from(ec)), |b| {
            b.iter(|| {
                let noisy = inject_noise(&cc.circuit, &noise, &mut rng).unwrap();
                let (s, _) = execute(&noisy, &mut rng).unwrap();
                cc.p_err(&s, &mut rng).unwrap()
            })
        });
        if !ec {
            let tracks = propagate_variances(&cc.core(), 0.01).unwrap();
            let (core, tail) = (cc.core(), cc.tail());
            g.bench_function(format!("{code}_m{m}_approx"), |b| {
                b.iter(|| {
                    let approx = build_approx_circuit(&core, &tail, &tracks, &mut rng).unwrap();
                    let (s, _) = execute(&approx, &mut rng).unwrap();
                    cc.p_err(&s, &mut rng).unwrap()
                })
            });
        }
    }
    g.finish();
}

fn grover_instance(c: &mut Criterion) {
    let mut g = c.benchmark_group("grover_instance");
    for n in [3, 5, 7] {
        let circuit = build_grover(&GroverSpec::new(&"1".repeat(n))).unwrap();
        let noise = NoiseSpec::Pauli { p: 1e-3 };
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| {
                let noisy = inject_noise(&circuit, &noise, &mut rng).unwrap();
                execute(&noisy, &mut rng).unwrap()
            })
        });
    }
    g.finish();
}

criterion_group!(benches, apply_1q, code_instance, grover_instance);
criterion_main!(benches);
