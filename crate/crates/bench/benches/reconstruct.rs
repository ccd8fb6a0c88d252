use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use oweno::claw::ProblemKind;
use oweno::{DoubleDouble, Variant};
use oweno_bench::{kernel, solver, windows};
use std::hint::black_box;

const COUNT: usize = 1024;

fn reconstruct_f64(c: &mut Criterion) {
    let mut g = c.benchmark_group("reconstruct_f64");
    g.throughput(Throughput::Elements(COUNT as u64));
    for r in 3..=6 {
        let data = windows::<f64>(r, COUNT);
        for v in Variant::ALL {
            let k = kernel::<f64>(r, v);
            g.bench_with_input(BenchmarkId::new(v.as_str(), r), &data, |b, data| {
                b.iter(|| data.iter().map(|f| k.reconstruct_value(black_box(f))).sum::<f64>())
            });
        }
    }
    g.finish();
}

fn reconstruct_dd(c: &mut Criterion) {
    let mut g = c.benchmark_group("reconstruct_dd");
    g.throughput(Throughput::Elements(COUNT as u64));
    let data = windows::<DoubleDouble>(3, COUNT);
    for v in Variant::ALL {
        let k = kernel::<DoubleDouble>(3, v);
        g.bench_function(v.as_str(), |b| {
            b.iter(|| {
                for f in &data {
                    black_box(k.reconstruct_value(black_box(f)));
                }
            })
        });
    }
    g.finish();
}

fn spatial_rhs(c: &mut Criterion) {
    let mut g = c.benchmark_group("spatial_rhs");
    for (kind, n) in [(ProblemKind::Burgers, 640), (ProblemKind::ShuOsher, 400)] {
        for v in Variant::ALL {
            let mut s = solver(kind, n, v);
            let u = s.initial_state().u;
            let mut out = vec![0.0; u.len()];
            g.bench_function(BenchmarkId::new(format!("{kind}/{v}"), n), |b| {
                b.iter(|| s.spatial_rhs(black_box(&u), &mut out).unwrap())
            });
        }
    }
    g.finish();
}

criterion_group!(benches, reconstruct_f64, reconstruct_dd, spatial_rhs);
criterion_main!(benches);
