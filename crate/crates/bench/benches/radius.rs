use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use qradius_core::bounds::{theorem_bounds, BoundsConfig};
use qradius_core::qrange::{estimate_radius, exact_2x2, sample_oracle, trace_boundary};
use qradius_core::{AscentConfig, ComplexMatrix, Family, QParameter, StructuredSpec, C64};

/// Fixed non-normal test matrix; no RNG so runs compare across commits.
fn matrix(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |r, c| {
        let t = (1 + r * n + c) as f64;
        C64::new((1.3 * t).sin(), (0.7 * t).cos()) * (1.0 / n as f64)
    })
}

fn radius(c: &mut Criterion) {
    let qp = QParameter::real(0.6).unwrap();
    let mut g = c.benchmark_group("estimate_radius");
    for n in [2, 4, 8, 16] {
        let a = matrix(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| {
            b.iter(|| estimate_radius(black_box(a), &qp, &AscentConfig::default()).unwrap())
        });
    }
    g.finish();
    c.bench_function("exact_2x2", |b| b.iter(|| exact_2x2(black_box(&matrix(2)), &qp).unwrap()));
    c.bench_function("sample_oracle/4x4/10k", |b| b.iter(|| sample_oracle(black_box(&matrix(4)), &qp, 10_000, 1).unwrap()));
}

fn boundary(c: &mut Criterion) {
    let qp = QParameter::real(0.5).unwrap();
    let cfg = AscentConfig::default().with_restarts(16);
    let mut g = c.benchmark_group("trace_boundary");
    g.sample_size(10);
    for angles in [90, 360] {
        g.bench_with_input(BenchmarkId::new("4x4", angles), &angles, |b, &k| {
            b.iter(|| trace_boundary(black_box(&matrix(4)), &qp, k, &cfg).unwrap())
        });
    }
    g.finish();
}

fn bounds(c: &mut Criterion) {
    let qp = QParameter::real(0.5).unwrap();
    let blocks: Vec<ComplexMatrix> = (0..4).map(|k| matrix(2).scale(C64::new(1.0, k as f64 * 0.1))).collect();
    let spec = StructuredSpec::new(Family::Circulant, 4, blocks).unwrap();
    let mut g = c.benchmark_group("theorem_bounds");
    g.sample_size(20);
    g.bench_function("circulant/n4/d2", |b| b.iter(|| theorem_bounds(black_box(&spec), &qp, &BoundsConfig::default()).unwrap()));
    g.finish();
}

criterion_group!(benches, radius, boundary, bounds);
criterion_main!(benches);
