use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lipdense::bernstein::bernstein_density_check_with;
use lipdense::cone::little_approx_sequence_at;
use lipdense::fejer::{fejer_density_check_with, TorusFunction, TorusGrid};
use lipdense::lip::{lip_constant_with, SampledFunction};
use lipdense::metric::{coordinate_matrix, CoordMetric};
use lipdense::{Execution, PointedMetricSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn plane(n: usize, seed: u64) -> (PointedMetricSpace, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords: Vec<Vec<f64>> = (0..n).map(|_| vec![rng.gen(), rng.gen()]).collect();
    let labels = (0..n).map(|i| format!("p{i}")).collect();
    let space = PointedMetricSpace::new(labels, coordinate_matrix(&coords, CoordMetric::Euclidean).unwrap(), 0).unwrap();
    let mut values: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    values[0] = 0.0;
    (space, values)
}

fn lip_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("lip_constant");
    for n in [256, 1024, 2048] {
        let (space, values) = plane(n, n as u64);
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, _| {
                b.iter(|| lip_constant_with(black_box(&space), black_box(&values), exec))
            });
        }
    }
    group.finish();
}

fn cone_sequence(c: &mut Criterion) {
    let mut group = c.benchmark_group("cone_sequence");
    group.sample_size(10);
    let indices: Vec<usize> = (1..=8).collect();
    for n in [64, 256] {
        let (space, values) = plane(n, 7 + n as u64);
        let f = SampledFunction::new(&space, values).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, _| {
                b.iter(|| little_approx_sequence_at(black_box(&f), 0.5, &indices, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn bernstein_check(c: &mut Criterion) {
    let mut group = c.benchmark_group("bernstein_check");
    group.sample_size(10);
    let f = |x: f64| x.sqrt();
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| bernstein_density_check_with(&f, 0.5, 256, &[4, 16, 64, 256], exec).unwrap())
        });
    }
    group.finish();
}

fn fejer_check(c: &mut Criterion) {
    let mut group = c.benchmark_group("fejer_check");
    group.sample_size(10);
    let grid = TorusGrid::new(512).unwrap();
    let samples = TorusFunction::DistToZero(0.5).sample_unit_ball(grid, 0.5).unwrap();
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| fejer_density_check_with(&samples, 0.5, &[4, 16, 64, 256], exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, lip_scan, cone_sequence, bernstein_check, fejer_check);
criterion_main!(benches);
