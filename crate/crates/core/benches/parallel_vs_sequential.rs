use std::hint::black_box;

use burgers_poles::colehopf::{evaluate_u, EvalOptions};
use burgers_poles::parallel::{is_parallel, map_slice};
use burgers_poles::{build_grid, Grid2D, C64};
use criterion::{criterion_group, criterion_main, Criterion};

fn grid_points() -> Vec<C64> {
    build_grid(&Grid2D::new((0.0, 3.0), (0.0, 3.0), 24, 24).unwrap()).unwrap()
}

fn exact_grid(c: &mut Criterion) {
    let pts = grid_points();
    let opts = EvalOptions::default();
    let eval = |z: &C64| evaluate_u(*z, 1.0, 0.1, &opts).ok();
    let mut g = c.benchmark_group(format!("exact_grid_576 (parallel feature: {})", is_parallel()));
    g.sample_size(10);
    g.bench_function("map_slice", |b| b.iter(|| black_box(map_slice(&pts, eval))));
    g.bench_function("sequential", |b| b.iter(|| black_box(pts.iter().map(eval).collect::<Vec<_>>())));
    g.finish();
}

fn realline_snapshots(c: &mut Criterion) {
    use burgers_poles::realline::{solve_spectral, SolveConfig};
    let cfg = SolveConfig { t_final: 1.0, snapshots: 101, ..SolveConfig::default() };
    let fields = solve_spectral(0.1, &cfg).unwrap();
    let mut g = c.benchmark_group("max_slope_101_snapshots");
    g.sample_size(10);
    g.bench_function("map_slice", |b| b.iter(|| black_box(map_slice(&fields, |f| f.max_abs_slope()))));
    g.bench_function("sequential", |b| b.iter(|| black_box(fields.iter().map(|f| f.max_abs_slope()).collect::<Vec<_>>())));
    g.finish();
}

criterion_group!(benches, exact_grid, realline_snapshots);
criterion_main!(benches);
