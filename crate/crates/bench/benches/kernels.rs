use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nff_bench::{reference_array, LAMBDA};
use nff_core::{focal_width, j0, Axis, FocalSpec, FocusedArray, GridSpec, Point2};

fn field_point(c: &mut Criterion) {
    let set = reference_array();
    let f = FocusedArray::new(&set, FocalSpec::new(0.3, 0.1)).unwrap();
    c.bench_function("field_at/n120", |b| {
        b.iter(|| f.field_at(black_box(Point2::new(0.21, -0.05))).unwrap())
    });
}

fn field_raster(c: &mut Criterion) {
    let set = reference_array();
    let f = FocusedArray::new(&set, FocalSpec::CENTER).unwrap();
    let mut g = c.benchmark_group("field_map");
    g.sample_size(10);
    for div in [5.0, 10.0] {
        let grid = GridSpec::covering_disc(1.5, LAMBDA / div);
        g.bench_with_input(BenchmarkId::from_parameter(grid.len()), &grid, |b, grid| {
            b.iter(|| f.map(*grid).unwrap())
        });
    }
    g.finish();
}

fn width(c: &mut Criterion) {
    let set = reference_array();
    let f = FocusedArray::new(&set, FocalSpec::on_x_axis(0.6)).unwrap();
    c.bench_function("focal_width/x", |b| {
        b.iter(|| focal_width(&f, Axis::X, LAMBDA / 50.0).unwrap())
    });
}

fn bessel(c: &mut Criterion) {
    let mut g = c.benchmark_group("j0");
    // one argument per branch
    for x in [3.0, 15.0, 60.0] {
        g.bench_with_input(BenchmarkId::from_parameter(x), &x, |b, &x| {
            b.iter(|| j0(black_box(x)).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, field_point, field_raster, width, bessel);
criterion_main!(benches);
