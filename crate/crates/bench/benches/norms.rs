use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use microlocal_core::analysis::{littlewood_paley, peetre_maximal};
use microlocal_core::lebesgue::norm;
use microlocal_core::spaces::{Corpus, ExponentRecipe};
use microlocal_core::{quasi_norm, Grid, GridFunction, Scale, SpaceRecipe, VariableExponent};

fn signal(g: Grid) -> GridFunction {
    GridFunction::from_real_fn(g, |x| (2.0 * PI * 5.0 * x[0]).sin() + 0.3 * (2.0 * PI * 40.0 * x[0]).cos())
}

fn variable(scale: Scale) -> SpaceRecipe {
    SpaceRecipe {
        p: ExponentRecipe::Function(std::sync::Arc::new(|x: [f64; 2]| 2.0 + 0.5 * (2.0 * PI * x[0]).sin())),
        q: ExponentRecipe::Function(std::sync::Arc::new(|x: [f64; 2]| 1.5 + 0.5 * (2.0 * PI * x[0]).cos())),
        ..SpaceRecipe::classical(scale, 2.0, 2.0, 0.5)
    }
}

fn luxemburg(c: &mut Criterion) {
    let mut group = c.benchmark_group("luxemburg_norm");
    for n in [256, 1024, 4096] {
        let g = Grid::one_d(n).unwrap();
        let f = signal(g);
        let p = VariableExponent::from_fn(g, |x| 1.5 + (2.0 * PI * x[0]).sin().abs()).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| b.iter(|| norm(black_box(&f), &p).unwrap()));
    }
    group.finish();
}

fn quasi_norms(c: &mut Criterion) {
    let mut group = c.benchmark_group("quasi_norm");
    group.sample_size(20);
    let g = Grid::one_d(256).unwrap();
    let f = signal(g);
    for scale in [Scale::B, Scale::F] {
        let spec = variable(scale).build(g).unwrap();
        group.bench_function(format!("{scale}_variable_256"), |b| b.iter(|| quasi_norm(black_box(&f), &spec).unwrap()));
    }
    let g2 = Grid::two_d(64).unwrap();
    let f2 = Corpus::standard(2).functions()[0].sample(g2);
    let spec2 = SpaceRecipe::classical(Scale::F, 2.0, 2.0, 1.0).build(g2).unwrap();
    group.bench_function("F_classical_64x64", |b| b.iter(|| quasi_norm(black_box(&f2), &spec2).unwrap()));
    group.finish();
}

fn peetre(c: &mut Criterion) {
    let g = Grid::one_d(256).unwrap();
    let spec = variable(Scale::B).build(g).unwrap();
    let blocks = littlewood_paley(&signal(g), spec.system()).unwrap();
    c.bench_function("peetre_maximal_256", |b| b.iter(|| peetre_maximal(black_box(&blocks), 3.0).unwrap()));
}

criterion_group!(benches, luxemburg, quasi_norms, peetre);
criterion_main!(benches);
