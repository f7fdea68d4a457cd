use criterion::{black_box, criterion_group, criterion_main, Criterion};
use thurston_core::complex::Hierarchy;
use thurston_core::measure::{backward_orbit_counts, generic_point, mome, preimage_measure};
use thurston_core::periodic::enumerate_fixed_points;
use thurston_core::rulekit::bundled;
use thurston_core::Color;

fn hier(name: &str, level: u32) -> Hierarchy {
    let mut h = Hierarchy::new(bundled(name).unwrap()).unwrap();
    h.ensure(level).unwrap();
    h
}

fn fixed_points(c: &mut Criterion) {
    let mut g = c.benchmark_group("fixed_points");
    g.sample_size(10);
    let base = hier("lattes2x2", 4);
    g.bench_function("lattes2x2/4", |b| {
        b.iter(|| black_box(enumerate_fixed_points(&mut base.clone(), 4, 32).unwrap().total_weight()))
    });
    g.finish();
}

fn measures(c: &mut Criterion) {
    let mut h = hier("lattes3x3", 2);
    let z = generic_point(&mut h, Color::White, 32).unwrap();
    c.bench_function("mome/lattes3x3/2", |b| b.iter(|| black_box(mome(&h, 2).unwrap())));
    c.bench_function("preimage_measure/lattes3x3/i3", |b| b.iter(|| black_box(preimage_measure(&h, &z, 3, true))));
    c.bench_function("sampler/lattes3x3/10k", |b| {
        b.iter(|| black_box(backward_orbit_counts(&h, &z, 10_000, 1, 1, &[]).unwrap()))
    });
}

criterion_group!(benches, fixed_points, measures);
criterion_main!(benches);
