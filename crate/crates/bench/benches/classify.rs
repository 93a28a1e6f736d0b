use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use spin7_core::classify::{find_certificate_in, JordanRepresentative, KernelSpace, YoungDiagram};
use spin7_core::invariant::build_bryant_salamon;
use spin7_core::lie::LieFrame;

fn classify(c: &mut Criterion) {
    let mut g = c.benchmark_group("classify");
    g.sample_size(10);
    for parts in [vec![2, 2, 2, 2], vec![3, 2, 1, 1, 1], vec![8]] {
        let rep = JordanRepresentative::new(&YoungDiagram::new(parts.clone()).unwrap());
        let name = format!("{parts:?}");
        g.bench_function(format!("kernel {name}"), |b| {
            b.iter(|| KernelSpace::compute(black_box(&rep)))
        });
        let kernel = KernelSpace::compute(&rep);
        g.bench_function(format!("certificate {name}"), |b| {
            b.iter(|| find_certificate_in(black_box(&rep), &kernel))
        });
    }
    g.finish();
    let frame = LieFrame::connection();
    let phi = build_bryant_salamon().phi;
    c.bench_function("d phi", |b| b.iter(|| black_box(&phi).d(&frame)));
}

criterion_group!(benches, classify);
criterion_main!(benches);
