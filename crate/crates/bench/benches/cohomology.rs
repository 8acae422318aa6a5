use criterion::{criterion_group, criterion_main, Criterion};
use gfsuper_core::algebras::{gl, vect_truncated, SuperModule};
use gfsuper_core::cohomology::{ce_complex, gl_coefficient_cohomology, vfield_cohomology, ComplexOptions, WeightFilter};

fn vector_fields(c: &mut Criterion) {
    let mut group = c.benchmark_group("vfield");
    group.sample_size(10);
    group.bench_function("V(1,1) to degree 4", |b| b.iter(|| vfield_cohomology(1, 1, 4).unwrap()));
    group.bench_function("V(1,2) to degree 4", |b| b.iter(|| vfield_cohomology(1, 2, 4).unwrap()));
    group.bench_function("V(2,0) to degree 5", |b| b.iter(|| vfield_cohomology(2, 0, 5).unwrap()));
    group.finish();
}

fn coefficients(c: &mut Criterion) {
    let mut group = c.benchmark_group("gl");
    group.sample_size(10);
    let lambda = "2,1".parse().unwrap();
    group.bench_function("gl(2,1) Δ^(2,1) to degree 4", |b| {
        b.iter(|| gl_coefficient_cohomology(2, &lambda, 4).unwrap())
    });
    group.finish();
}

fn assembly_and_rank(c: &mut Criterion) {
    let g = vect_truncated(2, 1, 4).unwrap();
    let k = SuperModule::trivial(&g);
    let filter = WeightFilter::zero(&g);
    let opts = ComplexOptions::default();
    c.bench_function("assemble V(2,1) weight 0 to degree 4", |b| {
        b.iter(|| ce_complex(&g, &k, 4, &filter, &opts).unwrap())
    });
    let complex = ce_complex(&g, &k, 4, &filter, &opts).unwrap();
    let d = complex.differential(3, &[0, 0, 0]).unwrap().clone();
    c.bench_function("rank of d_3 on V(2,1) weight 0", |b| b.iter(|| d.rank()));
    let g = gl(2, 2).unwrap();
    let k = SuperModule::trivial(&g);
    c.bench_function("assemble gl(2,2) to degree 3", |b| {
        b.iter(|| ce_complex(&g, &k, 3, &WeightFilter::All, &opts).unwrap())
    });
}

criterion_group!(benches, vector_fields, coefficients, assembly_and_rank);
criterion_main!(benches);
