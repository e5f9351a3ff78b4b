//! Benchmarks for the hot paths: normal-order products, syzygy search,
//! the full solve pipeline, and Hilbert-function computation.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use weylq_core::hilbert::hilbert_profile;
use weylq_core::matrix::LinearSystem;
use weylq_core::ore::{syzygy_search, Side};
use weylq_core::solve::decide_solve;
use weylq_core::{
    FieldTag, FractionContext, ModulePresentation, OpMatrix, SolveBudget, VarSet, WeylOp,
};

fn x(i: usize, m: usize) -> WeylOp {
    WeylOp::var_x(i, m, FieldTag::Q)
}

fn d(i: usize, m: usize) -> WeylOp {
    WeylOp::var_d(i, m, FieldTag::Q)
}

fn normal_order_product(c: &mut Criterion) {
    let m = 2;
    let a = d(1, m).add(&x(2, m)).add(&x(1, m).mul(&d(2, m))).pow(3);
    let b = x(1, m).add(&d(2, m)).add(&d(1, m).mul(&x(2, m))).pow(3);
    c.bench_function("normal_order_product_m2_deg6", |bench| {
        bench.iter(|| black_box(&a).mul(black_box(&b)))
    });
}

fn syzygy(c: &mut Criterion) {
    let m = 1;
    let elems = [d(1, m).pow(2), x(1, m).mul(&d(1, m)).add(&x(1, m))];
    let k = VarSet::full(m);
    c.bench_function("syzygy_pair_m1", |bench| {
        bench.iter(|| syzygy_search(black_box(&elems), &k, Side::Right, None).unwrap())
    });
}

fn solve_pipeline(c: &mut Criterion) {
    let m = 1;
    let field = FieldTag::Q;
    let budget = SolveBudget::default();
    // One elimination stage: polynomial denominators only.
    let ctx = FractionContext::new(m, field, VarSet::full(m), VarSet::empty(m)).unwrap();
    let a = OpMatrix::from_rows(vec![vec![x(1, m)]], m, field).unwrap();
    let staged = LinearSystem::new(a, vec![WeylOp::one(m, field)], ctx).unwrap();
    c.bench_function("solve_staged_x_inverse", |bench| {
        bench.iter(|| decide_solve(black_box(&staged), 0, &budget).unwrap())
    });
    // Direct skew-field elimination on a 2x2 system.
    let full = FractionContext::full(m, field);
    let a = OpMatrix::from_rows(
        vec![
            vec![d(1, m), WeylOp::one(m, field)],
            vec![x(1, m), d(1, m)],
        ],
        m,
        field,
    )
    .unwrap();
    let skew = LinearSystem::new(
        a,
        vec![WeylOp::one(m, field), WeylOp::zero(m, field)],
        full,
    )
    .unwrap();
    c.bench_function("solve_skew_2x2", |bench| {
        bench.iter(|| decide_solve(black_box(&skew), 0, &budget).unwrap())
    });
}

fn hilbert(c: &mut Criterion) {
    let m = 2;
    let l = ModulePresentation::new(vec![vec![d(1, m)]], m, FieldTag::Q).unwrap();
    c.bench_function("hilbert_profile_line_z6", |bench| {
        bench.iter(|| hilbert_profile(black_box(&l), 6, 2, 0).unwrap())
    });
}

criterion_group!(
    benches,
    normal_order_product,
    syzygy,
    solve_pipeline,
    hilbert
);
criterion_main!(benches);
