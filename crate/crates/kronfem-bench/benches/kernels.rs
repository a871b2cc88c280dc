//! Benchmarks for the hot paths: subdomain assembly, Kronecker-sum
//! materialization versus matrix-free application, and the two solvers.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use kronfem::{assemble_matrix, unit_square_mesh, Diagonal, FormKind, SolveMethod};
use kronfem_bench::poisson_interval_product;

fn subdomain_assembly(c: &mut Criterion) {
    let mesh = unit_square_mesh(32, 32, Diagonal::Right).unwrap();
    c.bench_function("assemble stiffness 32x32 square", |b| {
        b.iter(|| assemble_matrix(black_box(&mesh), &FormKind::Stiffness).unwrap())
    });
}

fn operator_application(c: &mut Criterion) {
    let assembled = poisson_interval_product(40);
    let operator = &assembled.operator;
    let n = operator.ncols();
    let x: Vec<f64> = (0..n).map(|i| (i as f64 * 0.01).sin()).collect();

    c.bench_function("kron sum materialize 1681 dofs", |b| {
        b.iter(|| operator.materialize().unwrap())
    });
    c.bench_function("matrix-free apply 1681 dofs", |b| {
        b.iter(|| operator.apply(black_box(&x)))
    });
    let materialized = operator.materialize().unwrap();
    c.bench_function("materialized matvec 1681 dofs", |b| {
        b.iter(|| materialized.matvec(black_box(&x)))
    });
}

fn solves(c: &mut Criterion) {
    let assembled = poisson_interval_product(24);
    c.bench_function("direct solve 625 dofs", |b| {
        b.iter(|| assembled.solve(SolveMethod::Direct).unwrap())
    });
    c.bench_function("cg solve 625 dofs", |b| {
        b.iter(|| assembled.solve(SolveMethod::ConjugateGradient).unwrap())
    });
}

criterion_group!(benches, subdomain_assembly, operator_application, solves);
criterion_main!(benches);
