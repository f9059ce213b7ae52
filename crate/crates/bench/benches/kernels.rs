use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use modata::galois::parity_decompose;
use modata::lambda::lambda_hat;
use modata::modrep::{rep_evaluate, sample_sl2z, Lcg};
use modata::modular_data::builtin_model;
use modata::{rat, CycloNum};

fn cyclo_mul(c: &mut Criterion) {
    for m in [24u32, 60, 120] {
        let a = CycloNum::make(
            m,
            &[(1, rat(1, 2)), (7, rat(-3, 1)), (m as i64 / 3, rat(2, 5))],
        );
        let b = CycloNum::make(m, &[(2, rat(5, 1)), (11, rat(1, 7))]);
        c.bench_function(&format!("cyclo mul M={m}"), |bch| {
            bch.iter(|| black_box(&a) * black_box(&b))
        });
    }
}

fn representation(c: &mut Criterion) {
    let md = builtin_model("su2:3").unwrap();
    let mut rng = Lcg::new(3);
    let m = sample_sl2z(1000, &mut rng);
    c.bench_function("rep_evaluate su2(3)", |b| {
        b.iter(|| rep_evaluate(&md, black_box(&m)))
    });
}

fn lambda(c: &mut Criterion) {
    let md = builtin_model("su2:2").unwrap();
    let r = rat(3, 7);
    c.bench_function("lambda_hat su2(2) r=3/7", |b| {
        b.iter(|| lambda_hat(&md, md.c(), black_box(&r)).unwrap())
    });
}

fn galois(c: &mut Criterion) {
    let md = builtin_model("su2:4").unwrap();
    c.bench_function("parity_decompose su2(4) l=5", |b| {
        b.iter(|| parity_decompose(&md, black_box(5)).unwrap())
    });
}

criterion_group!(benches, cyclo_mul, representation, lambda, galois);
criterion_main!(benches);
