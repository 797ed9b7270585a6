use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use jacobi_bench::{forms, sampler, structure};
use jacobi_core::contact_lcs::{contact_jacobi, ContactStructure};
use jacobi_core::defect::max_defect;
use jacobi_core::jacobi::jacobi_defect;
use jacobi_core::metric::{christoffel, contravariant_d};
use jacobi_core::{parse_scalar, ContravariantPack};

fn parse(c: &mut Criterion) {
    let set = structure("lcs-r4");
    c.bench_function("parse_scalar", |b| {
        b.iter(|| parse_scalar(black_box("exp(-x) * (1 + y^2) - sin(u*v) / (2 + x^2)"), &set.chart).unwrap())
    });
}

fn contact_pipeline(c: &mut Criterion) {
    let set = structure("contact-r3");
    let s = sampler(&set);
    let ct = ContactStructure::new(set.tensor("eta").unwrap().clone()).unwrap();
    c.bench_function("contact_jacobi_defect", |b| {
        b.iter(|| {
            let pair = contact_jacobi(&ct, &s).unwrap();
            let (first, second) = jacobi_defect(&pair).unwrap();
            let mut fields = first.components().to_vec();
            fields.extend_from_slice(second.components());
            max_defect(&fields, &s).unwrap()
        })
    });
}

fn connection(c: &mut Criterion) {
    let set = structure("lcs-r4");
    let s = sampler(&set);
    let m = set.metric(&s).unwrap().unwrap();
    c.bench_function("christoffel_r4", |b| b.iter(|| christoffel(black_box(&m))));

    let (pair, _) = set.jacobi_pair(&s).unwrap().unwrap();
    let pack = ContravariantPack::new(pair, m).unwrap();
    let f = forms(4, 2, 7);
    c.bench_function("contravariant_d_r4", |b| {
        b.iter(|| {
            let d = contravariant_d(&pack, &f[0], &f[1]).unwrap();
            max_defect(d.components(), &s).unwrap()
        })
    });
}

criterion_group!(benches, parse, contact_pipeline, connection);
criterion_main!(benches);
