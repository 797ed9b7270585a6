#![allow(dead_code)]

use jacobi_core::builtin::builtin;
use jacobi_core::defect::max_defect;
use jacobi_core::random::FieldGen;
use jacobi_core::{parse_scalar, Chart, Sampler, ScalarField, StructureSet, TensorField};

pub fn set(name: &str) -> StructureSet {
    builtin(name).unwrap().unwrap()
}

pub fn sampler(s: &StructureSet) -> Sampler {
    Sampler::new(s.chart.clone())
}

pub fn chart(coords: &[&str]) -> Chart {
    Chart::new(coords).unwrap()
}

pub fn f(c: &Chart, src: &str) -> ScalarField {
    parse_scalar(src, c).unwrap()
}

pub fn form(c: &Chart, comps: &[&str]) -> TensorField {
    TensorField::one_form(comps.iter().map(|s| f(c, s)).collect())
}

pub fn vect(c: &Chart, comps: &[&str]) -> TensorField {
    TensorField::vector(comps.iter().map(|s| f(c, s)).collect())
}

pub fn max(fields: &[ScalarField], s: &Sampler) -> f64 {
    max_defect(fields, s).unwrap()
}

pub fn tmax(t: &TensorField, s: &Sampler) -> f64 {
    max(t.components(), s)
}

pub fn gen(dim: usize, seed: u64) -> FieldGen {
    FieldGen::new(dim, seed)
}
