//! Benchmark fixtures.

use jacobi_core::builtin::builtin;
use jacobi_core::random::FieldGen;
use jacobi_core::{Sampler, StructureSet, TensorField};

pub fn structure(name: &str) -> StructureSet {
    builtin(name).expect("known builtin").expect("builtin builds")
}

pub fn sampler(set: &StructureSet) -> Sampler {
    Sampler::new(set.chart.clone())
}

/// `n` seeded random polynomial 1-forms on a `dim`-chart.
pub fn forms(dim: usize, n: usize, seed: u64) -> Vec<TensorField> {
    let mut g = FieldGen::new(dim, seed);
    (0..n).map(|_| g.polynomial_one_form()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        let s = structure("contact-r3");
        assert_eq!(sampler(&s).points().unwrap().len(), 32);
        assert_eq!(forms(3, 4, 1).len(), 4);
    }
}
