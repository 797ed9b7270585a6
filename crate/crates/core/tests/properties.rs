mod common;

use common::*;
use jacobi_core::jacobi::{koszul_bracket, leibniz_defect, sharp_pi, AlgebroidData, JacobiPair};
use jacobi_core::matrix::matrix_inverse;
use jacobi_core::metric::{metric_compatibility_defect, MetricStructure};
use jacobi_core::random::FieldGen;
use jacobi_core::tensor::*;
use jacobi_core::{ContravariantPack, MatrixField, MatrixRole, Sampler, ScalarField};
use proptest::prelude::*;

fn s3() -> Sampler {
    Sampler::new(chart(&["x", "y", "z"])).with_count(12)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn d_squared_vanishes(seed in any::<u64>()) {
        let mut g = FieldGen::new(3, seed);
        let a = g.one_form();
        let dd = exterior_derivative(&exterior_derivative(&a).unwrap()).unwrap();
        prop_assert!(tmax(&dd, &s3()) < 1e-10);
    }

    #[test]
    fn cartan_formula(seed in any::<u64>()) {
        let mut g = FieldGen::new(3, seed);
        let x = g.vector();
        let a = g.two_form();
        let lhs = lie_derivative(&x, &a).unwrap();
        let rhs = interior_product(&x, &exterior_derivative(&a).unwrap()).unwrap()
            .plus(&exterior_derivative(&interior_product(&x, &a).unwrap()).unwrap());
        prop_assert!(tmax(&lhs.minus(&rhs), &s3()) < 1e-9);
    }

    #[test]
    fn wedge_is_graded_commutative(seed in any::<u64>()) {
        let mut g = FieldGen::new(3, seed);
        let (a, b) = (g.one_form(), g.one_form());
        let d = wedge(&a, &b).unwrap().plus(&wedge(&b, &a).unwrap());
        prop_assert!(tmax(&d, &s3()) < 1e-12);
    }

    #[test]
    fn calibration_identity(seed in any::<u64>()) {
        let mut g = FieldGen::new(3, seed);
        let pi = g.polynomial_bivector();
        let (a, b, c) = (g.one_form(), g.one_form(), g.one_form());
        let lhs = c.pair(&sharp_pi(&pi, &koszul_bracket(&pi, &a, &b).unwrap()).unwrap()).unwrap()
            .sub(&c.pair(&lie_bracket(&sharp_pi(&pi, &a).unwrap(), &sharp_pi(&pi, &b).unwrap()).unwrap()).unwrap());
        let rhs = schouten_bb(&pi).unwrap().evaluate(&[&a, &b, &c]).unwrap().half();
        prop_assert!(max(&[lhs.sub(&rhs)], &s3()) < 1e-9);
    }

    #[test]
    fn leibniz_rule(seed in any::<u64>()) {
        let mut g = FieldGen::new(3, seed);
        let pair = JacobiPair::new(g.polynomial_bivector(), g.vector()).unwrap();
        let data = AlgebroidData::new(pair, g.one_form()).unwrap();
        let d = leibniz_defect(&data, &g.one_form(), &g.one_form(), &g.smooth()).unwrap();
        prop_assert!(tmax(&d, &s3()) < 1e-8);
    }

    #[test]
    fn matrix_inverse_is_inverse(seed in any::<u64>()) {
        let mut g = FieldGen::new(3, seed);
        let m = MatrixField::from_fn(3, MatrixRole::General, |i, j| {
            let p = g.polynomial().scale((1, 4).into());
            if i == j { p.add(&ScalarField::int(3)) } else { p }
        });
        let inv = matrix_inverse(&m, &s3()).unwrap();
        let id = MatrixField::identity(3, MatrixRole::General);
        prop_assert!(max(m.mul(&inv).sub(&id).entries(), &s3()) < 1e-9);
    }

    #[test]
    fn contravariant_derivative_is_metric(seed in any::<u64>()) {
        let mut g = FieldGen::new(3, seed);
        let s = s3();
        let diag: Vec<ScalarField> = (0..3)
            .map(|_| {
                let p = g.polynomial();
                p.mul(&p).add(&ScalarField::int(1))
            })
            .collect();
        let m = MetricStructure::new(MatrixField::diagonal(diag, MatrixRole::Metric), &s).unwrap();
        let pair = JacobiPair::new(g.polynomial_bivector(), g.constant_vector()).unwrap();
        let pk = ContravariantPack::new(pair, m).unwrap();
        let d = metric_compatibility_defect(&pk, &g.polynomial_one_form(), &g.polynomial_one_form(), &g.polynomial_one_form()).unwrap();
        prop_assert!(max(&[d], &s) < 1e-8);
    }
}
