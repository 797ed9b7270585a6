mod common;

use common::*;
use jacobi_core::contact_lcs::{contact_jacobi, ContactStructure};
use jacobi_core::jacobi::*;
use jacobi_core::tensor::{lie_bracket, schouten_bb, wedge};
use jacobi_core::{Sampler, TensorField, Variance};

fn contact() -> (ContactStructure, Sampler) {
    let s = set("contact-r3");
    let c = ContactStructure::new(s.tensor("eta").unwrap().clone()).unwrap();
    (c, sampler(&s))
}

#[test]
fn sharp_examples() {
    let c = chart(&["x", "y"]);
    let s = Sampler::new(c.clone());
    let pi = set("poisson-r2").tensor("pi").unwrap().clone();
    let sharp = sharp_pi(&pi, &form(&c, &["1", "0"])).unwrap();
    assert!(tmax(&sharp.minus(&vect(&c, &["0", "1"])), &s) == 0.0);
    let zero = TensorField::zero(2, vec![Variance::Up; 2], true);
    assert!(tmax(&sharp_pi(&zero, &form(&c, &["x", "y"])).unwrap(), &s) == 0.0);

    let (ct, s3) = contact();
    let pair = contact_jacobi(&ct, &s3).unwrap();
    let c3 = chart(&["x", "y", "z"]);
    let dz = form(&c3, &["0", "0", "1"]);
    let v = sharp_pi(&pair.pi, &dz).unwrap();
    assert!(tmax(&v.minus(&vect(&c3, &["0", "y", "0"])), &s3) < 1e-12);
    let anchored = sharp_pi_xi(&pair, &ct.eta).unwrap();
    assert!(tmax(&anchored.minus(&pair.xi), &s3) < 1e-12);
}

#[test]
fn koszul_examples() {
    let c = chart(&["x", "y", "z"]);
    let s = Sampler::new(c.clone());
    let pi = TensorField::skew_from_entries(3, vec![Variance::Up; 2], &[(vec![0, 1], f(&c, "z"))]).unwrap();
    let b = koszul_bracket(&pi, &form(&c, &["1", "0", "0"]), &form(&c, &["0", "1", "0"])).unwrap();
    assert!(tmax(&b.minus(&form(&c, &["0", "0", "1"])), &s) < 1e-12);

    let c2 = chart(&["x", "y"]);
    let s2 = Sampler::new(c2.clone());
    let pi2 = set("poisson-r2").tensor("pi").unwrap().clone();
    let b = koszul_bracket(&pi2, &form(&c2, &["1", "0"]), &form(&c2, &["0", "x"])).unwrap();
    assert!(tmax(&b, &s2) < 1e-12);
}

#[test]
fn lambda_bracket_examples() {
    let (ct, s) = contact();
    let pair = contact_jacobi(&ct, &s).unwrap();
    let data = AlgebroidData::new(pair, ct.eta.clone()).unwrap();
    assert!(tmax(&data.bracket(&ct.eta, &ct.eta).unwrap(), &s) < 1e-12);
    let c = chart(&["x", "y", "z"]);
    let b = data.bracket(&form(&c, &["1", "0", "0"]), &form(&c, &["0", "0", "1"])).unwrap();
    assert!(tmax(&b.minus(&form(&c, &["1", "0", "0"])), &s) < 1e-12);
}

#[test]
fn lambda_bracket_reduces_to_koszul_without_xi() {
    let c = chart(&["x", "y", "z"]);
    let s = Sampler::new(c);
    let mut g = gen(3, 3);
    let pi = g.polynomial_bivector();
    let data = AlgebroidData::with_zero_lambda(JacobiPair::poisson(pi.clone()).unwrap());
    let (a, b) = (g.one_form(), g.one_form());
    let d = data.bracket(&a, &b).unwrap().minus(&koszul_bracket(&pi, &a, &b).unwrap());
    assert!(tmax(&d, &s) < 1e-10);
}

#[test]
fn brackets_are_antisymmetric_and_leibniz() {
    let c = chart(&["x", "y", "z"]);
    let s = Sampler::new(c);
    let mut g = gen(3, 17);
    for _ in 0..3 {
        let pair = JacobiPair::new(g.polynomial_bivector(), g.vector()).unwrap();
        let data = AlgebroidData::new(pair, g.one_form()).unwrap();
        let (a, b) = (g.one_form(), g.one_form());
        let phi = g.smooth();
        let anti = data.bracket(&a, &b).unwrap().plus(&data.bracket(&b, &a).unwrap());
        assert!(tmax(&anti, &s) < 1e-9);
        assert!(tmax(&leibniz_defect(&data, &a, &b, &phi).unwrap(), &s) < 1e-8);
    }
}

#[test]
fn calibration_identity_pins_schouten_convention() {
    for dim in [3usize, 4] {
        let coords = ["x", "y", "z", "w"];
        let s = Sampler::new(chart(&coords[..dim]));
        let mut g = gen(dim, 100 + dim as u64);
        for _ in 0..5 {
            let pi = g.polynomial_bivector();
            let (a, b, c) = (g.one_form(), g.one_form(), g.one_form());
            let lhs = c
                .pair(&sharp_pi(&pi, &koszul_bracket(&pi, &a, &b).unwrap()).unwrap())
                .unwrap()
                .sub(&c.pair(&lie_bracket(&sharp_pi(&pi, &a).unwrap(), &sharp_pi(&pi, &b).unwrap()).unwrap()).unwrap());
            let rhs = schouten_bb(&pi).unwrap().evaluate(&[&a, &b, &c]).unwrap().half();
            assert!(max(&[lhs.sub(&rhs)], &s) < 1e-9);
        }
    }
}

#[test]
fn jacobi_defect_examples() {
    let (ct, s) = contact();
    let pair = contact_jacobi(&ct, &s).unwrap();
    let (a, b) = jacobi_defect(&pair).unwrap();
    assert!(tmax(&a, &s) < 1e-12 && tmax(&b, &s) < 1e-12);

    let p = set("poisson-r2");
    let pair = JacobiPair::poisson(p.tensor("pi").unwrap().clone()).unwrap();
    let (a, b) = jacobi_defect(&pair).unwrap();
    assert!(tmax(&a, &sampler(&p)) == 0.0 && tmax(&b, &sampler(&p)) == 0.0);

    let c = chart(&["x", "y", "t"]);
    let s = Sampler::new(c.clone());
    let pi = TensorField::skew_from_entries(3, vec![Variance::Up; 2], &[(vec![0, 1], f(&c, "-exp(-t)"))]).unwrap();
    let xi = vect(&c, &["0", "0", "1"]);
    assert!(tmax(&schouten_bb(&pi).unwrap(), &s) < 1e-12);
    assert!(tmax(&wedge(&xi, &pi).unwrap(), &s) > 0.1);
    let (a, _) = jacobi_defect(&JacobiPair::new(pi, xi).unwrap()).unwrap();
    assert!(tmax(&a, &s) > 0.1);
}

#[test]
fn torsion_theorem_and_corollary_on_contact() {
    let (ct, s) = contact();
    let pair = contact_jacobi(&ct, &s).unwrap();
    let c = chart(&["x", "y", "z"]);
    let mut g = gen(3, 23);
    let lambdas = [ct.eta.clone(), form(&c, &["0", "x", "0"]), form(&c, &["0", "0", "0"])];
    for (k, lambda) in lambdas.iter().enumerate() {
        let data = AlgebroidData::new(pair.clone(), lambda.clone()).unwrap();
        let mut d1 = 0.0f64;
        for _ in 0..3 {
            let t = torsion_defect(&data, &g.one_form(), &g.one_form()).unwrap();
            assert!(tmax(&t.d2, &s) < 1e-9, "lambda #{k}");
            d1 = d1.max(tmax(&t.d1, &s));
        }
        if k == 0 {
            assert!(d1 < 1e-9);
        } else {
            assert!(d1 > 1e-3);
        }
    }
}

#[test]
fn jacobiator_vanishes_for_lie_algebroids_only() {
    let (ct, s) = contact();
    let pair = contact_jacobi(&ct, &s).unwrap();
    let data = AlgebroidData::new(pair, ct.eta.clone()).unwrap();
    let mut g = gen(3, 29);
    for _ in 0..2 {
        let j = jacobiator_defect(&data, &g.polynomial_one_form(), &g.polynomial_one_form(), &g.polynomial_one_form()).unwrap();
        assert!(tmax(&j, &s) < 1e-8);
    }

    let v = set("jacobi-violate-r3");
    let pair = JacobiPair::new(v.tensor("pi").unwrap().clone(), v.tensor("xi").unwrap().clone()).unwrap();
    let data = AlgebroidData::with_zero_lambda(pair);
    let j = jacobiator_defect(&data, &g.polynomial_one_form(), &g.polynomial_one_form(), &g.polynomial_one_form()).unwrap();
    assert!(tmax(&j, &sampler(&v)) > 1e-3);
}

#[test]
fn poisson_exact_forms_close_jacobiator() {
    let p = set("poisson-r2");
    let s = sampler(&p);
    let data = AlgebroidData::with_zero_lambda(JacobiPair::poisson(p.tensor("pi").unwrap().clone()).unwrap());
    let c = chart(&["x", "y"]);
    let df = |src: &str| {
        let h = f(&c, src);
        TensorField::one_form((0..2).map(|i| h.partial(i)).collect())
    };
    let j = jacobiator_defect(&data, &df("x*y"), &df("x^2 + y"), &df("sin(x) * y")).unwrap();
    assert!(tmax(&j, &s) < 1e-10);
}
