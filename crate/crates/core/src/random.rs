//! Seeded generators for random test fields.
//!
//! Identities are quantified over random inputs: low-degree polynomials with
//! small rational coefficients, occasionally wrapped in `sin`/`exp` so that
//! non-polynomial derivative rules get exercised too.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::ScalarField;
use crate::tensor::{TensorField, Variance};

pub struct FieldGen {
    dim: usize,
    rng: ChaCha8Rng,
}

impl FieldGen {
    pub fn new(dim: usize, seed: u64) -> Self {
        FieldGen {
            dim,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn coeff(&mut self) -> ScalarField {
        let n = self.rng.gen_range(-4..=4);
        let d = self.rng.gen_range(1..=3);
        ScalarField::ratio(n, d)
    }

    /// Polynomial of total degree at most 2.
    pub fn polynomial(&mut self) -> ScalarField {
        let mut acc = self.coeff();
        for i in 0..self.dim {
            if self.rng.gen_bool(0.6) {
                acc = acc.add(&self.coeff().mul(&ScalarField::var(i)));
            }
            for j in i..self.dim {
                if self.rng.gen_bool(0.25) {
                    let m = ScalarField::var(i).mul(&ScalarField::var(j));
                    acc = acc.add(&self.coeff().mul(&m));
                }
            }
        }
        acc
    }

    /// Polynomial, sometimes multiplied by a transcendental factor.
    pub fn smooth(&mut self) -> ScalarField {
        let p = self.polynomial();
        match self.rng.gen_range(0..4) {
            0 => {
                let i = self.rng.gen_range(0..self.dim);
                p.mul(&ScalarField::var(i).half().sin())
            }
            1 => {
                let i = self.rng.gen_range(0..self.dim);
                p.add(&ScalarField::var(i).half().exp())
            }
            _ => p,
        }
    }

    /// Random rational constant in `[-2, 2]` with small denominator.
    pub fn constant(&mut self) -> ScalarField {
        let n = self.rng.gen_range(-6..=6);
        let d = self.rng.gen_range(1..=3);
        ScalarField::ratio(n, d)
    }

    pub fn one_form(&mut self) -> TensorField {
        TensorField::one_form((0..self.dim).map(|_| self.smooth()).collect())
    }

    pub fn polynomial_one_form(&mut self) -> TensorField {
        TensorField::one_form((0..self.dim).map(|_| self.polynomial()).collect())
    }

    pub fn vector(&mut self) -> TensorField {
        TensorField::vector((0..self.dim).map(|_| self.smooth()).collect())
    }

    pub fn constant_vector(&mut self) -> TensorField {
        TensorField::vector((0..self.dim).map(|_| self.constant()).collect())
    }

    pub fn constant_one_form(&mut self) -> TensorField {
        TensorField::one_form((0..self.dim).map(|_| self.constant()).collect())
    }

    fn skew2(&mut self, v: Variance, poly_only: bool) -> TensorField {
        TensorField::skew_from_fn(self.dim, vec![v, v], |_| {
            if poly_only {
                self.polynomial()
            } else {
                self.smooth()
            }
        })
    }

    pub fn bivector(&mut self) -> TensorField {
        self.skew2(Variance::Up, false)
    }

    pub fn polynomial_bivector(&mut self) -> TensorField {
        self.skew2(Variance::Up, true)
    }

    pub fn two_form(&mut self) -> TensorField {
        self.skew2(Variance::Down, false)
    }
}
