//! Evaluating tensorial defects on frames.
//!
//! A tensor vanishes iff all its coordinate components vanish. The random
//! frames add a handful of generic constant arguments on top so that index
//! mix-ups between slots do not cancel out.

use crate::expr::ScalarField;
use crate::matrix::MatrixField;
use crate::random::FieldGen;
use crate::tensor::{TensorField, Variance};

pub const RANDOM_FRAMES: usize = 5;

/// Constant vectors and covectors used as generic tensor arguments.
#[derive(Debug, Clone)]
pub struct Frames {
    dim: usize,
    vectors: Vec<Vec<TensorField>>,
    covectors: Vec<Vec<TensorField>>,
}

impl Frames {
    /// `RANDOM_FRAMES` frames, each with `slots` vectors and covectors.
    pub fn new(dim: usize, slots: usize, seed: u64) -> Self {
        let mut gen = FieldGen::new(dim, seed ^ 0x6672_616d_6573);
        let mut vectors = Vec::new();
        let mut covectors = Vec::new();
        for _ in 0..RANDOM_FRAMES {
            vectors.push((0..slots).map(|_| gen.constant_vector()).collect());
            covectors.push((0..slots).map(|_| gen.constant_one_form()).collect());
        }
        Frames {
            dim,
            vectors,
            covectors,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coordinate components of `t` followed by `t` evaluated on each random
    /// frame. Up slots receive covectors, down slots vectors.
    pub fn tensor_family(&self, t: &TensorField) -> Vec<ScalarField> {
        let mut out = t.components().to_vec();
        for (vs, cs) in self.vectors.iter().zip(&self.covectors) {
            let mut cur = t.clone();
            for (slot, &v) in t.variance().iter().enumerate() {
                let arg = match v {
                    Variance::Down => &vs[slot % vs.len()],
                    Variance::Up => &cs[slot % cs.len()],
                };
                cur = cur.contract_first(arg).expect("frame argument has matching variance");
            }
            out.push(cur.components()[0].clone());
        }
        out
    }

    /// Entries of `m` as a bilinear form on vectors, then `u^T m v` on the
    /// random frames.
    pub fn bilinear_family(&self, m: &MatrixField) -> Vec<ScalarField> {
        self.tensor_family(&m.to_tensor([Variance::Down, Variance::Down]))
    }

    /// Same as `bilinear_family` for a form on covectors.
    pub fn cobilinear_family(&self, m: &MatrixField) -> Vec<ScalarField> {
        self.tensor_family(&m.to_tensor([Variance::Up, Variance::Up]))
    }

    /// An endomorphism `(M X)^i = M_ij X^j`.
    pub fn endomorphism_family(&self, m: &MatrixField) -> Vec<ScalarField> {
        self.tensor_family(&m.to_tensor([Variance::Up, Variance::Down]))
    }
}
