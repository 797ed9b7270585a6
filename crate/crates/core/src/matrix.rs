//! Square matrices of scalar fields and their symbolic inverses.

use std::collections::HashMap;

use crate::chart::Sampler;
use crate::defect::{evaluate_fields, DefectError};
use crate::expr::ScalarField;
use crate::tensor::{TensorError, TensorField, Variance};

/// What a matrix represents; only used for bookkeeping and messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixRole {
    Metric,
    TwoFormFlat,
    Endomorphism,
    General,
}

/// Determinants smaller than this at a sample point count as singular.
pub const SINGULAR_DET: f64 = 1e-12;

#[derive(Debug, Clone, thiserror::Error)]
pub enum MatrixError {
    #[error("{role:?} matrix is singular at {point:?} (det = {det:e})")]
    Singular {
        role: MatrixRole,
        point: Vec<f64>,
        det: f64,
    },
    #[error(transparent)]
    Defect(#[from] DefectError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

#[derive(Debug, Clone)]
pub struct MatrixField {
    n: usize,
    entries: Vec<ScalarField>,
    pub role: MatrixRole,
}

impl MatrixField {
    pub fn from_rows(rows: Vec<Vec<ScalarField>>, role: MatrixRole) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        MatrixField {
            n,
            entries: rows.into_iter().flatten().collect(),
            role,
        }
    }

    pub fn from_fn(n: usize, role: MatrixRole, mut f: impl FnMut(usize, usize) -> ScalarField) -> Self {
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        MatrixField { n, entries, role }
    }

    pub fn identity(n: usize, role: MatrixRole) -> Self {
        Self::from_fn(n, role, |i, j| {
            if i == j {
                ScalarField::one()
            } else {
                ScalarField::zero()
            }
        })
    }

    pub fn diagonal(diag: Vec<ScalarField>, role: MatrixRole) -> Self {
        let n = diag.len();
        Self::from_fn(n, role, |i, j| {
            if i == j {
                diag[i].clone()
            } else {
                ScalarField::zero()
            }
        })
    }

    /// Components of a rank-two tensor, row index = first slot.
    pub fn from_tensor(t: &TensorField, role: MatrixRole) -> Result<Self, TensorError> {
        if t.rank() != 2 {
            return Err(TensorError::Shape {
                expected: "rank-2 tensor".into(),
                got: format!("rank {}", t.rank()),
            });
        }
        Ok(Self::from_fn(t.dim(), role, |i, j| t.get(&[i, j]).clone()))
    }

    /// Reinterprets the matrix as a rank-two tensor with the given slots.
    pub fn to_tensor(&self, variance: [Variance; 2]) -> TensorField {
        TensorField::from_fn(self.n, variance.to_vec(), |w| self.get(w[0], w[1]).clone())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &ScalarField {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[ScalarField] {
        &self.entries
    }

    pub fn with_role(mut self, role: MatrixRole) -> Self {
        self.role = role;
        self
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, self.role, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &MatrixField) -> Self {
        assert_eq!(self.n, other.n);
        Self::from_fn(self.n, self.role, |i, j| {
            ScalarField::dot((0..self.n).map(|k| (self.get(i, k), other.get(k, j))))
        })
    }

    pub fn add(&self, other: &MatrixField) -> Self {
        assert_eq!(self.n, other.n);
        Self::from_fn(self.n, self.role, |i, j| self.get(i, j).add(other.get(i, j)))
    }

    pub fn sub(&self, other: &MatrixField) -> Self {
        assert_eq!(self.n, other.n);
        Self::from_fn(self.n, self.role, |i, j| self.get(i, j).sub(other.get(i, j)))
    }

    pub fn scale(&self, f: &ScalarField) -> Self {
        Self::from_fn(self.n, self.role, |i, j| self.get(i, j).mul(f))
    }

    /// `M v` for a column of components.
    pub fn apply(&self, v: &[ScalarField]) -> Vec<ScalarField> {
        (0..self.n)
            .map(|i| ScalarField::dot((0..self.n).map(|k| (self.get(i, k), &v[k]))))
            .collect()
    }

    /// `v^T M` for a row of components.
    pub fn apply_left(&self, v: &[ScalarField]) -> Vec<ScalarField> {
        (0..self.n)
            .map(|j| ScalarField::dot((0..self.n).map(|k| (&v[k], self.get(k, j)))))
            .collect()
    }

    /// `u^T M v`.
    pub fn bilinear(&self, u: &[ScalarField], v: &[ScalarField]) -> ScalarField {
        ScalarField::dot(self.apply_left(u).iter().zip(v))
    }

    /// Determinant by cofactor expansion with memoised minors.
    pub fn det(&self) -> ScalarField {
        let rows: Vec<usize> = (0..self.n).collect();
        let cols: Vec<usize> = (0..self.n).collect();
        self.minor_det(&rows, &cols)
    }

    fn minor_det(&self, rows: &[usize], cols: &[usize]) -> ScalarField {
        let mut memo: HashMap<u64, ScalarField> = HashMap::new();
        let mask = cols.iter().fold(0u64, |m, &c| m | (1 << c));
        self.det_rec(rows, 0, mask, &mut memo)
    }

    // Expands along rows[depth..] using the columns still present in `mask`.
    fn det_rec(
        &self,
        rows: &[usize],
        depth: usize,
        mask: u64,
        memo: &mut HashMap<u64, ScalarField>,
    ) -> ScalarField {
        if depth == rows.len() {
            return ScalarField::one();
        }
        if let Some(d) = memo.get(&mask) {
            return d.clone();
        }
        let r = rows[depth];
        let mut acc = ScalarField::zero();
        let mut pos = 0;
        for c in 0..self.n {
            if mask & (1 << c) == 0 {
                continue;
            }
            let e = self.get(r, c);
            if !e.is_zero() {
                let sub = self.det_rec(rows, depth + 1, mask & !(1 << c), memo);
                let term = e.mul(&sub);
                acc = if pos % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            pos += 1;
        }
        memo.insert(mask, acc.clone());
        acc
    }

    /// Adjugate (transposed cofactor matrix).
    pub fn adjugate(&self) -> Self {
        let n = self.n;
        if n == 1 {
            return Self::identity(1, self.role);
        }
        let cof: Vec<Vec<ScalarField>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let rows: Vec<usize> = (0..n).filter(|&r| r != i).collect();
                        let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
                        let m = self.minor_det(&rows, &cols);
                        if (i + j) % 2 == 0 {
                            m
                        } else {
                            m.neg()
                        }
                    })
                    .collect()
            })
            .collect();
        Self::from_fn(n, self.role, |i, j| cof[j][i].clone())
    }

    /// Symbolic inverse `adj(M) / det(M)`, without a singularity check.
    pub fn inverse_unchecked(&self) -> Self {
        let det = self.det();
        let adj = self.adjugate();
        Self::from_fn(self.n, self.role, |i, j| adj.get(i, j).div(&det))
    }
}

/// Symbolic inverse, failing if the determinant vanishes at a sample point.
pub fn matrix_inverse(m: &MatrixField, s: &Sampler) -> Result<MatrixField, MatrixError> {
    check_nonsingular(m, s)?;
    Ok(m.inverse_unchecked())
}

/// Errors with the first sample point where `|det| <= SINGULAR_DET`.
pub fn check_nonsingular(m: &MatrixField, s: &Sampler) -> Result<(), MatrixError> {
    let det = m.det();
    let values = evaluate_fields(std::slice::from_ref(&det), s)?;
    let points = s.points().map_err(DefectError::from)?;
    for (p, v) in points.iter().zip(&values[0]) {
        if !(v.abs() > SINGULAR_DET) {
            return Err(MatrixError::Singular {
                role: m.role,
                point: p.clone(),
                det: *v,
            });
        }
    }
    Ok(())
}
