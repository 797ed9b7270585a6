//! Contact forms and locally conformally symplectic pairs, with the Jacobi
//! pairs they induce.

use crate::chart::Sampler;
use crate::defect::max_defect;
use crate::error::{Error, Result};
use crate::expr::ScalarField;
use crate::jacobi::{sharp_pi, JacobiPair};
use crate::matrix::{matrix_inverse, MatrixField, MatrixRole};
use crate::tensor::{
    exterior_derivative, interior_product, lie_derivative, schouten_bb, wedge, TensorField,
    Variance,
};

#[derive(Debug, Clone)]
pub struct ContactStructure {
    pub eta: TensorField,
}

impl ContactStructure {
    pub fn new(eta: TensorField) -> Result<Self> {
        eta.expect_one_form()?;
        let n = eta.dim();
        if n < 3 || n % 2 == 0 {
            return Err(Error::Precondition(format!(
                "contact form needs an odd dimension >= 3, chart has {n}"
            )));
        }
        Ok(ContactStructure { eta })
    }

    pub fn dim(&self) -> usize {
        self.eta.dim()
    }

    pub fn d_eta(&self) -> TensorField {
        exterior_derivative(&self.eta).expect("1-form")
    }

    /// Matrix `B` of `flat_eta`, so that `flat_eta(X)_j = sum_i X^i B_ij`.
    pub fn flat_matrix(&self) -> MatrixField {
        let d = self.d_eta();
        MatrixField::from_fn(self.dim(), MatrixRole::TwoFormFlat, |i, j| {
            self.eta.at(i).mul(self.eta.at(j)).sub(d.get(&[i, j]))
        })
    }
}

/// Component of `eta ^ (d eta)^n` and whether it stays above `threshold` in
/// magnitude at every sample.
pub fn contact_volume_defect(
    c: &ContactStructure,
    s: &Sampler,
    threshold: f64,
) -> Result<(ScalarField, bool)> {
    let d = c.d_eta();
    let mut top = c.eta.clone();
    for _ in 0..c.dim() / 2 {
        top = wedge(&top, &d)?;
    }
    let comp = top.top_component().cloned().unwrap_or_else(ScalarField::zero);
    let values = crate::defect::evaluate_fields(std::slice::from_ref(&comp), s)?;
    let ok = values[0].iter().all(|v| v.abs() > threshold);
    Ok((comp, ok))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Flat,
    Sharp,
}

/// `flat_eta(X) = -i_X d eta + eta(X) eta` or its inverse.
pub fn flat_sharp_eta(
    c: &ContactStructure,
    direction: Direction,
    arg: &TensorField,
    s: &Sampler,
) -> Result<TensorField> {
    let b = c.flat_matrix();
    match direction {
        Direction::Flat => {
            arg.expect_vector()?;
            Ok(TensorField::one_form(b.apply_left(arg.components())))
        }
        Direction::Sharp => {
            arg.expect_one_form()?;
            let inv = matrix_inverse(&b, s)?;
            Ok(TensorField::vector(inv.apply_left(arg.components())))
        }
    }
}

pub fn reeb_field(c: &ContactStructure, s: &Sampler) -> Result<TensorField> {
    flat_sharp_eta(c, Direction::Sharp, &c.eta, s)
}

/// Bivector with matrix `A M A^T`.
fn sandwich(inv: &MatrixField, two_form: &TensorField) -> TensorField {
    let m = MatrixField::from_fn(inv.n(), MatrixRole::General, |i, j| two_form.get(&[i, j]).clone());
    let p = inv.mul(&m).mul(&inv.transpose());
    TensorField::skew_from_fn(inv.n(), vec![Variance::Up; 2], |w| p.get(w[0], w[1]).clone())
}

/// `(pi, xi)` with `pi(a, b) = d eta(#a, #b)` and `xi = #eta`.
pub fn contact_jacobi(c: &ContactStructure, s: &Sampler) -> Result<JacobiPair> {
    let inv = matrix_inverse(&c.flat_matrix(), s)?;
    let pi = sandwich(&inv, &c.d_eta());
    let xi = TensorField::vector(inv.apply_left(c.eta.components()));
    JacobiPair::new(pi, xi)
}

/// Matrix difference between the anchor of the induced pair and `sharp_eta`.
pub fn contact_anchor_defect(c: &ContactStructure, s: &Sampler) -> Result<MatrixField> {
    let inv = matrix_inverse(&c.flat_matrix(), s)?;
    let pair = contact_jacobi(c, s)?;
    Ok(pair.anchor_matrix().sub(&inv))
}

#[derive(Debug, Clone)]
pub struct LcsStructure {
    pub omega: TensorField,
    pub theta: TensorField,
}

impl LcsStructure {
    pub fn new(omega: TensorField, theta: TensorField) -> Result<Self> {
        omega.expect_two_form()?;
        theta.expect_one_form()?;
        if omega.dim() != theta.dim() {
            return Err(Error::Precondition("omega and theta live on different charts".into()));
        }
        Ok(LcsStructure { omega, theta })
    }

    pub fn dim(&self) -> usize {
        self.omega.dim()
    }

    /// Matrix of `flat_omega(X) = -i_X omega`.
    pub fn flat_matrix(&self) -> MatrixField {
        MatrixField::from_fn(self.dim(), MatrixRole::TwoFormFlat, |i, j| {
            self.omega.get(&[i, j]).neg()
        })
    }

    pub fn sharp(&self, alpha: &TensorField, s: &Sampler) -> Result<TensorField> {
        alpha.expect_one_form()?;
        let inv = matrix_inverse(&self.flat_matrix(), s)?;
        Ok(TensorField::vector(inv.apply_left(alpha.components())))
    }
}

/// `(d omega + theta ^ omega, d theta)`.
pub fn lcs_defect(l: &LcsStructure) -> Result<(TensorField, TensorField)> {
    let first = exterior_derivative(&l.omega)?.plus(&wedge(&l.theta, &l.omega)?);
    let second = exterior_derivative(&l.theta)?;
    Ok((first, second))
}

/// `(pi, xi)` with `pi(a, b) = omega(#a, #b)` and `xi = #theta`.
pub fn lcs_jacobi(l: &LcsStructure, s: &Sampler) -> Result<JacobiPair> {
    let inv = matrix_inverse(&l.flat_matrix(), s)?;
    let pi = sandwich(&inv, &l.omega);
    let xi = TensorField::vector(inv.apply_left(l.theta.components()));
    JacobiPair::new(pi, xi)
}

/// The two scalar identities relating `(omega, theta)` to `(pi, xi)` on
/// `X = #_pi a`, `Y = #_pi b`, `Z = #_pi c`:
///
/// 1. `(d omega + theta ^ omega)(X, Y, Z) - (1/2 [pi, pi] - xi ^ pi)(a, b, c)`
/// 2. `(L_xi omega)(X, Y) + (L_xi pi)(a, b)`
pub fn lemma14_defect(
    l: &LcsStructure,
    alpha: &TensorField,
    beta: &TensorField,
    gamma: &TensorField,
    s: &Sampler,
) -> Result<(ScalarField, ScalarField)> {
    let pair = lcs_jacobi(l, s)?;
    let x = sharp_pi(&pair.pi, alpha)?;
    let y = sharp_pi(&pair.pi, beta)?;
    let z = sharp_pi(&pair.pi, gamma)?;
    let (lcs3, _) = lcs_defect(l)?;
    let jac = schouten_bb(&pair.pi)?
        .scale(&ScalarField::ratio(1, 2))
        .minus(&wedge(&pair.xi, &pair.pi)?);
    let first = lcs3
        .evaluate(&[&x, &y, &z])?
        .sub(&jac.evaluate(&[alpha, beta, gamma])?);
    let second = lie_derivative(&pair.xi, &l.omega)?
        .evaluate(&[&x, &y])?
        .add(&lie_derivative(&pair.xi, &pair.pi)?.evaluate(&[alpha, beta])?);
    Ok((first, second))
}

/// `i_{#_pi a} omega + a` for the pair induced by `l`.
pub fn lcs_sharp_defect(l: &LcsStructure, alpha: &TensorField, s: &Sampler) -> Result<TensorField> {
    let pair = lcs_jacobi(l, s)?;
    let x = sharp_pi(&pair.pi, alpha)?;
    Ok(interior_product(&x, &l.omega)?.plus(alpha))
}

/// Smallest `|det|` of the anchor matrix over the samples.
pub fn anchor_min_det(pair: &JacobiPair, s: &Sampler) -> Result<f64> {
    let det = pair.anchor_matrix().det();
    let values = crate::defect::evaluate_fields(std::slice::from_ref(&det), s)?;
    Ok(values[0].iter().fold(f64::INFINITY, |m, v| m.min(v.abs())))
}

/// Max over samples of the characterizing identities of the Reeb field:
/// `i_xi d eta` and `eta(xi) - 1`.
pub fn reeb_defect(c: &ContactStructure, s: &Sampler) -> Result<f64> {
    let xi = reeb_field(c, s)?;
    let mut fields = interior_product(&xi, &c.d_eta())?.components().to_vec();
    fields.push(c.eta.pair(&xi)?.sub(&ScalarField::one()));
    Ok(max_defect(&fields, s)?)
}
