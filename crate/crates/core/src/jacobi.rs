//! Anchors and brackets on 1-forms induced by a bivector, a vector field and
//! a 1-form, and the defects of the Jacobi and algebroid conditions.

use crate::error::{Error, Result};
use crate::expr::ScalarField;
use crate::matrix::{MatrixField, MatrixRole};
use crate::tensor::{
    exterior_derivative, lie_bracket, lie_derivative, schouten_bb, wedge, TensorField, Variance,
};

/// A bivector `pi` with a vector field `xi`. `xi = 0` is the Poisson case.
#[derive(Debug, Clone)]
pub struct JacobiPair {
    pub pi: TensorField,
    pub xi: TensorField,
}

impl JacobiPair {
    pub fn new(pi: TensorField, xi: TensorField) -> Result<Self> {
        pi.expect_bivector()?;
        xi.expect_vector()?;
        if pi.dim() != xi.dim() {
            return Err(Error::Precondition(format!(
                "pi has dimension {}, xi has {}",
                pi.dim(),
                xi.dim()
            )));
        }
        Ok(JacobiPair { pi, xi })
    }

    /// Pair with `xi = 0`.
    pub fn poisson(pi: TensorField) -> Result<Self> {
        let xi = TensorField::zero(pi.dim(), vec![Variance::Up], true);
        Self::new(pi, xi)
    }

    pub fn dim(&self) -> usize {
        self.pi.dim()
    }

    /// `pi(alpha, beta)`.
    pub fn pi_of(&self, alpha: &TensorField, beta: &TensorField) -> Result<ScalarField> {
        Ok(self.pi.evaluate(&[alpha, beta])?)
    }

    /// `alpha(xi)`.
    pub fn on_xi(&self, alpha: &TensorField) -> Result<ScalarField> {
        Ok(alpha.pair(&self.xi)?)
    }

    /// Matrix `A` with `(sharp_{pi,xi} alpha)^i = sum_j alpha_j A[j][i]`.
    pub fn anchor_matrix(&self) -> MatrixField {
        MatrixField::from_fn(self.dim(), MatrixRole::General, |j, i| {
            self.pi
                .get(&[j, i])
                .add(&self.xi.at(j).mul(self.xi.at(i)))
        })
    }
}

/// A Jacobi pair together with the 1-form `lambda` entering the bracket.
#[derive(Debug, Clone)]
pub struct AlgebroidData {
    pub pair: JacobiPair,
    pub lambda: TensorField,
}

impl AlgebroidData {
    pub fn new(pair: JacobiPair, lambda: TensorField) -> Result<Self> {
        lambda.expect_one_form()?;
        if lambda.dim() != pair.dim() {
            return Err(Error::Precondition("lambda dimension differs from pair".into()));
        }
        Ok(AlgebroidData { pair, lambda })
    }

    pub fn with_zero_lambda(pair: JacobiPair) -> Self {
        let lambda = TensorField::zero(pair.dim(), vec![Variance::Down], true);
        AlgebroidData { pair, lambda }
    }

    pub fn bracket(&self, alpha: &TensorField, beta: &TensorField) -> Result<TensorField> {
        lambda_bracket(self, alpha, beta)
    }

    pub fn anchor(&self, alpha: &TensorField) -> Result<TensorField> {
        sharp_pi_xi(&self.pair, alpha)
    }
}

/// `sharp_pi(alpha)`, defined by `beta(sharp_pi alpha) = pi(alpha, beta)`.
pub fn sharp_pi(pi: &TensorField, alpha: &TensorField) -> Result<TensorField> {
    pi.expect_bivector()?;
    alpha.expect_one_form()?;
    Ok(pi.contract_first(alpha)?)
}

/// `sharp_pi(alpha) + alpha(xi) xi`.
pub fn sharp_pi_xi(pair: &JacobiPair, alpha: &TensorField) -> Result<TensorField> {
    let base = sharp_pi(&pair.pi, alpha)?;
    let a_xi = pair.on_xi(alpha)?;
    Ok(base.plus(&pair.xi.scale(&a_xi)))
}

/// Koszul bracket `L_{#a} b - L_{#b} a - d(pi(a, b))`.
pub fn koszul_bracket(
    pi: &TensorField,
    alpha: &TensorField,
    beta: &TensorField,
) -> Result<TensorField> {
    let sa = sharp_pi(pi, alpha)?;
    let sb = sharp_pi(pi, beta)?;
    beta.expect_one_form()?;
    let pab = pi.evaluate(&[alpha, beta])?;
    let d_pab = exterior_derivative(&TensorField::scalar(pi.dim(), pab))?;
    Ok(lie_derivative(&sa, beta)?
        .minus(&lie_derivative(&sb, alpha)?)
        .minus(&d_pab))
}

/// `[a, b]_pi + a(xi)(L_xi b - b) - b(xi)(L_xi a - a) - pi(a, b) lambda`.
pub fn lambda_bracket(
    data: &AlgebroidData,
    alpha: &TensorField,
    beta: &TensorField,
) -> Result<TensorField> {
    let pair = &data.pair;
    let kb = koszul_bracket(&pair.pi, alpha, beta)?;
    let a_xi = pair.on_xi(alpha)?;
    let b_xi = pair.on_xi(beta)?;
    let mut out = kb;
    if !a_xi.is_zero() {
        let lb = lie_derivative(&pair.xi, beta)?.minus(beta);
        out = out.plus(&lb.scale(&a_xi));
    }
    if !b_xi.is_zero() {
        let la = lie_derivative(&pair.xi, alpha)?.minus(alpha);
        out = out.minus(&la.scale(&b_xi));
    }
    let pab = pair.pi_of(alpha, beta)?;
    Ok(out.minus(&data.lambda.scale(&pab)))
}

/// `([pi, pi] - 2 xi ^ pi, L_xi pi)`.
pub fn jacobi_defect(pair: &JacobiPair) -> Result<(TensorField, TensorField)> {
    let sb = schouten_bb(&pair.pi)?;
    let xp = wedge(&pair.xi, &pair.pi)?;
    let first = sb.minus(&xp.scale(&ScalarField::int(2)));
    let second = lie_derivative(&pair.xi, &pair.pi)?;
    Ok((first, second))
}

/// Torsion of the anchored bracket.
///
/// `d1 = #[a, b] - [#a, #b]` measures the almost-Lie property;
/// `d2 = d1 - pi(a, b)(xi - #lambda)` vanishes whenever the pair is Jacobi.
#[derive(Debug, Clone)]
pub struct TorsionDefect {
    pub anchored_bracket: TensorField,
    pub bracket_of_anchors: TensorField,
    pub correction: TensorField,
    pub d1: TensorField,
    pub d2: TensorField,
}

impl TorsionDefect {
    /// Fields bounding the magnitude of the compared sides.
    pub fn scale_fields(&self) -> Vec<ScalarField> {
        [&self.anchored_bracket, &self.bracket_of_anchors, &self.correction]
            .iter()
            .flat_map(|t| t.components().iter().cloned())
            .collect()
    }
}

pub fn torsion_defect(
    data: &AlgebroidData,
    alpha: &TensorField,
    beta: &TensorField,
) -> Result<TorsionDefect> {
    let pair = &data.pair;
    let bracket = lambda_bracket(data, alpha, beta)?;
    let anchored_bracket = sharp_pi_xi(pair, &bracket)?;
    let bracket_of_anchors = lie_bracket(&sharp_pi_xi(pair, alpha)?, &sharp_pi_xi(pair, beta)?)?;
    let d1 = anchored_bracket.minus(&bracket_of_anchors);
    let pab = pair.pi_of(alpha, beta)?;
    let correction = pair.xi.minus(&sharp_pi_xi(pair, &data.lambda)?).scale(&pab);
    let d2 = d1.minus(&correction);
    Ok(TorsionDefect {
        anchored_bracket,
        bracket_of_anchors,
        correction,
        d1,
        d2,
    })
}

/// Cyclic sum `[a, [b, c]] + [b, [c, a]] + [c, [a, b]]`.
pub fn jacobiator_defect(
    data: &AlgebroidData,
    alpha: &TensorField,
    beta: &TensorField,
    gamma: &TensorField,
) -> Result<TensorField> {
    let bc = lambda_bracket(data, beta, gamma)?;
    let ca = lambda_bracket(data, gamma, alpha)?;
    let ab = lambda_bracket(data, alpha, beta)?;
    Ok(lambda_bracket(data, alpha, &bc)?
        .plus(&lambda_bracket(data, beta, &ca)?)
        .plus(&lambda_bracket(data, gamma, &ab)?))
}

/// Leibniz defect `[a, phi b] - phi [a, b] - (#a)(phi) b` of the bracket.
pub fn leibniz_defect(
    data: &AlgebroidData,
    alpha: &TensorField,
    beta: &TensorField,
    phi: &ScalarField,
) -> Result<TensorField> {
    let lhs = lambda_bracket(data, alpha, &beta.scale(phi))?;
    let rhs = lambda_bracket(data, alpha, beta)?.scale(phi);
    let anchor_phi = sharp_pi_xi(&data.pair, alpha)?.derive(phi)?;
    Ok(lhs.minus(&rhs).minus(&beta.scale(&anchor_phi)))
}
