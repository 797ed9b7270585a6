//! Almost contact metric structures, the compatibility condition of a triple
//! `(pi, xi, g)`, Hermitian checks and conformal rescaling.

use crate::chart::Sampler;
use crate::error::{Error, Result};
use crate::expr::ScalarField;
use crate::jacobi::JacobiPair;
use crate::matrix::{MatrixField, MatrixRole};
use crate::metric::{
    christoffel, covariant_derivative, d_j_star, d_tensor_pi, nabla,
    ConnectionPack, ContravariantPack, MetricStructure,
};
use crate::tensor::{exterior_derivative, lie_bracket, TensorField, Variance};

#[derive(Debug, Clone)]
pub struct AlmostContactMetric {
    pub phi: MatrixField,
    pub xi: TensorField,
    pub eta: TensorField,
    pub metric: MetricStructure,
}

impl AlmostContactMetric {
    pub fn new(phi: MatrixField, xi: TensorField, eta: TensorField, metric: MetricStructure) -> Result<Self> {
        xi.expect_vector()?;
        eta.expect_one_form()?;
        let n = metric.dim();
        if phi.n() != n || xi.dim() != n || eta.dim() != n {
            return Err(Error::Precondition("almost contact data on different charts".into()));
        }
        Ok(AlmostContactMetric {
            phi: phi.with_role(MatrixRole::Endomorphism),
            xi,
            eta,
            metric,
        })
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    pub fn apply_phi(&self, x: &TensorField) -> TensorField {
        TensorField::vector(self.phi.apply(x.components()))
    }

    /// `eta (x) xi` as an endomorphism, `X -> eta(X) xi`.
    fn eta_xi(&self) -> MatrixField {
        MatrixField::from_fn(self.dim(), MatrixRole::Endomorphism, |i, j| {
            self.xi.at(i).mul(self.eta.at(j))
        })
    }
}

/// Defects of an almost contact structure.
#[derive(Debug, Clone)]
pub struct AlmostContactDefect {
    /// `Phi^2 + Id - eta (x) xi`
    pub square: MatrixField,
    /// `eta(xi) - 1`
    pub normalization: ScalarField,
    /// `Phi xi`
    pub phi_xi: TensorField,
    /// `eta o Phi`
    pub eta_phi: TensorField,
}

pub fn almost_contact_defect(s: &AlmostContactMetric) -> Result<AlmostContactDefect> {
    let n = s.dim();
    let square = s
        .phi
        .mul(&s.phi)
        .add(&MatrixField::identity(n, MatrixRole::Endomorphism))
        .sub(&s.eta_xi());
    Ok(AlmostContactDefect {
        square,
        normalization: s.eta.pair(&s.xi)?.sub(&ScalarField::one()),
        phi_xi: s.apply_phi(&s.xi),
        eta_phi: TensorField::one_form(s.phi.apply_left(s.eta.components())),
    })
}

/// `(g(PhiX, PhiY) - g(X, Y) + eta(X) eta(Y)` as a bilinear form,
/// `flat_g(xi) - eta)`.
pub fn acs_metric_defect(s: &AlmostContactMetric) -> Result<(MatrixField, TensorField)> {
    let g = &s.metric.g;
    let eta_eta = MatrixField::from_fn(s.dim(), MatrixRole::General, |i, j| s.eta.at(i).mul(s.eta.at(j)));
    let form = s.phi.transpose().mul(g).mul(&s.phi).sub(g).add(&eta_eta);
    let flat = s.metric.flat(&s.xi)?.minus(&s.eta);
    Ok((form, flat))
}

/// The pair `(pi, xi)` with `pi(a, b) = g(#a, Phi #b)`.
pub fn acs_bivector(s: &AlmostContactMetric) -> Result<JacobiPair> {
    let p = s.phi.mul(&s.metric.g_inv);
    let pi = TensorField::skew_from_fn(s.dim(), vec![Variance::Up; 2], |w| {
        p.get(w[0], w[1]).sub(p.get(w[1], w[0])).half()
    });
    JacobiPair::new(pi, s.xi.clone())
}

/// `pi(a, b) = g(#a, Phi #b)` before antisymmetrization; its symmetric part
/// must vanish for `acs_bivector` to be meaningful.
pub fn acs_bivector_symmetric_part(s: &AlmostContactMetric) -> MatrixField {
    let p = s.phi.mul(&s.metric.g_inv);
    p.add(&p.transpose())
}

/// `g(#a, #b) - g*(a, b)` for the anchor of `pair`, as a form on covectors.
pub fn assoc_isometry_defect(pair: &JacobiPair, m: &MetricStructure) -> MatrixField {
    let a = pair.anchor_matrix();
    a.mul(&m.g).mul(&a.transpose()).sub(&m.g_inv)
}

/// `g(X, Phi Y) - d eta(X, Y)` as a bilinear form.
pub fn contact_metric_defect(s: &AlmostContactMetric) -> Result<MatrixField> {
    let d = exterior_derivative(&s.eta)?;
    let de = MatrixField::from_fn(s.dim(), MatrixRole::General, |i, j| d.get(&[i, j]).clone());
    Ok(s.metric.g.mul(&s.phi).sub(&de))
}

/// Left minus right side of the compatibility condition written on `D pi`.
pub fn compatibility_eq7(
    pack: &ContravariantPack,
    alpha: &TensorField,
    beta: &TensorField,
    gamma: &TensorField,
) -> Result<ScalarField> {
    let pi = &pack.pair.pi;
    let xi = &pack.pair.xi;
    let m = &pack.metric;
    let rhs = ScalarField::sum(&[
        gamma.pair(xi)?.mul(&pi.evaluate(&[alpha, beta])?),
        beta.pair(xi)?.mul(&pi.evaluate(&[alpha, gamma])?).neg(),
        pack.apply_j_star(gamma).pair(xi)?.mul(&m.co_inner(alpha, beta)).neg(),
        pack.apply_j_star(beta).pair(xi)?.mul(&m.co_inner(alpha, gamma)),
    ])
    .half();
    Ok(d_tensor_pi(pack, alpha, beta, gamma)?.sub(&rhs))
}

/// Left minus right side of the compatibility condition written on `D J*`.
pub fn compatibility_eq8(pack: &ContravariantPack, alpha: &TensorField, beta: &TensorField) -> Result<TensorField> {
    let pi = &pack.pair.pi;
    let xi = &pack.pair.xi;
    let m = &pack.metric;
    let flat_xi = m.flat(xi)?;
    let rhs = flat_xi
        .scale(&pi.evaluate(&[alpha, beta])?)
        .minus(&pack.apply_j_star(alpha).scale(&beta.pair(xi)?))
        .plus(&pack.apply_j_star(&flat_xi).scale(&m.co_inner(alpha, beta)))
        .plus(&alpha.scale(&pack.apply_j_star(beta).pair(xi)?))
        .scale(&ScalarField::ratio(1, 2));
    Ok(d_j_star(pack, alpha, beta)?.minus(&rhs))
}

/// `eq7(a, b, c) - g*(eq8(a, b), c)`.
pub fn compatibility_pairing_defect(
    pack: &ContravariantPack,
    alpha: &TensorField,
    beta: &TensorField,
    gamma: &TensorField,
) -> Result<ScalarField> {
    let e7 = compatibility_eq7(pack, alpha, beta, gamma)?;
    let e8 = compatibility_eq8(pack, alpha, beta)?;
    Ok(e7.sub(&pack.metric.co_inner(&e8, gamma)))
}

/// Tensor `K` with `K(X, Y) = (nabla_X Phi) Y - 1/2 (g(Phi X, Y) xi - eta(Y) Phi X)`.
/// Slots: `X`, `Y` down, result up.
pub fn half_kenmotsu_defect(s: &AlmostContactMetric, cp: &ConnectionPack) -> Result<TensorField> {
    let n = s.dim();
    let nphi = nabla(cp, &s.phi.to_tensor([Variance::Up, Variance::Down]))?;
    let gphi = s.metric.g.mul(&s.phi);
    Ok(TensorField::from_fn(n, vec![Variance::Down, Variance::Down, Variance::Up], |w| {
        let (a, b, c) = (w[0], w[1], w[2]);
        // g(Phi d_a, d_b) = (g Phi)_{b a}
        let rhs = gphi
            .get(b, a)
            .mul(s.xi.at(c))
            .sub(&s.eta.at(b).mul(s.phi.get(c, a)))
            .half();
        nphi.get(&[a, c, b]).sub(&rhs)
    }))
}

/// `#((D_a J*) b) + (nabla_{#a} Phi)(#b)`.
pub fn lemma31_defect(
    s: &AlmostContactMetric,
    pack: &ContravariantPack,
    cp: &ConnectionPack,
    alpha: &TensorField,
    beta: &TensorField,
) -> Result<TensorField> {
    let lhs = pack.anchor(&d_j_star(pack, alpha, beta)?)?;
    let sa = pack.anchor(alpha)?;
    let sb = pack.anchor(beta)?;
    let nphi = covariant_derivative(cp, &sa, &s.phi.to_tensor([Variance::Up, Variance::Down]))?;
    let rhs = nphi.contract_last(&sb)?;
    Ok(lhs.plus(&rhs))
}

/// `# o J* + Phi o #` as a matrix acting on covector columns.
pub fn phi_intertwine_defect(s: &AlmostContactMetric, pack: &ContravariantPack) -> MatrixField {
    let at = pack.pair.anchor_matrix().transpose();
    at.mul(&pack.j_star).add(&s.phi.mul(&at))
}

/// The endomorphism `J` attached to `omega` and `g`, using the bivector
/// `pi(a, b) = omega(#a, #b)`.
pub fn omega_j(omega: &TensorField, m: &MetricStructure, s: &Sampler) -> Result<MatrixField> {
    omega.expect_two_form()?;
    let n = m.dim();
    let w = MatrixField::from_fn(n, MatrixRole::TwoFormFlat, |i, j| omega.get(&[i, j]).clone());
    let inv = crate::matrix::matrix_inverse(&w.scale(&ScalarField::int(-1)), s)?;
    let p = inv.mul(&w).mul(&inv.transpose());
    Ok(p.transpose().mul(&m.g).with_role(MatrixRole::Endomorphism))
}

#[derive(Debug, Clone)]
pub struct HermitianDefect {
    /// `omega(X, Y) - g(JX, Y)` as a bilinear form.
    pub association: MatrixField,
    /// `J^2 + Id`.
    pub square: MatrixField,
    /// Nijenhuis tensor, slots `X`, `Y` down, result up.
    pub nijenhuis: TensorField,
}

pub fn hermitian_defects(omega: &TensorField, m: &MetricStructure, s: &Sampler) -> Result<HermitianDefect> {
    let n = m.dim();
    let j = omega_j(omega, m, s)?;
    let w = MatrixField::from_fn(n, MatrixRole::General, |i, k| omega.get(&[i, k]).clone());
    let association = w.sub(&j.transpose().mul(&m.g));
    let square = j.mul(&j).add(&MatrixField::identity(n, MatrixRole::Endomorphism));
    let nijenhuis = nijenhuis(&j)?;
    Ok(HermitianDefect {
        association,
        square,
        nijenhuis,
    })
}

/// `N_J(X, Y) = [JX, JY] - J[JX, Y] - J[X, JY] + J^2 [X, Y]` on coordinate
/// fields, where the last term drops out.
pub fn nijenhuis(j: &MatrixField) -> Result<TensorField> {
    let n = j.n();
    let apply = |x: &TensorField| TensorField::vector(j.apply(x.components()));
    let basis: Vec<TensorField> = (0..n).map(|i| TensorField::basis(n, i, Variance::Up)).collect();
    let jb: Vec<TensorField> = basis.iter().map(apply).collect();
    let mut vals = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let v = lie_bracket(&jb[a], &jb[b])?
                .minus(&apply(&lie_bracket(&jb[a], &basis[b])?))
                .minus(&apply(&lie_bracket(&basis[a], &jb[b])?));
            vals.push(v);
        }
    }
    Ok(TensorField::from_fn(n, vec![Variance::Down, Variance::Down, Variance::Up], |w| {
        vals[w[0] * n + w[1]].at(w[2]).clone()
    }))
}

/// `J o # - # o J*` for the anchor of `pair`, acting on covector columns.
pub fn lemma34_defect(pair: &JacobiPair, m: &MetricStructure) -> Result<MatrixField> {
    let (j, j_star) = crate::metric::build_j(&pair.pi, m)?;
    let at = pair.anchor_matrix().transpose();
    Ok(j.mul(&at).sub(&at.mul(&j_star)))
}

#[derive(Debug, Clone)]
pub struct ConformalData {
    pub omega: TensorField,
    pub metric: MetricStructure,
    pub f: ScalarField,
}

#[derive(Debug, Clone)]
pub struct ConformalDefect {
    /// Christoffels of `e^f g` minus the rescaling formula; slots `i`, `j`
    /// down, `k` up.
    pub connection: TensorField,
    /// `Lambda_f`, three down slots.
    pub lambda_f: TensorField,
    /// `nabla^f (e^f omega) - e^f Lambda_f`.
    pub bridge: TensorField,
}

pub fn conformal_machinery(cd: &ConformalData, s: &Sampler) -> Result<ConformalDefect> {
    let n = cd.metric.dim();
    let g = &cd.metric.g;
    let ef = cd.f.exp();
    let cp = christoffel(&cd.metric);
    let scaled = MetricStructure::new(g.scale(&ef), s)?;
    let cpf = christoffel(&scaled);
    let df: Vec<ScalarField> = (0..n).map(|i| cd.f.partial(i)).collect();
    let grad = cd.metric.g_inv.apply(&df);
    let delta = |a: usize, b: usize| if a == b { ScalarField::one() } else { ScalarField::zero() };

    let connection = TensorField::from_fn(n, vec![Variance::Down, Variance::Down, Variance::Up], |w| {
        let (i, j, k) = (w[0], w[1], w[2]);
        let corr = ScalarField::sum(&[
            df[i].mul(&delta(k, j)),
            df[j].mul(&delta(k, i)),
            g.get(i, j).mul(&grad[k]).neg(),
        ])
        .half();
        cpf.gamma(k, i, j).sub(cp.gamma(k, i, j)).sub(&corr)
    });

    let nw = nabla(&cp, &cd.omega)?;
    let grad_t = TensorField::vector(grad);
    let w_grad = cd.omega.contract_first(&grad_t)?;
    let lambda_f = TensorField::from_fn(n, vec![Variance::Down; 3], |w| {
        let (i, j, k) = (w[0], w[1], w[2]);
        let o = |a: usize, b: usize| cd.omega.get(&[a, b]);
        ScalarField::sum(&[
            nw.get(&[i, j, k]).clone(),
            df[j].mul(o(i, k)).sub(&df[k].mul(o(i, j))).half().neg(),
            g.get(i, j).mul(w_grad.at(k)).sub(&g.get(i, k).mul(w_grad.at(j))).half(),
        ])
    });

    let scaled_omega = cd.omega.scale(&ef);
    let nf = nabla(&cpf, &scaled_omega)?;
    let bridge = nf.minus(&lambda_f.scale(&ef));
    Ok(ConformalDefect {
        connection,
        lambda_f,
        bridge,
    })
}
