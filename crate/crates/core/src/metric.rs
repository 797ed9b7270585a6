//! Metrics, the Levi-Civita connection, and the contravariant derivative on
//! 1-forms attached to a Jacobi pair and a metric.

use crate::chart::Sampler;
use crate::defect::max_defect;
use crate::error::{Error, Result};
use crate::expr::ScalarField;
use crate::jacobi::{lambda_bracket, sharp_pi_xi, AlgebroidData, JacobiPair};
use crate::matrix::{matrix_inverse, MatrixField, MatrixRole};
use crate::tensor::{TensorError, TensorField, Variance};

/// Entries of `g` that differ from their transpose by more than this are
/// rejected.
const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct MetricStructure {
    pub g: MatrixField,
    pub g_inv: MatrixField,
    pub det_g: ScalarField,
    d_inv: Vec<MatrixField>,
}

impl MetricStructure {
    pub fn new(g: MatrixField, s: &Sampler) -> Result<Self> {
        let n = g.n();
        let asym: Vec<ScalarField> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| g.get(i, j).sub(g.get(j, i)))
            .collect();
        if max_defect(&asym, s)? > SYMMETRY_TOL {
            return Err(Error::Precondition("metric is not symmetric".into()));
        }
        let g = g.with_role(MatrixRole::Metric);
        let g_inv = matrix_inverse(&g, s)?;
        let det_g = g.det();
        let d_inv = (0..n)
            .map(|k| {
                let dg = MatrixField::from_fn(n, MatrixRole::General, |i, j| g.get(i, j).partial(k));
                g_inv.mul(&dg).mul(&g_inv).scale(&ScalarField::int(-1))
            })
            .collect();
        Ok(MetricStructure {
            g,
            g_inv,
            det_g,
            d_inv,
        })
    }

    pub fn dim(&self) -> usize {
        self.g.n()
    }

    /// `d_k g*`, obtained as `-g* (d_k g) g*`.
    pub fn d_inverse(&self, k: usize) -> &MatrixField {
        &self.d_inv[k]
    }

    pub fn flat(&self, x: &TensorField) -> Result<TensorField> {
        x.expect_vector()?;
        Ok(TensorField::one_form(self.g.apply(x.components())))
    }

    pub fn sharp(&self, alpha: &TensorField) -> Result<TensorField> {
        alpha.expect_one_form()?;
        Ok(TensorField::vector(self.g_inv.apply(alpha.components())))
    }

    pub fn inner(&self, x: &TensorField, y: &TensorField) -> ScalarField {
        self.g.bilinear(x.components(), y.components())
    }

    pub fn co_inner(&self, a: &TensorField, b: &TensorField) -> ScalarField {
        self.g_inv.bilinear(a.components(), b.components())
    }

    /// `X(g*(a, b))` by the product rule, with `d g*` from `d_inverse`.
    pub fn derive_co_inner(&self, x: &TensorField, a: &TensorField, b: &TensorField) -> ScalarField {
        let n = self.dim();
        let terms: Vec<ScalarField> = (0..n)
            .filter(|&k| !x.at(k).is_zero())
            .map(|k| {
                let da = a.partial(k);
                let db = b.partial(k);
                let t = self.g_inv.bilinear(da.components(), b.components())
                    .add(&self.d_inv[k].bilinear(a.components(), b.components()))
                    .add(&self.g_inv.bilinear(a.components(), db.components()));
                x.at(k).mul(&t)
            })
            .collect();
        ScalarField::sum(&terms)
    }
}

pub enum Musical {
    Flat,
    Sharp,
}

pub fn musical_g(m: &MetricStructure, direction: Musical, arg: &TensorField) -> Result<TensorField> {
    match direction {
        Musical::Flat => m.flat(arg),
        Musical::Sharp => m.sharp(arg),
    }
}

/// `(J, J*)` with `g(J #a, #b) = pi(a, b)` and `g*(J* a, b) = pi(a, b)`.
/// Both are returned as matrices acting on component columns.
pub fn build_j(pi: &TensorField, m: &MetricStructure) -> Result<(MatrixField, MatrixField)> {
    pi.expect_bivector()?;
    let n = m.dim();
    let p = MatrixField::from_fn(n, MatrixRole::General, |i, j| pi.get(&[i, j]).clone());
    let j = p.transpose().mul(&m.g).with_role(MatrixRole::Endomorphism);
    let j_star = m.g.mul(&p.transpose()).with_role(MatrixRole::Endomorphism);
    Ok((j, j_star))
}

/// The Levi-Civita connection of a metric, as Christoffel symbols.
#[derive(Debug, Clone)]
pub struct ConnectionPack {
    pub metric: MetricStructure,
    gamma: Vec<ScalarField>,
}

impl ConnectionPack {
    /// `Gamma^k_ij`.
    pub fn gamma(&self, k: usize, i: usize, j: usize) -> &ScalarField {
        let n = self.metric.dim();
        &self.gamma[(k * n + i) * n + j]
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    pub fn symbols(&self) -> &[ScalarField] {
        &self.gamma
    }
}

/// `Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij)`.
pub fn christoffel(m: &MetricStructure) -> ConnectionPack {
    let n = m.dim();
    let dg: Vec<MatrixField> = (0..n)
        .map(|l| MatrixField::from_fn(n, MatrixRole::General, |i, j| m.g.get(i, j).partial(l)))
        .collect();
    let mut gamma = Vec::with_capacity(n * n * n);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let lowered: Vec<ScalarField> = (0..n)
                    .map(|l| dg[i].get(j, l).add(dg[j].get(i, l)).sub(dg[l].get(i, j)))
                    .collect();
                let s = ScalarField::dot((0..n).map(|l| (m.g_inv.get(k, l), &lowered[l])));
                gamma.push(s.half());
            }
        }
    }
    ConnectionPack {
        metric: m.clone(),
        gamma,
    }
}

/// `nabla T` as a tensor with the differentiating slot first.
pub fn nabla(cp: &ConnectionPack, t: &TensorField) -> Result<TensorField> {
    let rank = t.rank();
    if rank == 0 || rank > 2 {
        return Err(TensorError::Shape {
            expected: "vector, 1-form or rank-2 tensor".into(),
            got: format!("unsupported variance {:?}", t.variance()),
        }
        .into());
    }
    let n = cp.dim();
    let var = t.variance().to_vec();
    let mut out_var = vec![Variance::Down];
    out_var.extend_from_slice(&var);
    let dt: Vec<TensorField> = (0..n).map(|k| t.partial(k)).collect();
    Ok(TensorField::from_fn(n, out_var, |w| {
        let k = w[0];
        let idx = &w[1..];
        let mut terms = vec![dt[k].get(idx).clone()];
        for (s, v) in var.iter().enumerate() {
            let mut j = idx.to_vec();
            for l in 0..n {
                j[s] = l;
                let c = t.get(&j);
                if c.is_zero() {
                    continue;
                }
                match v {
                    Variance::Up => terms.push(cp.gamma(idx[s], k, l).mul(c)),
                    Variance::Down => terms.push(cp.gamma(l, k, idx[s]).mul(c).neg()),
                }
            }
        }
        ScalarField::sum(&terms)
    }))
}

/// `nabla_X T`.
pub fn covariant_derivative(cp: &ConnectionPack, x: &TensorField, t: &TensorField) -> Result<TensorField> {
    x.expect_vector()?;
    Ok(nabla(cp, t)?.contract_first(x)?)
}

/// Data of the contravariant derivative attached to `(pi, xi, g)`.
#[derive(Debug, Clone)]
pub struct ContravariantPack {
    pub pair: JacobiPair,
    pub metric: MetricStructure,
    pub j: MatrixField,
    pub j_star: MatrixField,
    pub lambda_g: TensorField,
}

impl ContravariantPack {
    pub fn new(pair: JacobiPair, metric: MetricStructure) -> Result<Self> {
        if pair.dim() != metric.dim() {
            return Err(Error::Precondition("pair and metric dimensions differ".into()));
        }
        let (j, j_star) = build_j(&pair.pi, &metric)?;
        let xi = &pair.xi;
        let flat_xi = metric.flat(xi)?;
        let jxi = TensorField::vector(j.apply(xi.components()));
        let lambda_g = flat_xi
            .scale(&metric.inner(xi, xi))
            .minus(&metric.flat(&jxi)?);
        Ok(ContravariantPack {
            pair,
            metric,
            j,
            j_star,
            lambda_g,
        })
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    /// The algebroid whose bracket `[., .]^g` enters the Koszul formula.
    pub fn algebroid(&self) -> AlgebroidData {
        AlgebroidData {
            pair: self.pair.clone(),
            lambda: self.lambda_g.clone(),
        }
    }

    pub fn anchor(&self, alpha: &TensorField) -> Result<TensorField> {
        sharp_pi_xi(&self.pair, alpha)
    }

    pub fn bracket(&self, alpha: &TensorField, beta: &TensorField) -> Result<TensorField> {
        lambda_bracket(&self.algebroid(), alpha, beta)
    }

    pub fn apply_j_star(&self, alpha: &TensorField) -> TensorField {
        TensorField::one_form(self.j_star.apply(alpha.components()))
    }

    pub fn apply_j(&self, x: &TensorField) -> TensorField {
        TensorField::vector(self.j.apply(x.components()))
    }
}

pub fn lambda_g(pack: &ContravariantPack) -> &TensorField {
    &pack.lambda_g
}

/// `D_a b` from the six-term Koszul formula, tested against every `dx^k`.
pub fn contravariant_d(pack: &ContravariantPack, alpha: &TensorField, beta: &TensorField) -> Result<TensorField> {
    alpha.expect_one_form()?;
    beta.expect_one_form()?;
    let n = pack.dim();
    let m = &pack.metric;
    let data = pack.algebroid();
    let sa = sharp_pi_xi(&data.pair, alpha)?;
    let sb = sharp_pi_xi(&data.pair, beta)?;
    let ab = lambda_bracket(&data, alpha, beta)?;
    let g_ab = m.co_inner(alpha, beta);
    let mut v = Vec::with_capacity(n);
    for k in 0..n {
        let gk = TensorField::basis(n, k, Variance::Down);
        let sk = sharp_pi_xi(&data.pair, &gk)?;
        let rhs = ScalarField::sum(&[
            m.derive_co_inner(&sa, beta, &gk),
            m.derive_co_inner(&sb, alpha, &gk),
            sk.derive(&g_ab)?.neg(),
            m.co_inner(&lambda_bracket(&data, beta, &gk)?, alpha).neg(),
            m.co_inner(&lambda_bracket(&data, alpha, &gk)?, beta).neg(),
            m.co_inner(&ab, &gk),
        ]);
        v.push(rhs.half());
    }
    Ok(TensorField::one_form(m.g.apply(&v)))
}

/// `D pi(a, b, c) = #a(pi(b, c)) - pi(D_a b, c) - pi(b, D_a c)`.
pub fn d_tensor_pi(
    pack: &ContravariantPack,
    alpha: &TensorField,
    beta: &TensorField,
    gamma: &TensorField,
) -> Result<ScalarField> {
    let pi = &pack.pair.pi;
    let sa = pack.anchor(alpha)?;
    let dab = contravariant_d(pack, alpha, beta)?;
    let dac = contravariant_d(pack, alpha, gamma)?;
    Ok(sa
        .derive(&pi.evaluate(&[beta, gamma])?)?
        .sub(&pi.evaluate(&[&dab, gamma])?)
        .sub(&pi.evaluate(&[beta, &dac])?))
}

/// `(D_a J*) b = D_a(J* b) - J*(D_a b)`.
pub fn d_j_star(pack: &ContravariantPack, alpha: &TensorField, beta: &TensorField) -> Result<TensorField> {
    let first = contravariant_d(pack, alpha, &pack.apply_j_star(beta))?;
    let dab = contravariant_d(pack, alpha, beta)?;
    Ok(first.minus(&pack.apply_j_star(&dab)))
}

/// `#(D_a b) - nabla_{#a} #b`.
pub fn anchor_intertwine_defect(
    pack: &ContravariantPack,
    cp: &ConnectionPack,
    alpha: &TensorField,
    beta: &TensorField,
) -> Result<TensorField> {
    let lhs = pack.anchor(&contravariant_d(pack, alpha, beta)?)?;
    let rhs = covariant_derivative(cp, &pack.anchor(alpha)?, &pack.anchor(beta)?)?;
    Ok(lhs.minus(&rhs))
}

/// `#a(g*(b, c)) - g*(D_a b, c) - g*(b, D_a c)`.
pub fn metric_compatibility_defect(
    pack: &ContravariantPack,
    alpha: &TensorField,
    beta: &TensorField,
    gamma: &TensorField,
) -> Result<ScalarField> {
    let m = &pack.metric;
    let sa = pack.anchor(alpha)?;
    let dab = contravariant_d(pack, alpha, beta)?;
    let dac = contravariant_d(pack, alpha, gamma)?;
    Ok(m.derive_co_inner(&sa, beta, gamma)
        .sub(&m.co_inner(&dab, gamma))
        .sub(&m.co_inner(beta, &dac)))
}

/// `D_a b - D_b a - [a, b]^g`.
pub fn symmetry_defect(pack: &ContravariantPack, alpha: &TensorField, beta: &TensorField) -> Result<TensorField> {
    Ok(contravariant_d(pack, alpha, beta)?
        .minus(&contravariant_d(pack, beta, alpha)?)
        .minus(&pack.bracket(alpha, beta)?))
}

/// `D pi(a, b, c) - g*((D_a J*) b, c)`.
pub fn pairing_bridge_defect(
    pack: &ContravariantPack,
    alpha: &TensorField,
    beta: &TensorField,
    gamma: &TensorField,
) -> Result<ScalarField> {
    let lhs = d_tensor_pi(pack, alpha, beta, gamma)?;
    let rhs = pack.metric.co_inner(&d_j_star(pack, alpha, beta)?, gamma);
    Ok(lhs.sub(&rhs))
}

/// `d_k g* + g* (d_k g) g*`, using the symbolic derivative of `g*`.
pub fn inverse_derivative_defect(m: &MetricStructure) -> Vec<ScalarField> {
    let n = m.dim();
    (0..n)
        .flat_map(|k| {
            (0..n * n).map(move |e| {
                let (i, j) = (e / n, e % n);
                m.g_inv.get(i, j).partial(k).sub(m.d_inverse(k).get(i, j))
            })
        })
        .collect()
}

/// `g(JX, Y) + g(X, JY)` as a matrix.
pub fn j_skew_defect(pack: &ContravariantPack) -> MatrixField {
    let gj = pack.metric.g.mul(&pack.j);
    gj.add(&gj.transpose())
}

/// `J - #_g J* flat_g` as a matrix.
pub fn j_intertwine_defect(pack: &ContravariantPack) -> MatrixField {
    let m = &pack.metric;
    pack.j.sub(&m.g_inv.mul(&pack.j_star).mul(&m.g))
}

/// `Gamma^k_ij - Gamma^k_ji`.
pub fn torsion_free_defect(cp: &ConnectionPack) -> Vec<ScalarField> {
    let n = cp.dim();
    let mut out = Vec::new();
    for k in 0..n {
        for i in 0..n {
            for j in i + 1..n {
                out.push(cp.gamma(k, i, j).sub(cp.gamma(k, j, i)));
            }
        }
    }
    out
}

/// Components of `nabla g`.
pub fn metric_parallel_defect(cp: &ConnectionPack) -> Result<TensorField> {
    nabla(cp, &cp.metric.g.to_tensor([Variance::Down, Variance::Down]))
}
