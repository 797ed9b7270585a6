//! Tensor fields on a chart and the classical operations on them.
//!
//! Components are stored densely over the full multi-index. Skew tensors
//! (forms and multivectors) are built from strictly increasing index words
//! and expanded antisymmetrically, so every permutation is present.
//!
//! Conventions:
//! - `(a ^ b)(X, Y) = a(X) b(Y) - a(Y) b(X)`, extended by shuffles, with no
//!   factorial normalisation. `dx ^ dy` evaluates to 1 on `(d/dx, d/dy)`.
//! - `da(X, Y) = X(a(Y)) - Y(a(X)) - a([X, Y])`.
//! - `[pi, pi]^{ijk} = 2 sum_l (pi^{li} d_l pi^{jk} + cyclic)`.

use std::fmt;

use crate::expr::ScalarField;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variance {
    Up,
    Down,
}

impl Variance {
    pub fn dual(self) -> Variance {
        match self {
            Variance::Up => Variance::Down,
            Variance::Down => Variance::Up,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TensorError {
    #[error("mixed variance: expected all slots {0:?}")]
    MixedVariance(Variance),
    #[error("operation needs degree >= 1")]
    DegreeZero,
    #[error("expected {expected}, got {got}")]
    Shape { expected: String, got: String },
    #[error("dimension mismatch: {0} vs {1}")]
    Dim(usize, usize),
    #[error("index word {0:?} is not strictly increasing")]
    NotIncreasing(Vec<usize>),
}

/// A tensor field with declared slot variances.
#[derive(Clone)]
pub struct TensorField {
    dim: usize,
    variance: Vec<Variance>,
    skew: bool,
    comps: Vec<ScalarField>,
}

impl fmt::Debug for TensorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TensorField({}", self.describe())?;
        for (idx, c) in self.nonzero() {
            write!(f, ", {idx:?}: {c}")?;
        }
        f.write_str(")")
    }
}

/// Sign of the permutation sorting `word`, or `None` on a repeated index.
pub fn sort_sign(word: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut w = word.to_vec();
    let mut sign = 1;
    for i in 0..w.len() {
        for j in 0..w.len() - 1 - i {
            if w[j] > w[j + 1] {
                w.swap(j, j + 1);
                sign = -sign;
            } else if w[j] == w[j + 1] {
                return None;
            }
        }
    }
    if w.windows(2).any(|p| p[0] == p[1]) {
        return None;
    }
    Some((w, sign))
}

/// All strictly increasing words of length `k` over `0..dim`.
pub fn increasing_words(dim: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, dim: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..dim {
            cur.push(i);
            rec(i + 1, dim, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, dim, k, &mut Vec::new(), &mut out);
    out
}

fn all_words(dim: usize, k: usize) -> Vec<Vec<usize>> {
    let total = dim.pow(k as u32);
    (0..total)
        .map(|mut flat| {
            let mut w = vec![0; k];
            for slot in (0..k).rev() {
                w[slot] = flat % dim;
                flat /= dim;
            }
            w
        })
        .collect()
}

impl TensorField {
    fn flat(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    pub fn scalar(dim: usize, f: ScalarField) -> Self {
        TensorField {
            dim,
            variance: vec![],
            skew: true,
            comps: vec![f],
        }
    }

    pub fn vector(comps: Vec<ScalarField>) -> Self {
        TensorField {
            dim: comps.len(),
            variance: vec![Variance::Up],
            skew: true,
            comps,
        }
    }

    pub fn one_form(comps: Vec<ScalarField>) -> Self {
        TensorField {
            dim: comps.len(),
            variance: vec![Variance::Down],
            skew: true,
            comps,
        }
    }

    /// Coordinate vector field `d/dx^i`, or covector `dx^i`.
    pub fn basis(dim: usize, i: usize, v: Variance) -> Self {
        let comps = (0..dim)
            .map(|k| {
                if k == i {
                    ScalarField::one()
                } else {
                    ScalarField::zero()
                }
            })
            .collect();
        match v {
            Variance::Up => Self::vector(comps),
            Variance::Down => Self::one_form(comps),
        }
    }

    pub fn zero(dim: usize, variance: Vec<Variance>, skew: bool) -> Self {
        let n = dim.pow(variance.len() as u32);
        TensorField {
            dim,
            variance,
            skew,
            comps: vec![ScalarField::zero(); n],
        }
    }

    /// General (not necessarily skew) tensor from a component function.
    pub fn from_fn(
        dim: usize,
        variance: Vec<Variance>,
        mut f: impl FnMut(&[usize]) -> ScalarField,
    ) -> Self {
        let comps = all_words(dim, variance.len()).iter().map(|w| f(w)).collect();
        TensorField {
            dim,
            variance,
            skew: false,
            comps,
        }
    }

    /// Skew tensor from its values on strictly increasing words; the rest is
    /// filled by antisymmetry.
    pub fn skew_from_fn(
        dim: usize,
        variance: Vec<Variance>,
        mut f: impl FnMut(&[usize]) -> ScalarField,
    ) -> Self {
        let k = variance.len();
        let mut t = Self::zero(dim, variance, true);
        for w in increasing_words(dim, k) {
            let v = f(&w);
            if !v.is_zero() {
                t.set_skew(&w, v);
            }
        }
        t
    }

    /// Skew tensor from explicit `(increasing word, component)` entries.
    pub fn skew_from_entries(
        dim: usize,
        variance: Vec<Variance>,
        entries: &[(Vec<usize>, ScalarField)],
    ) -> Result<Self, TensorError> {
        let mut t = Self::zero(dim, variance, true);
        for (w, v) in entries {
            if w.len() != t.rank() || w.windows(2).any(|p| p[0] >= p[1]) || w.iter().any(|&i| i >= dim)
            {
                return Err(TensorError::NotIncreasing(w.clone()));
            }
            let cur = t.get(w).clone();
            t.set_skew(w, cur.add(v));
        }
        Ok(t)
    }

    fn set_skew(&mut self, increasing: &[usize], v: ScalarField) {
        let neg = v.neg();
        for perm in permutations(increasing) {
            let (_, sign) = sort_sign(&perm).expect("distinct");
            let at = self.flat(&perm);
            self.comps[at] = if sign > 0 { v.clone() } else { neg.clone() };
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.variance.len()
    }

    pub fn variance(&self) -> &[Variance] {
        &self.variance
    }

    pub fn is_skew(&self) -> bool {
        self.skew
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.comps
    }

    pub fn get(&self, idx: &[usize]) -> &ScalarField {
        &self.comps[self.flat(idx)]
    }

    /// Component for rank-one tensors.
    pub fn at(&self, i: usize) -> &ScalarField {
        &self.comps[i]
    }

    pub fn as_scalar(&self) -> Option<&ScalarField> {
        (self.rank() == 0).then(|| &self.comps[0])
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (Vec<usize>, &ScalarField)> {
        let words = all_words(self.dim, self.rank());
        words
            .into_iter()
            .zip(self.comps.iter())
            .filter(|(_, c)| !c.is_zero())
    }

    fn describe(&self) -> String {
        let v: String = self
            .variance
            .iter()
            .map(|v| match v {
                Variance::Up => 'u',
                Variance::Down => 'd',
            })
            .collect();
        format!("dim={}, [{}]{}", self.dim, v, if self.skew { " skew" } else { "" })
    }

    fn expect_shape(&self, variance: &[Variance], what: &str) -> Result<(), TensorError> {
        if self.variance != variance {
            return Err(TensorError::Shape {
                expected: what.to_string(),
                got: self.describe(),
            });
        }
        Ok(())
    }

    pub fn expect_vector(&self) -> Result<(), TensorError> {
        self.expect_shape(&[Variance::Up], "vector field")
    }

    pub fn expect_one_form(&self) -> Result<(), TensorError> {
        self.expect_shape(&[Variance::Down], "1-form")
    }

    pub fn expect_bivector(&self) -> Result<(), TensorError> {
        self.expect_shape(&[Variance::Up, Variance::Up], "bivector")?;
        self.expect_skew()
    }

    pub fn expect_two_form(&self) -> Result<(), TensorError> {
        self.expect_shape(&[Variance::Down, Variance::Down], "2-form")?;
        self.expect_skew()
    }

    fn expect_skew(&self) -> Result<(), TensorError> {
        if !self.skew {
            return Err(TensorError::Shape {
                expected: "skew tensor".into(),
                got: self.describe(),
            });
        }
        Ok(())
    }

    /// All slots share one variance; returns it (Down for scalars).
    pub fn uniform_variance(&self) -> Option<Variance> {
        match self.variance.first() {
            None => Some(Variance::Down),
            Some(&v) => self.variance.iter().all(|&w| w == v).then_some(v),
        }
    }

    fn same_shape(&self, other: &TensorField) -> Result<(), TensorError> {
        if self.dim != other.dim {
            return Err(TensorError::Dim(self.dim, other.dim));
        }
        if self.variance != other.variance {
            return Err(TensorError::Shape {
                expected: self.describe(),
                got: other.describe(),
            });
        }
        Ok(())
    }

    fn zip_with(
        &self,
        other: &TensorField,
        f: impl Fn(&ScalarField, &ScalarField) -> ScalarField,
    ) -> Result<TensorField, TensorError> {
        self.same_shape(other)?;
        Ok(TensorField {
            dim: self.dim,
            variance: self.variance.clone(),
            skew: self.skew && other.skew,
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn try_add(&self, other: &TensorField) -> Result<TensorField, TensorError> {
        self.zip_with(other, |a, b| a.add(b))
    }

    pub fn try_sub(&self, other: &TensorField) -> Result<TensorField, TensorError> {
        self.zip_with(other, |a, b| a.sub(b))
    }

    /// Same-shape addition; panics on shape mismatch.
    pub fn plus(&self, other: &TensorField) -> TensorField {
        self.try_add(other).expect("tensor shapes agree")
    }

    /// Same-shape subtraction; panics on shape mismatch.
    pub fn minus(&self, other: &TensorField) -> TensorField {
        self.try_sub(other).expect("tensor shapes agree")
    }

    pub fn map(&self, f: impl Fn(&ScalarField) -> ScalarField) -> TensorField {
        TensorField {
            dim: self.dim,
            variance: self.variance.clone(),
            skew: self.skew,
            comps: self.comps.iter().map(f).collect(),
        }
    }

    /// Multiplication by a scalar field.
    pub fn scale(&self, f: &ScalarField) -> TensorField {
        self.map(|c| c.mul(f))
    }

    pub fn neg(&self) -> TensorField {
        self.map(|c| c.neg())
    }

    /// Componentwise partial derivative.
    pub fn partial(&self, i: usize) -> TensorField {
        self.map(|c| c.partial(i))
    }

    /// Feeds `arg` into the first slot. `arg` must be rank one with the dual
    /// variance of that slot.
    pub fn contract_first(&self, arg: &TensorField) -> Result<TensorField, TensorError> {
        let Some(&slot) = self.variance.first() else {
            return Err(TensorError::DegreeZero);
        };
        arg.expect_shape(&[slot.dual()], "argument of dual variance")?;
        if arg.dim != self.dim {
            return Err(TensorError::Dim(self.dim, arg.dim));
        }
        let rest = self.dim.pow(self.rank() as u32 - 1);
        let comps = (0..rest)
            .map(|r| {
                ScalarField::dot((0..self.dim).map(|i| (&arg.comps[i], &self.comps[i * rest + r])))
            })
            .collect();
        Ok(TensorField {
            dim: self.dim,
            variance: self.variance[1..].to_vec(),
            skew: self.skew,
            comps,
        })
    }

    /// Feeds `arg` into the last slot.
    pub fn contract_last(&self, arg: &TensorField) -> Result<TensorField, TensorError> {
        let Some(&slot) = self.variance.last() else {
            return Err(TensorError::DegreeZero);
        };
        arg.expect_shape(&[slot.dual()], "argument of dual variance")?;
        if arg.dim != self.dim {
            return Err(TensorError::Dim(self.dim, arg.dim));
        }
        let rest = self.dim.pow(self.rank() as u32 - 1);
        let comps = (0..rest)
            .map(|r| {
                ScalarField::dot(
                    (0..self.dim).map(|i| (&arg.comps[i], &self.comps[r * self.dim + i])),
                )
            })
            .collect();
        Ok(TensorField {
            dim: self.dim,
            variance: self.variance[..self.rank() - 1].to_vec(),
            skew: self.skew,
            comps,
        })
    }

    /// Full evaluation `T(a_1, ..., a_k)`.
    pub fn evaluate(&self, args: &[&TensorField]) -> Result<ScalarField, TensorError> {
        if args.len() != self.rank() {
            return Err(TensorError::Shape {
                expected: format!("{} arguments", self.rank()),
                got: format!("{}", args.len()),
            });
        }
        let mut t = self.clone();
        for a in args {
            t = t.contract_first(a)?;
        }
        Ok(t.comps[0].clone())
    }

    /// Natural pairing of a 1-form with a vector field, in either order.
    pub fn pair(&self, other: &TensorField) -> Result<ScalarField, TensorError> {
        self.evaluate(&[other])
    }

    /// Vector field acting on a function: `X(f)`.
    pub fn derive(&self, f: &ScalarField) -> Result<ScalarField, TensorError> {
        self.expect_vector()?;
        Ok(directional(&self.comps, f))
    }

    /// Component of a top-degree form on the increasing word `0..dim`.
    pub fn top_component(&self) -> Option<&ScalarField> {
        (self.rank() == self.dim).then(|| {
            let w: Vec<usize> = (0..self.dim).collect();
            self.get(&w)
        })
    }
}

/// `sum_l x^l d_l f`.
fn directional(x: &[ScalarField], f: &ScalarField) -> ScalarField {
    let mut acc = ScalarField::zero();
    for (l, xl) in x.iter().enumerate() {
        if !xl.is_zero() {
            acc = acc.add(&xl.mul(&f.partial(l)));
        }
    }
    acc
}

fn permutations(word: &[usize]) -> Vec<Vec<usize>> {
    if word.len() <= 1 {
        return vec![word.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..word.len() {
        let mut rest = word.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

/// Exterior product of two forms or two multivectors.
pub fn wedge(a: &TensorField, b: &TensorField) -> Result<TensorField, TensorError> {
    if a.dim != b.dim {
        return Err(TensorError::Dim(a.dim, b.dim));
    }
    if !a.skew || !b.skew {
        return Err(TensorError::Shape {
            expected: "skew tensors".into(),
            got: format!("{} and {}", a.describe(), b.describe()),
        });
    }
    if let Some(s) = a.as_scalar() {
        return Ok(b.scale(s));
    }
    if let Some(s) = b.as_scalar() {
        return Ok(a.scale(s));
    }
    let va = a.uniform_variance().ok_or(TensorError::MixedVariance(Variance::Down))?;
    let vb = b.uniform_variance().ok_or(TensorError::MixedVariance(va))?;
    if va != vb {
        return Err(TensorError::MixedVariance(va));
    }
    let (p, q) = (a.rank(), b.rank());
    let variance = vec![va; p + q];
    let splits = increasing_words(p + q, p);
    Ok(TensorField::skew_from_fn(a.dim, variance, |w| {
        let mut terms = Vec::with_capacity(splits.len());
        for s in &splits {
            let comp: Vec<usize> = (0..p + q).filter(|k| !s.contains(k)).collect();
            let order: Vec<usize> = s.iter().chain(comp.iter()).copied().collect();
            let (_, sign) = sort_sign(&order).expect("positions distinct");
            let ai: Vec<usize> = s.iter().map(|&k| w[k]).collect();
            let bi: Vec<usize> = comp.iter().map(|&k| w[k]).collect();
            let t = a.get(&ai).mul(b.get(&bi));
            terms.push(if sign > 0 { t } else { t.neg() });
        }
        ScalarField::sum(terms.iter())
    }))
}

/// Exterior derivative of a p-form.
pub fn exterior_derivative(a: &TensorField) -> Result<TensorField, TensorError> {
    if a.rank() > 0 && (a.uniform_variance() != Some(Variance::Down) || !a.skew) {
        return Err(TensorError::Shape {
            expected: "differential form".into(),
            got: a.describe(),
        });
    }
    let p = a.rank();
    Ok(TensorField::skew_from_fn(a.dim, vec![Variance::Down; p + 1], |w| {
        let mut acc = ScalarField::zero();
        for k in 0..=p {
            let rest: Vec<usize> = w.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, &i)| i).collect();
            let d = a.get(&rest).partial(w[k]);
            acc = if k % 2 == 0 { acc.add(&d) } else { acc.sub(&d) };
        }
        acc
    }))
}

/// Interior product `i_X a`.
pub fn interior_product(x: &TensorField, a: &TensorField) -> Result<TensorField, TensorError> {
    x.expect_vector()?;
    if a.rank() == 0 {
        return Err(TensorError::DegreeZero);
    }
    if a.uniform_variance() != Some(Variance::Down) {
        return Err(TensorError::Shape {
            expected: "differential form".into(),
            got: a.describe(),
        });
    }
    a.contract_first(x)
}

/// Lie bracket of vector fields.
pub fn lie_bracket(x: &TensorField, y: &TensorField) -> Result<TensorField, TensorError> {
    x.expect_vector()?;
    y.expect_vector()?;
    if x.dim != y.dim {
        return Err(TensorError::Dim(x.dim, y.dim));
    }
    let comps = (0..x.dim)
        .map(|i| directional(&x.comps, &y.comps[i]).sub(&directional(&y.comps, &x.comps[i])))
        .collect();
    Ok(TensorField::vector(comps))
}

/// Lie derivative `L_X T` for scalars, forms, multivectors and mixed tensors.
pub fn lie_derivative(x: &TensorField, t: &TensorField) -> Result<TensorField, TensorError> {
    x.expect_vector()?;
    if x.dim != t.dim {
        return Err(TensorError::Dim(x.dim, t.dim));
    }
    let n = t.dim;
    let dx: Vec<Vec<ScalarField>> = (0..n)
        .map(|i| (0..n).map(|l| x.comps[i].partial(l)).collect())
        .collect();
    let dt: Vec<TensorField> = (0..n).map(|l| t.partial(l)).collect();
    let mut out = TensorField::zero(n, t.variance.clone(), t.skew);
    for w in all_words(n, t.rank()) {
        let mut acc = ScalarField::dot((0..n).map(|l| (&x.comps[l], dt[l].get(&w))));
        for (slot, v) in t.variance.iter().enumerate() {
            let mut idx = w.clone();
            for l in 0..n {
                idx[slot] = l;
                let c = t.get(&idx);
                if c.is_zero() {
                    continue;
                }
                match v {
                    // -T^{..l..} d_l X^{i}
                    Variance::Up => {
                        let d = &dx[w[slot]][l];
                        if !d.is_zero() {
                            acc = acc.sub(&c.mul(d));
                        }
                    }
                    // +T_{..l..} d_{j} X^l
                    Variance::Down => {
                        let d = &dx[l][w[slot]];
                        if !d.is_zero() {
                            acc = acc.add(&c.mul(d));
                        }
                    }
                }
            }
        }
        let at = out.flat(&w);
        out.comps[at] = acc;
    }
    Ok(out)
}

/// Schouten-Nijenhuis bracket `[pi, pi]` of a bivector with itself.
pub fn schouten_bb(pi: &TensorField) -> Result<TensorField, TensorError> {
    pi.expect_bivector()?;
    let n = pi.dim;
    let dpi: Vec<TensorField> = (0..n).map(|l| pi.partial(l)).collect();
    let cyc = |i: usize, j: usize, k: usize| {
        ScalarField::dot((0..n).map(|l| (pi.get(&[l, i]), dpi[l].get(&[j, k]))))
    };
    Ok(TensorField::skew_from_fn(n, vec![Variance::Up; 3], |w| {
        let (i, j, k) = (w[0], w[1], w[2]);
        let s = cyc(i, j, k).add(&cyc(j, k, i)).add(&cyc(k, i, j));
        s.add(&s)
    }))
}
