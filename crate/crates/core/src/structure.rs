//! Named collections of fields on one chart.

use std::collections::BTreeMap;

use crate::chart::Chart;
use crate::expr::ScalarField;
use crate::matrix::{MatrixField, MatrixRole};
use crate::parse::{parse_scalar, ParseError};
use crate::tensor::{TensorField, Variance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    OneForm,
    TwoForm,
    Vector,
    Bivector,
    Metric,
    Endomorphism,
    Scalar,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::OneForm => "one_form",
            Kind::TwoForm => "two_form",
            Kind::Vector => "vector",
            Kind::Bivector => "bivector",
            Kind::Metric => "metric",
            Kind::Endomorphism => "endomorphism",
            Kind::Scalar => "scalar",
        }
    }

    pub fn from_name(s: &str) -> Option<Kind> {
        [
            Kind::OneForm,
            Kind::TwoForm,
            Kind::Vector,
            Kind::Bivector,
            Kind::Metric,
            Kind::Endomorphism,
            Kind::Scalar,
        ]
        .into_iter()
        .find(|k| k.name() == s)
    }

    fn form_degree(self) -> Option<(Variance, usize)> {
        match self {
            Kind::OneForm => Some((Variance::Down, 1)),
            Kind::TwoForm => Some((Variance::Down, 2)),
            Kind::Vector => Some((Variance::Up, 1)),
            Kind::Bivector => Some((Variance::Up, 2)),
            _ => None,
        }
    }
}

/// Entry names a structure set may carry, with the kind each must have.
pub const ENTRY_KINDS: [(&str, Kind); 9] = [
    ("pi", Kind::Bivector),
    ("xi", Kind::Vector),
    ("lambda", Kind::OneForm),
    ("eta", Kind::OneForm),
    ("omega", Kind::TwoForm),
    ("theta", Kind::OneForm),
    ("g", Kind::Metric),
    ("phi", Kind::Endomorphism),
    ("f", Kind::Scalar),
];

pub fn expected_kind(name: &str) -> Option<Kind> {
    ENTRY_KINDS.iter().find(|(n, _)| *n == name).map(|(_, k)| *k)
}

/// Unparsed entry text.
#[derive(Debug, Clone)]
pub enum EntrySource {
    /// `(key, expression)` pairs; keys like `dx`, `dx^dy`, `x`, `x^y`.
    Components(Vec<(String, String)>),
    Matrix(Vec<Vec<String>>),
    Expr(String),
}

#[derive(Debug, Clone)]
pub enum Entry {
    Tensor(TensorField),
    Matrix(MatrixField),
    Scalar(ScalarField),
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum StructureError {
    #[error("unknown entry `{0}` (expected one of pi, xi, lambda, eta, omega, theta, g, phi, f)")]
    UnknownEntry(String),
    #[error("entry `{name}` must have kind {expected}, got {got}")]
    KindMismatch {
        name: String,
        expected: &'static str,
        got: String,
    },
    #[error("entry `{name}`: bad component key `{key}`: {msg}")]
    Key { name: String, key: String, msg: String },
    #[error("entry `{name}`: {msg}")]
    Shape { name: String, msg: String },
    #[error("entry `{name}`, `{key}`: {source}")]
    Parse {
        name: String,
        key: String,
        #[source]
        source: ParseError,
    },
}

#[derive(Debug, Clone)]
pub struct StructureSet {
    pub id: String,
    pub chart: Chart,
    entries: BTreeMap<String, Entry>,
    pub claims: Vec<String>,
}

impl StructureSet {
    pub fn new(id: impl Into<String>, chart: Chart) -> Self {
        StructureSet {
            id: id.into(),
            chart,
            entries: BTreeMap::new(),
            claims: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn has(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn tensor(&self, name: &str) -> Option<&TensorField> {
        match self.entries.get(name) {
            Some(Entry::Tensor(t)) => Some(t),
            _ => None,
        }
    }

    pub fn matrix(&self, name: &str) -> Option<&MatrixField> {
        match self.entries.get(name) {
            Some(Entry::Matrix(m)) => Some(m),
            _ => None,
        }
    }

    pub fn scalar(&self, name: &str) -> Option<&ScalarField> {
        match self.entries.get(name) {
            Some(Entry::Scalar(f)) => Some(f),
            _ => None,
        }
    }

    /// Parses and stores `name`, checking that `kind` matches the name.
    pub fn insert_source(&mut self, name: &str, kind: Kind, src: &EntrySource) -> Result<(), StructureError> {
        let expected = expected_kind(name).ok_or_else(|| StructureError::UnknownEntry(name.into()))?;
        if expected != kind {
            return Err(StructureError::KindMismatch {
                name: name.into(),
                expected: expected.name(),
                got: kind.name().into(),
            });
        }
        let entry = build_entry(&self.chart, name, kind, src)?;
        self.entries.insert(name.to_string(), entry);
        Ok(())
    }

    /// Stores an already built entry. The caller is responsible for shapes.
    pub fn insert(&mut self, name: &str, entry: Entry) -> Result<(), StructureError> {
        if expected_kind(name).is_none() {
            return Err(StructureError::UnknownEntry(name.into()));
        }
        self.entries.insert(name.to_string(), entry);
        Ok(())
    }
}

fn parse(chart: &Chart, name: &str, key: &str, src: &str) -> Result<ScalarField, StructureError> {
    parse_scalar(src, chart).map_err(|source| StructureError::Parse {
        name: name.into(),
        key: key.into(),
        source,
    })
}

/// Index word of a component key. Form keys spell each factor as `d<coord>`.
fn parse_key(chart: &Chart, name: &str, key: &str, var: Variance, degree: usize) -> Result<Vec<usize>, StructureError> {
    let err = |msg: String| StructureError::Key {
        name: name.into(),
        key: key.into(),
        msg,
    };
    let mut word = Vec::new();
    for tok in key.split('^') {
        let tok = tok.trim();
        let coord = match var {
            Variance::Down => tok
                .strip_prefix('d')
                .ok_or_else(|| err(format!("form factor `{tok}` must start with `d`")))?,
            Variance::Up => tok.strip_prefix('∂').unwrap_or(tok),
        };
        let i = chart
            .coord_index(coord)
            .ok_or_else(|| err(format!("`{coord}` is not a chart coordinate")))?;
        word.push(i);
    }
    if word.len() != degree {
        return Err(err(format!("expected {degree} factor(s), found {}", word.len())));
    }
    if word.windows(2).any(|p| p[0] >= p[1]) {
        return Err(err("factors must be strictly increasing in chart order".into()));
    }
    Ok(word)
}

fn build_entry(chart: &Chart, name: &str, kind: Kind, src: &EntrySource) -> Result<Entry, StructureError> {
    let n = chart.dim();
    let shape = |msg: &str| StructureError::Shape {
        name: name.into(),
        msg: msg.into(),
    };
    match (kind, src) {
        (Kind::Scalar, EntrySource::Expr(e)) => Ok(Entry::Scalar(parse(chart, name, "value", e)?)),
        (Kind::Metric | Kind::Endomorphism, EntrySource::Matrix(rows)) => {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(shape(&format!("matrix must be {n}x{n} to match the chart")));
            }
            let mut parsed = Vec::with_capacity(n);
            for (i, r) in rows.iter().enumerate() {
                let mut row = Vec::with_capacity(n);
                for (j, e) in r.iter().enumerate() {
                    row.push(parse(chart, name, &format!("[{i}][{j}]"), e)?);
                }
                parsed.push(row);
            }
            let role = if kind == Kind::Metric {
                MatrixRole::Metric
            } else {
                MatrixRole::Endomorphism
            };
            Ok(Entry::Matrix(MatrixField::from_rows(parsed, role)))
        }
        (k, EntrySource::Components(items)) if k.form_degree().is_some() => {
            let (var, degree) = k.form_degree().expect("checked");
            let mut entries = Vec::with_capacity(items.len());
            for (key, e) in items {
                let w = parse_key(chart, name, key, var, degree)?;
                if entries.iter().any(|(x, _): &(Vec<usize>, ScalarField)| *x == w) {
                    return Err(StructureError::Key {
                        name: name.into(),
                        key: key.clone(),
                        msg: "duplicate component".into(),
                    });
                }
                entries.push((w, parse(chart, name, key, e)?));
            }
            let t = TensorField::skew_from_entries(n, vec![var; degree], &entries)
                .map_err(|e| shape(&e.to_string()))?;
            Ok(Entry::Tensor(t))
        }
        _ => Err(shape(&format!("kind {} does not accept this layout", kind.name()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart() -> Chart {
        Chart::new(&["x", "y", "z"]).unwrap()
    }

    fn comps(items: &[(&str, &str)]) -> EntrySource {
        EntrySource::Components(items.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect())
    }

    #[test]
    fn parses_forms_and_multivectors() {
        let mut s = StructureSet::new("t", chart());
        s.insert_source("eta", Kind::OneForm, &comps(&[("dz", "1"), ("dx", "-y")])).unwrap();
        s.insert_source("pi", Kind::Bivector, &comps(&[("x^y", "1"), ("y^z", "-y")])).unwrap();
        let eta = s.tensor("eta").unwrap();
        assert!(eta.at(2).is_one() && eta.at(1).is_zero());
        let pi = s.tensor("pi").unwrap();
        assert!(pi.get(&[1, 0]).as_const() == Some((-1).into()));
    }

    #[test]
    fn rejects_bad_keys() {
        let mut s = StructureSet::new("t", chart());
        let e = s.insert_source("omega", Kind::TwoForm, &comps(&[("dy^dx", "1")]));
        assert!(matches!(e, Err(StructureError::Key { .. })));
        let e = s.insert_source("omega", Kind::TwoForm, &comps(&[("dx^dw", "1")]));
        assert!(matches!(e, Err(StructureError::Key { .. })));
        let e = s.insert_source("eta", Kind::OneForm, &comps(&[("x", "1")]));
        assert!(matches!(e, Err(StructureError::Key { .. })));
        let e = s.insert_source("eta", Kind::TwoForm, &comps(&[("dx^dy", "1")]));
        assert!(matches!(e, Err(StructureError::KindMismatch { .. })));
        let e = s.insert_source("zeta", Kind::OneForm, &comps(&[]));
        assert!(matches!(e, Err(StructureError::UnknownEntry(_))));
    }

    #[test]
    fn matrix_must_match_chart() {
        let mut s = StructureSet::new("t", chart());
        let m = EntrySource::Matrix(vec![vec!["1".into(), "0".into()], vec!["0".into(), "1".into()]]);
        assert!(matches!(
            s.insert_source("g", Kind::Metric, &m),
            Err(StructureError::Shape { .. })
        ));
    }

    #[test]
    fn parse_error_names_location() {
        let mut s = StructureSet::new("t", chart());
        let e = s.insert_source("f", Kind::Scalar, &EntrySource::Expr("x +* y".into())).unwrap_err();
        assert!(e.to_string().contains("entry `f`"));
    }
}

/// Where the Jacobi pair of a structure set comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSource {
    /// `pi` given directly, `xi` defaulting to zero.
    Explicit,
    /// Induced by `(omega, theta)`.
    Lcs,
    /// `pi(a, b) = g(#a, Phi #b)` from an almost contact metric structure.
    AlmostContact,
    /// Induced by a contact form `eta`.
    Contact,
}

impl StructureSet {
    fn zero_form(&self) -> TensorField {
        TensorField::zero(self.dim(), vec![Variance::Down], true)
    }

    /// `theta`, or zero when absent.
    pub fn theta_or_zero(&self) -> TensorField {
        self.tensor("theta").cloned().unwrap_or_else(|| self.zero_form())
    }

    pub fn metric(&self, s: &crate::chart::Sampler) -> crate::Result<Option<crate::metric::MetricStructure>> {
        match self.matrix("g") {
            Some(g) => Ok(Some(crate::metric::MetricStructure::new(g.clone(), s)?)),
            None => Ok(None),
        }
    }

    pub fn almost_contact(
        &self,
        s: &crate::chart::Sampler,
    ) -> crate::Result<Option<crate::compat::AlmostContactMetric>> {
        let (Some(phi), Some(xi), Some(eta), Some(m)) =
            (self.matrix("phi"), self.tensor("xi"), self.tensor("eta"), self.metric(s)?)
        else {
            return Ok(None);
        };
        Ok(Some(crate::compat::AlmostContactMetric::new(phi.clone(), xi.clone(), eta.clone(), m)?))
    }

    pub fn lcs(&self) -> crate::Result<Option<crate::contact_lcs::LcsStructure>> {
        match self.tensor("omega") {
            Some(w) => Ok(Some(crate::contact_lcs::LcsStructure::new(w.clone(), self.theta_or_zero())?)),
            None => Ok(None),
        }
    }

    pub fn contact(&self) -> crate::Result<Option<crate::contact_lcs::ContactStructure>> {
        match self.tensor("eta") {
            Some(e) => Ok(Some(crate::contact_lcs::ContactStructure::new(e.clone())?)),
            None => Ok(None),
        }
    }

    /// The Jacobi pair carried by the set: an explicit `pi`, else the one
    /// induced by `omega`, by `(phi, xi, eta, g)`, or by a contact `eta`.
    pub fn jacobi_pair(
        &self,
        s: &crate::chart::Sampler,
    ) -> crate::Result<Option<(crate::jacobi::JacobiPair, PairSource)>> {
        use crate::jacobi::JacobiPair;
        if let Some(pi) = self.tensor("pi") {
            let xi = self
                .tensor("xi")
                .cloned()
                .unwrap_or_else(|| TensorField::zero(self.dim(), vec![Variance::Up], true));
            return Ok(Some((JacobiPair::new(pi.clone(), xi)?, PairSource::Explicit)));
        }
        if let Some(l) = self.lcs()? {
            return Ok(Some((crate::contact_lcs::lcs_jacobi(&l, s)?, PairSource::Lcs)));
        }
        if let Some(acm) = self.almost_contact(s)? {
            return Ok(Some((crate::compat::acs_bivector(&acm)?, PairSource::AlmostContact)));
        }
        if let Some(c) = self.contact()? {
            return Ok(Some((crate::contact_lcs::contact_jacobi(&c, s)?, PairSource::Contact)));
        }
        Ok(None)
    }

    /// The 1-form for the bracket `[., .]^lambda`: `lambda`, else `eta`,
    /// else `theta`, else zero.
    pub fn algebroid_lambda(&self) -> TensorField {
        ["lambda", "eta", "theta"]
            .iter()
            .find_map(|n| self.tensor(n).cloned())
            .unwrap_or_else(|| self.zero_form())
    }
}
