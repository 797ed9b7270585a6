//! JSON structure documents.
//!
//! ```json
//! {
//!   "chart": {"coords": ["x", "y", "z"], "box": [[-1, 1], [-1, 1], [-1, 1]]},
//!   "structures": {
//!     "eta": {"kind": "one_form", "components": {"dz": "1", "dx": "-y"}},
//!     "g": {"kind": "metric", "matrix": [["1+y^2", "0", "-y"], ["0", "1", "0"], ["-y", "0", "1"]]}
//!   },
//!   "claims": ["contact"]
//! }
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use jacobi_core::builtin;
use jacobi_core::chart::ChartError;
use jacobi_core::structure::StructureError;
use jacobi_core::{Chart, EntrySource, Kind, StructureSet};
use serde::Deserialize;

use crate::suite::SUITES;

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("schema error: {0}")]
    Schema(#[from] serde_json::Error),
    #[error("chart: {0}")]
    Chart(#[from] ChartError),
    #[error("{0}")]
    Structure(#[from] StructureError),
    #[error("entry `{name}`: unknown kind `{kind}`")]
    UnknownKind { name: String, kind: String },
    #[error("entry `{name}`: kind {kind} needs the `{field}` field")]
    MissingField {
        name: String,
        kind: &'static str,
        field: &'static str,
    },
    #[error("unknown claim `{0}`")]
    UnknownClaim(String),
    #[error("unknown builtin `{0}` (see `verify list`)")]
    UnknownBuiltin(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    chart: RawChart,
    #[serde(default)]
    structures: BTreeMap<String, RawEntry>,
    #[serde(default)]
    claims: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChart {
    #[serde(default)]
    id: Option<String>,
    coords: Vec<String>,
    #[serde(default, rename = "box")]
    bounds: Option<Vec<(f64, f64)>>,
    #[serde(default)]
    avoid_zero_margin: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    kind: String,
    #[serde(default)]
    components: Option<BTreeMap<String, String>>,
    #[serde(default)]
    matrix: Option<Vec<Vec<String>>>,
    #[serde(default)]
    value: Option<String>,
}

/// Parses a document from JSON text. `fallback_id` names the chart when the
/// document does not.
pub fn parse_document(text: &str, fallback_id: &str) -> Result<StructureSet, DocumentError> {
    let raw: RawDocument = serde_json::from_str(text)?;
    let chart = match raw.chart.bounds {
        Some(b) => Chart::with_box(&raw.chart.coords, b)?,
        None => Chart::new(&raw.chart.coords)?,
    };
    let chart = match raw.chart.avoid_zero_margin {
        Some(m) => chart.with_margin(m),
        None => chart,
    };
    let id = raw.chart.id.unwrap_or_else(|| fallback_id.to_string());
    let mut set = StructureSet::new(id, chart);
    for (name, entry) in &raw.structures {
        let kind = Kind::from_name(&entry.kind).ok_or_else(|| DocumentError::UnknownKind {
            name: name.clone(),
            kind: entry.kind.clone(),
        })?;
        let missing = |field| DocumentError::MissingField {
            name: name.clone(),
            kind: kind.name(),
            field,
        };
        let src = match kind {
            Kind::Metric | Kind::Endomorphism => {
                EntrySource::Matrix(entry.matrix.clone().ok_or_else(|| missing("matrix"))?)
            }
            Kind::Scalar => EntrySource::Expr(entry.value.clone().ok_or_else(|| missing("value"))?),
            _ => EntrySource::Components(
                entry
                    .components
                    .clone()
                    .ok_or_else(|| missing("components"))?
                    .into_iter()
                    .collect(),
            ),
        };
        set.insert_source(name, kind, &src)?;
    }
    for c in &raw.claims {
        if !SUITES.contains(&c.as_str()) || c == "all" {
            return Err(DocumentError::UnknownClaim(c.clone()));
        }
    }
    set.claims = raw.claims;
    Ok(set)
}

pub fn load_document(path: &Path) -> Result<StructureSet, DocumentError> {
    let text = std::fs::read_to_string(path).map_err(|source| DocumentError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let fallback = path
        .file_name()
        .map(|f| f.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    parse_document(&text, &fallback)
}

pub fn load_builtin(name: &str) -> Result<StructureSet, DocumentError> {
    match builtin::builtin(name) {
        Some(r) => Ok(r?),
        None => Err(DocumentError::UnknownBuiltin(name.to_string())),
    }
}
