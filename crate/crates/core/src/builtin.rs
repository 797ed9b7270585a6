//! Built-in example structures.

use crate::chart::Chart;
use crate::structure::{expected_kind, EntrySource, StructureError, StructureSet};

enum Src {
    C(&'static [(&'static str, &'static str)]),
    M(&'static [&'static [&'static str]]),
    E(&'static str),
}

struct Spec {
    name: &'static str,
    summary: &'static str,
    coords: &'static [&'static str],
    entries: &'static [(&'static str, Src)],
    claims: &'static [&'static str],
}

const CONTACT_G: &[&[&str]] = &[&["1+y^2", "0", "-y"], &["0", "1", "0"], &["-y", "0", "1"]];
const CONTACT_PHI: &[&[&str]] = &[&["0", "1", "0"], &["-1", "0", "0"], &["0", "y", "0"]];
const KENMOTSU_PHI: &[&[&str]] = &[&["0", "-1", "0"], &["1", "0", "0"], &["0", "0", "0"]];
const ID2: &[&[&str]] = &[&["1", "0"], &["0", "1"]];
const ID3: &[&[&str]] = &[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "1"]];
const ID4: &[&[&str]] = &[
    &["1", "0", "0", "0"],
    &["0", "1", "0", "0"],
    &["0", "0", "1", "0"],
    &["0", "0", "0", "1"],
];
const EXP_MX4: &[&[&str]] = &[
    &["exp(-x)", "0", "0", "0"],
    &["0", "exp(-x)", "0", "0"],
    &["0", "0", "exp(-x)", "0"],
    &["0", "0", "0", "exp(-x)"],
];
const LCS_OMEGA: &[(&str, &str)] = &[("dx^dy", "exp(-x)"), ("du^dv", "exp(-x)")];

const SPECS: &[Spec] = &[
    Spec {
        name: "poisson-r2",
        summary: "constant Poisson bivector on the plane, Euclidean metric",
        coords: &["x", "y"],
        entries: &[("pi", Src::C(&[("x^y", "1")])), ("g", Src::M(ID2))],
        claims: &["jacobi", "algebroid", "connection", "compatibility"],
    },
    Spec {
        name: "contact-r3",
        summary: "contact form dz - y dx with its associated contact metric structure",
        coords: &["x", "y", "z"],
        entries: &[
            ("eta", Src::C(&[("dx", "-y"), ("dz", "1")])),
            ("xi", Src::C(&[("z", "1")])),
            ("g", Src::M(CONTACT_G)),
            ("phi", Src::M(CONTACT_PHI)),
        ],
        claims: &["jacobi", "algebroid", "contact", "connection"],
    },
    Spec {
        name: "kenmotsu-r3",
        summary: "warped product dt^2 + e^t (dx^2 + dy^2), a 1/2-Kenmotsu structure",
        coords: &["x", "y", "t"],
        entries: &[
            ("eta", Src::C(&[("dt", "1")])),
            ("xi", Src::C(&[("t", "1")])),
            ("g", Src::M(&[&["exp(t)", "0", "0"], &["0", "exp(t)", "0"], &["0", "0", "1"]])),
            ("phi", Src::M(KENMOTSU_PHI)),
        ],
        claims: &["kenmotsu", "connection"],
    },
    Spec {
        name: "kenmotsu-alpha1-r3",
        summary: "warped product dt^2 + e^(2t) (dx^2 + dy^2), Kenmotsu but not 1/2-Kenmotsu",
        coords: &["x", "y", "t"],
        entries: &[
            ("eta", Src::C(&[("dt", "1")])),
            ("xi", Src::C(&[("t", "1")])),
            ("g", Src::M(&[&["exp(2*t)", "0", "0"], &["0", "exp(2*t)", "0"], &["0", "0", "1"]])),
            ("phi", Src::M(KENMOTSU_PHI)),
        ],
        claims: &["connection"],
    },
    Spec {
        name: "lcs-r4",
        summary: "conformally symplectic e^-x (dx^dy + du^dv), theta = dx, Hermitian metric e^-x",
        coords: &["x", "y", "u", "v"],
        entries: &[
            ("omega", Src::C(LCS_OMEGA)),
            ("theta", Src::C(&[("dx", "1")])),
            ("g", Src::M(EXP_MX4)),
            ("f", Src::E("x")),
        ],
        claims: &["lcs", "jacobi", "algebroid", "connection", "conformal-kahler"],
    },
    Spec {
        name: "kahler-r4",
        summary: "flat Kaehler structure dx^dy + du^dv with the Euclidean metric",
        coords: &["x", "y", "u", "v"],
        entries: &[
            ("omega", Src::C(&[("dx^dy", "1"), ("du^dv", "1")])),
            ("theta", Src::C(&[])),
            ("g", Src::M(ID4)),
            ("f", Src::E("0")),
        ],
        claims: &[
            "lcs",
            "jacobi",
            "algebroid",
            "connection",
            "compatibility",
            "conformal-kahler",
        ],
    },
    Spec {
        name: "jacobi-violate-r3",
        summary: "negative: dx^dy + x dy^dz with xi = dz is not a Jacobi pair",
        coords: &["x", "y", "z"],
        entries: &[
            ("pi", Src::C(&[("x^y", "1"), ("y^z", "x")])),
            ("xi", Src::C(&[("z", "1")])),
            ("lambda", Src::C(&[])),
            ("g", Src::M(ID3)),
        ],
        claims: &["jacobi"],
    },
    Spec {
        name: "nonclosed-theta-r4",
        summary: "negative: lcs-r4 with theta = y dx, which is not closed",
        coords: &["x", "y", "u", "v"],
        entries: &[
            ("omega", Src::C(LCS_OMEGA)),
            ("theta", Src::C(&[("dx", "y")])),
            ("g", Src::M(EXP_MX4)),
        ],
        claims: &["lcs"],
    },
];

pub fn names() -> impl Iterator<Item = &'static str> {
    SPECS.iter().map(|s| s.name)
}

pub fn summary(name: &str) -> Option<&'static str> {
    SPECS.iter().find(|s| s.name == name).map(|s| s.summary)
}

/// Builds the named example, or `None` for an unknown name.
pub fn builtin(name: &str) -> Option<Result<StructureSet, StructureError>> {
    let spec = SPECS.iter().find(|s| s.name == name)?;
    Some(build(spec))
}

fn build(spec: &Spec) -> Result<StructureSet, StructureError> {
    let chart = Chart::new(spec.coords).expect("builtin coordinates are valid");
    let mut set = StructureSet::new(format!("builtin:{}", spec.name), chart);
    for (name, src) in spec.entries {
        let kind = expected_kind(name).ok_or_else(|| StructureError::UnknownEntry(name.to_string()))?;
        let src = match src {
            Src::C(items) => EntrySource::Components(
                items.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
            ),
            Src::M(rows) => EntrySource::Matrix(
                rows.iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect(),
            ),
            Src::E(e) => EntrySource::Expr(e.to_string()),
        };
        set.insert_source(name, kind, &src)?;
    }
    set.claims = spec.claims.iter().map(|c| c.to_string()).collect();
    Ok(set)
}
