//! Verification suites.
//!
//! Every check measures a defect field over the sample points. There are four
//! kinds:
//!
//! - identities hold for any input and always count toward `overall`;
//! - properties say the structure is of a given type; they count when the
//!   suite was asked for by name or is among the document's claims, and are
//!   informational otherwise;
//! - conditional checks measure a conclusion together with its hypotheses
//!   and are `confirmed`, `hypothesis-not-met` or `VIOLATED`;
//! - equivalences compare two conditions under common hypotheses and are
//!   `VIOLATED` when exactly one of them holds.
//!
//! Only failed identities, failed counted properties and `VIOLATED` results
//! fail a run.

use jacobi_core::compat::{self, AlmostContactMetric, ConformalData};
use jacobi_core::contact_lcs::{self, ContactStructure, LcsStructure};
use jacobi_core::defect::{evaluate_fields, measure_defect, measure_sides};
use jacobi_core::frame::Frames;
use jacobi_core::jacobi::{
    jacobiator_defect, koszul_bracket, leibniz_defect, sharp_pi, torsion_defect, AlgebroidData,
};
use jacobi_core::metric::{self, christoffel};
use jacobi_core::random::FieldGen;
use jacobi_core::structure::PairSource;
use jacobi_core::tensor::{exterior_derivative, lie_bracket, lie_derivative, schouten_bb, wedge};
use jacobi_core::{
    ContravariantPack, JacobiPair, Measurement, Sampler, ScalarField, StructureSet, TensorField, Tolerance,
};
use rayon::prelude::*;

use crate::report::{CheckRecord, DefectReport, Skipped, Status};

pub const SUITES: [&str; 9] = [
    "jacobi",
    "algebroid",
    "contact",
    "lcs",
    "connection",
    "compatibility",
    "kenmotsu",
    "conformal-kahler",
    "all",
];

/// Random 1-form pairs or triples per quantified identity.
pub const TRIALS: usize = 10;

#[derive(Debug, Clone, Copy)]
pub struct Config {
    pub points: usize,
    pub seed: u64,
    pub tol: Tolerance,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            points: jacobi_core::DEFAULT_POINTS,
            seed: jacobi_core::DEFAULT_SEED,
            tol: Tolerance::default(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error("unknown suite `{0}` (expected one of: {list})", list = SUITES.join(", "))]
    UnknownSuite(String),
    #[error("suite `{suite}` needs {needs}")]
    Missing { suite: String, needs: String },
    #[error(transparent)]
    Core(#[from] jacobi_core::Error),
}

impl From<jacobi_core::defect::DefectError> for SuiteError {
    fn from(e: jacobi_core::defect::DefectError) -> Self {
        SuiteError::Core(e.into())
    }
}

impl From<jacobi_core::tensor::TensorError> for SuiteError {
    fn from(e: jacobi_core::tensor::TensorError) -> Self {
        SuiteError::Core(e.into())
    }
}

type Result<T> = std::result::Result<T, SuiteError>;

/// What a suite needs from the structure set, or `None` when satisfied.
pub fn missing_entries(suite: &str, set: &StructureSet) -> Option<String> {
    let has = |n: &str| set.has(n);
    let has_pair = has("pi") || has("omega") || has("eta");
    let need = |names: &[&str]| -> Option<String> {
        let miss: Vec<&str> = names.iter().copied().filter(|n| !has(n)).collect();
        (!miss.is_empty()).then(|| format!("entries {}", miss.join(", ")))
    };
    match suite {
        "jacobi" | "algebroid" => (!has_pair).then(|| "one of the entries pi, omega, eta".to_string()),
        "contact" => need(&["eta"]).or_else(|| {
            let n = set.dim();
            (n < 3 || n % 2 == 0).then(|| format!("an odd-dimensional chart of dimension >= 3, got {n}"))
        }),
        "lcs" => need(&["omega"]),
        "connection" | "compatibility" => {
            need(&["g"]).or_else(|| (!has_pair).then(|| "one of the entries pi, omega, eta".to_string()))
        }
        "kenmotsu" => need(&["phi", "xi", "eta", "g"]),
        "conformal-kahler" => need(&["omega", "g", "f"]),
        _ => None,
    }
}

/// Runs `name` on `set`. Under `all`, suites whose entries are missing are
/// listed as skipped; a named suite with missing entries is an error.
pub fn run_suite(name: &str, set: &StructureSet, cfg: &Config) -> Result<DefectReport> {
    if !SUITES.contains(&name) {
        return Err(SuiteError::UnknownSuite(name.to_string()));
    }
    let mut report = DefectReport::new(&set.id, name, cfg.seed, cfg.points, cfg.tol.abs, cfg.tol.rel);
    if name == "all" {
        let runnable: Vec<&str> = SUITES[..SUITES.len() - 1]
            .iter()
            .copied()
            .filter(|s| {
                if let Some(needs) = missing_entries(s, set) {
                    report.skipped.push(Skipped {
                        suite: s.to_string(),
                        reason: format!("needs {needs}"),
                    });
                    false
                } else {
                    true
                }
            })
            .collect();
        let results: Vec<Result<Vec<CheckRecord>>> = runnable
            .par_iter()
            .map(|s| run_one(s, set, cfg, set.claims.iter().any(|c| c == s)))
            .collect();
        for r in results {
            report.checks.extend(r?);
        }
    } else {
        if let Some(needs) = missing_entries(name, set) {
            return Err(SuiteError::Missing {
                suite: name.to_string(),
                needs,
            });
        }
        report.checks = run_one(name, set, cfg, true)?;
    }
    report.recompute();
    Ok(report)
}

fn run_one(name: &str, set: &StructureSet, cfg: &Config, counted: bool) -> Result<Vec<CheckRecord>> {
    let cx = Ctx {
        set,
        s: Sampler::new(set.chart.clone()).with_count(cfg.points).with_seed(cfg.seed),
        tol: cfg.tol,
        seed: cfg.seed,
        counted,
        suite: name,
        out: Vec::new(),
    };
    match name {
        "jacobi" => jacobi_suite(cx),
        "algebroid" => algebroid_suite(cx),
        "contact" => contact_suite(cx),
        "lcs" => lcs_suite(cx),
        "connection" => connection_suite(cx),
        "compatibility" => compatibility_suite(cx),
        "kenmotsu" => kenmotsu_suite(cx),
        "conformal-kahler" => conformal_suite(cx),
        other => Err(SuiteError::UnknownSuite(other.to_string())),
    }
}

struct Ctx<'a> {
    set: &'a StructureSet,
    s: Sampler,
    tol: Tolerance,
    seed: u64,
    counted: bool,
    suite: &'a str,
    out: Vec<CheckRecord>,
}

fn fnv(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

fn nan_measurement() -> Measurement {
    Measurement {
        max_abs_defect: f64::NAN,
        scale: f64::NAN,
    }
}

fn combine(ms: &[Measurement]) -> Measurement {
    ms.iter().fold(Measurement::exact_zero(), |a, b| a.max(*b))
}

fn comps(ts: &[TensorField]) -> Vec<ScalarField> {
    ts.iter().flat_map(|t| t.components().iter().cloned()).collect()
}

impl<'a> Ctx<'a> {
    fn dim(&self) -> usize {
        self.set.dim()
    }

    fn gen(&self, id: &str) -> FieldGen {
        FieldGen::new(self.dim(), self.seed ^ fnv(id))
    }

    /// `n` random polynomial 1-forms.
    fn forms(&self, id: &str, n: usize) -> Vec<TensorField> {
        let mut g = self.gen(id);
        (0..n).map(|_| g.polynomial_one_form()).collect()
    }

    fn pairs(&self, id: &str) -> Vec<(TensorField, TensorField)> {
        let f = self.forms(id, 2 * TRIALS);
        f.chunks(2).map(|c| (c[0].clone(), c[1].clone())).collect()
    }

    fn triples(&self, id: &str) -> Vec<(TensorField, TensorField, TensorField)> {
        let f = self.forms(id, 3 * TRIALS);
        f.chunks(3).map(|c| (c[0].clone(), c[1].clone(), c[2].clone())).collect()
    }

    fn frames(&self, id: &str) -> Frames {
        Frames::new(self.dim(), 3, self.seed ^ fnv(id))
    }

    fn measure(&self, defect: &[ScalarField], scale: &[ScalarField]) -> Result<Measurement> {
        Ok(measure_defect(defect, scale, &self.s)?)
    }

    fn sides(&self, lhs: &[ScalarField], rhs: &[ScalarField]) -> Result<Measurement> {
        Ok(measure_sides(lhs, rhs, &self.s)?)
    }

    fn ok(&self, m: &Measurement) -> bool {
        self.tol.passes(m)
    }

    fn record(&self, name: &str, anchor: &str, m: Measurement, status: Status, informational: bool) -> CheckRecord {
        CheckRecord {
            id: format!("{}.{name}", self.suite),
            anchor: anchor.to_string(),
            max_abs_defect: m.max_abs_defect,
            scale: m.scale,
            pass: !matches!(status, Status::Fail | Status::Violated),
            status,
            informational,
            hypothesis_defect: None,
            note: None,
        }
    }

    fn push(&mut self, c: CheckRecord) -> usize {
        self.out.push(c);
        self.out.len() - 1
    }

    fn note(&mut self, idx: usize, note: impl Into<String>) {
        self.out[idx].note = Some(note.into());
    }

    fn identity(&mut self, name: &str, anchor: &str, m: Measurement) -> usize {
        let status = if self.ok(&m) { Status::Pass } else { Status::Fail };
        self.push(self.record(name, anchor, m, status, false))
    }

    fn property(&mut self, name: &str, anchor: &str, m: Measurement) -> usize {
        let status = if self.ok(&m) { Status::Pass } else { Status::Fail };
        self.push(self.record(name, anchor, m, status, !self.counted))
    }

    /// Never counts toward `overall`.
    fn info(&mut self, name: &str, anchor: &str, m: Measurement) -> usize {
        let status = if self.ok(&m) { Status::Pass } else { Status::Fail };
        self.push(self.record(name, anchor, m, status, true))
    }

    fn hypotheses_ok(&self, hyp: &[Measurement]) -> bool {
        hyp.iter().all(|h| self.ok(h))
    }

    fn conditional(&mut self, name: &str, anchor: &str, hyp: &[Measurement], concl: Measurement) -> usize {
        let status = if !self.hypotheses_ok(hyp) {
            Status::HypothesisNotMet
        } else if self.ok(&concl) {
            Status::Confirmed
        } else {
            Status::Violated
        };
        let mut c = self.record(name, anchor, concl, status, false);
        c.hypothesis_defect = Some(combine(hyp).max_abs_defect);
        self.push(c)
    }

    /// `left` holds iff `right` holds, given `hyp`.
    fn equivalence(
        &mut self,
        name: &str,
        anchor: &str,
        hyp: &[Measurement],
        left: (&str, Measurement),
        right: (&str, Measurement),
    ) -> usize {
        let (l, r) = (self.ok(&left.1), self.ok(&right.1));
        let status = if !self.hypotheses_ok(hyp) {
            Status::HypothesisNotMet
        } else if l == r {
            Status::Confirmed
        } else {
            Status::Violated
        };
        let mut c = self.record(name, anchor, left.1.max(right.1), status, false);
        c.hypothesis_defect = Some(combine(hyp).max_abs_defect);
        c.note = Some(format!(
            "{}: {} ({:.3e}); {}: {} ({:.3e})",
            left.0,
            if l { "holds" } else { "fails" },
            left.1.max_abs_defect,
            right.0,
            if r { "holds" } else { "fails" },
            right.1.max_abs_defect
        ));
        self.push(c)
    }

    /// A conditional whose hypotheses could not even be set up.
    fn unmet(&mut self, name: &str, anchor: &str, hyp: &[Measurement]) -> usize {
        let mut c = self.record(name, anchor, nan_measurement(), Status::HypothesisNotMet, false);
        c.hypothesis_defect = Some(combine(hyp).max_abs_defect);
        self.push(c)
    }

    fn pair(&self) -> Result<(JacobiPair, PairSource)> {
        self.set.jacobi_pair(&self.s)?.ok_or_else(|| SuiteError::Missing {
            suite: self.suite.to_string(),
            needs: "one of the entries pi, omega, eta".to_string(),
        })
    }

    fn pack(&self, pair: JacobiPair) -> Result<ContravariantPack> {
        let m = self.set.metric(&self.s)?.ok_or_else(|| SuiteError::Missing {
            suite: self.suite.to_string(),
            needs: "entry g".to_string(),
        })?;
        Ok(ContravariantPack::new(pair, m)?)
    }

    // Shared measurements.

    fn jacobi_measurements(&self, pair: &JacobiPair) -> Result<(Measurement, Measurement)> {
        let schouten = schouten_bb(&pair.pi)?;
        let twice = wedge(&pair.xi, &pair.pi)?.scale(&ScalarField::int(2));
        let first = self.sides(schouten.components(), twice.components())?;
        let lie = lie_derivative(&pair.xi, &pair.pi)?;
        let second = self.measure(lie.components(), &[])?;
        Ok((first, second))
    }

    fn almost_lie(&self, data: &AlgebroidData, id: &str) -> Result<Measurement> {
        let mut d = Vec::new();
        let mut scale = Vec::new();
        for (a, b) in self.pairs(id) {
            let t = torsion_defect(data, &a, &b)?;
            d.extend(t.d1.components().iter().cloned());
            scale.extend(t.scale_fields());
        }
        self.measure(&d, &scale)
    }

    fn isometry(&self, pair: &JacobiPair, pack_metric: &jacobi_core::MetricStructure, id: &str) -> Result<Measurement> {
        let m = compat::assoc_isometry_defect(pair, pack_metric);
        self.measure(&self.frames(id).cobilinear_family(&m), &[])
    }

    fn acs_measurements(&self, acm: &AlmostContactMetric) -> Result<(Measurement, Measurement)> {
        let fr = self.frames("acs");
        let d = compat::almost_contact_defect(acm)?;
        let mut f = fr.endomorphism_family(&d.square);
        f.push(d.normalization.clone());
        f.extend(d.phi_xi.components().iter().cloned());
        f.extend(d.eta_phi.components().iter().cloned());
        let structure = self.measure(&f, &[])?;
        let (form, flat) = compat::acs_metric_defect(acm)?;
        let mut f = fr.bilinear_family(&form);
        f.extend(flat.components().iter().cloned());
        let metric = self.measure(&f, &[])?;
        Ok((structure, metric))
    }

    fn compatibility_measurement(&self, pack: &ContravariantPack) -> Result<(Measurement, Measurement)> {
        let mut f7 = Vec::new();
        for (a, b, c) in self.triples("eq7") {
            f7.push(compat::compatibility_eq7(pack, &a, &b, &c)?);
        }
        let mut f8 = Vec::new();
        for (a, b) in self.pairs("eq8") {
            f8.extend(compat::compatibility_eq8(pack, &a, &b)?.components().iter().cloned());
        }
        Ok((self.measure(&f7, &[])?, self.measure(&f8, &[])?))
    }
}

const PAIR_NOTE: &str = "pair source";

fn pair_source(p: PairSource) -> &'static str {
    match p {
        PairSource::Explicit => "explicit pi and xi",
        PairSource::Lcs => "induced by (omega, theta)",
        PairSource::AlmostContact => "pi(a, b) = g(#a, Phi #b) from (Phi, xi, eta, g)",
        PairSource::Contact => "induced by the contact form eta",
    }
}

fn jacobi_suite(mut cx: Ctx) -> Result<Vec<CheckRecord>> {
    let (pair, src) = cx.pair()?;
    let (first, second) = cx.jacobi_measurements(&pair)?;
    let i = cx.property("schouten", "[pi, pi] = 2 xi ^ pi", first);
    cx.note(i, format!("{PAIR_NOTE}: {}", pair_source(src)));
    cx.property("lie_xi_pi", "L_xi pi = 0", second);

    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    let sbb = schouten_bb(&pair.pi)?;
    for (a, b, c) in cx.triples("calibration") {
        let sa = sharp_pi(&pair.pi, &a)?;
        let sb = sharp_pi(&pair.pi, &b)?;
        let k = sharp_pi(&pair.pi, &koszul_bracket(&pair.pi, &a, &b)?)?;
        lhs.push(c.pair(&k)?.sub(&c.pair(&lie_bracket(&sa, &sb)?)?));
        rhs.push(sbb.evaluate(&[&a, &b, &c])?.half());
    }
    let m = cx.sides(&lhs, &rhs)?;
    cx.identity("calibration", "c(#[a, b]_pi) - c([#a, #b]) = 1/2 [pi, pi](a, b, c)", m);
    Ok(cx.out)
}

fn algebroid_suite(mut cx: Ctx) -> Result<Vec<CheckRecord>> {
    let (pair, src) = cx.pair()?;
    let lambda = cx.set.algebroid_lambda();
    let lambda_name = ["lambda", "eta", "theta"]
        .into_iter()
        .find(|n| cx.set.has(n))
        .unwrap_or("0");
    let data = AlgebroidData::new(pair.clone(), lambda)?;

    let mut g = cx.gen("leibniz");
    let mut f = Vec::new();
    for (a, b) in cx.pairs("leibniz") {
        let phi = g.polynomial();
        f.extend(leibniz_defect(&data, &a, &b, &phi)?.components().iter().cloned());
    }
    let m = cx.measure(&f, &[])?;
    cx.identity("leibniz", "[a, f b] = f [a, b] + (#a)(f) b", m);

    let (j1, j2) = cx.jacobi_measurements(&pair)?;
    let mut d2 = Vec::new();
    let mut scale = Vec::new();
    for (a, b) in cx.pairs("torsion") {
        let t = torsion_defect(&data, &a, &b)?;
        d2.extend(t.d2.components().iter().cloned());
        scale.extend(t.scale_fields());
    }
    let m = cx.measure(&d2, &scale)?;
    let i = cx.conditional(
        "torsion",
        "#[a, b] - [#a, #b] = pi(a, b)(xi - #lambda) for a Jacobi pair",
        &[j1, j2],
        m,
    );
    cx.note(i, format!("{PAIR_NOTE}: {}; lambda = {lambda_name}", pair_source(src)));

    let m = cx.almost_lie(&data, "torsion")?;
    cx.property("almost_lie", "#[a, b] = [#a, #b]", m);

    let mut f = Vec::new();
    for (a, b, c) in cx.triples("jacobiator") {
        f.extend(jacobiator_defect(&data, &a, &b, &c)?.components().iter().cloned());
    }
    let m = cx.measure(&f, &[])?;
    cx.property("jacobiator", "[a, [b, c]] + [b, [c, a]] + [c, [a, b]] = 0", m);
    Ok(cx.out)
}

fn contact_suite(mut cx: Ctx) -> Result<Vec<CheckRecord>> {
    let eta = cx.set.tensor("eta").expect("checked").clone();
    let c = ContactStructure::new(eta)?;
    let (_, volume_ok) = contact_lcs::contact_volume_defect(&c, &cx.s, cx.tol.abs)?;
    let volume = Measurement {
        max_abs_defect: if volume_ok { 0.0 } else { 1.0 },
        scale: 0.0,
    };
    let i = cx.property("volume", "eta ^ (d eta)^n != 0", volume);
    cx.note(i, "0 when the volume form is nonzero at every sample, 1 otherwise");
    let hyp = [volume];

    const ANCHORS: [(&str, &str); 5] = [
        ("reeb", "i_xi d eta = 0, eta(xi) = 1 for xi = #_eta(eta)"),
        ("anchor", "#_{pi, xi} = #_eta"),
        ("jacobi", "[pi, pi] = 2 xi ^ pi, L_xi pi = 0"),
        ("jacobiator", "[a, [b, c]]^eta + cyclic = 0"),
        ("xi_is_reeb", "xi = #_eta(eta)"),
    ];
    if !volume_ok {
        for (name, anchor) in ANCHORS {
            if name != "xi_is_reeb" || cx.set.has("xi") {
                cx.unmet(name, anchor, &hyp);
            }
        }
        return Ok(cx.out);
    }

    let reeb = contact_lcs::reeb_defect(&c, &cx.s)?;
    let m = Measurement {
        max_abs_defect: reeb,
        scale: 0.0,
    };
    cx.conditional("reeb", ANCHORS[0].1, &hyp, m);

    let a = contact_lcs::contact_anchor_defect(&c, &cx.s)?;
    let m = cx.measure(a.entries(), &[])?;
    cx.identity("anchor", ANCHORS[1].1, m);

    let pair = contact_lcs::contact_jacobi(&c, &cx.s)?;
    let (j1, j2) = cx.jacobi_measurements(&pair)?;
    cx.conditional("jacobi", ANCHORS[2].1, &hyp, j1.max(j2));

    let data = AlgebroidData::new(pair.clone(), c.eta.clone())?;
    let mut f = Vec::new();
    for (a, b, g) in cx.triples("contact-jacobiator") {
        f.extend(jacobiator_defect(&data, &a, &b, &g)?.components().iter().cloned());
    }
    let m = cx.measure(&f, &[])?;
    cx.conditional("jacobiator", ANCHORS[3].1, &hyp, m);

    if let Some(xi) = cx.set.tensor("xi") {
        let d = xi.minus(&pair.xi);
        let m = cx.measure(d.components(), &[])?;
        cx.property("xi_is_reeb", ANCHORS[4].1, m);
    }
    Ok(cx.out)
}

fn lcs_suite(mut cx: Ctx) -> Result<Vec<CheckRecord>> {
    let l = cx.set.lcs()?.expect("checked");
    let det = l.flat_matrix().det();
    let values = evaluate_fields(std::slice::from_ref(&det), &cx.s)?;
    let min = values[0].iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    let nondeg = Measurement {
        max_abs_defect: if min > cx.tol.abs { 0.0 } else { 1.0 },
        scale: 0.0,
    };
    let i = cx.property("nondegenerate", "omega^n != 0", nondeg);
    cx.note(i, format!("min |det omega| = {min:.6e}"));

    let (w, t) = contact_lcs::lcs_defect(&l)?;
    let mw = cx.measure(w.components(), &[])?;
    let mt = cx.measure(t.components(), &[])?;
    cx.property("closed_omega", "d omega + theta ^ omega = 0", mw);
    cx.property("closed_theta", "d theta = 0", mt);

    const ANCHORS: [(&str, &str); 5] = [
        ("jacobi", "[pi, pi] = 2 xi ^ pi, L_xi pi = 0 for the induced pair"),
        ("equivalence", "(omega, theta) lcs <=> induced (pi, xi) Jacobi"),
        ("bracket_identity", "(d omega + theta ^ omega)(#a, #b, #c) = (1/2 [pi, pi] - xi ^ pi)(a, b, c)"),
        ("lie_identity", "(L_xi omega)(#a, #b) = -(L_xi pi)(a, b)"),
        ("sharp", "i_{#_pi a} omega = -a"),
    ];
    if min <= cx.tol.abs {
        for (name, anchor) in ANCHORS {
            cx.unmet(name, anchor, &[nondeg]);
        }
        return Ok(cx.out);
    }

    let pair = contact_lcs::lcs_jacobi(&l, &cx.s)?;
    let (j1, j2) = cx.jacobi_measurements(&pair)?;
    let jac = j1.max(j2);
    cx.property("jacobi", ANCHORS[0].1, jac);
    cx.equivalence("equivalence", ANCHORS[1].1, &[nondeg], ("lcs", mw.max(mt)), ("Jacobi", jac));

    let mut first = Vec::new();
    let mut second = Vec::new();
    for (a, b, c) in cx.triples("lcs-identities") {
        let (f, s) = contact_lcs::lemma14_defect(&l, &a, &b, &c, &cx.s)?;
        first.push(f);
        second.push(s);
    }
    let m = cx.measure(&first, &[])?;
    cx.identity("bracket_identity", ANCHORS[2].1, m);
    let m = cx.measure(&second, &[])?;
    cx.identity("lie_identity", ANCHORS[3].1, m);

    let mut f = Vec::new();
    for (a, _) in cx.pairs("lcs-sharp") {
        f.extend(contact_lcs::lcs_sharp_defect(&l, &a, &cx.s)?.components().iter().cloned());
    }
    let m = cx.measure(&f, &[])?;
    cx.identity("sharp", ANCHORS[4].1, m);
    Ok(cx.out)
}

fn connection_suite(mut cx: Ctx) -> Result<Vec<CheckRecord>> {
    let (pair, src) = cx.pair()?;
    let pack = cx.pack(pair.clone())?;
    let cp = christoffel(&pack.metric);
    let fr = cx.frames("connection");

    let m = cx.measure(&metric::torsion_free_defect(&cp), &[])?;
    cx.identity("torsion_free", "Gamma^k_ij = Gamma^k_ji", m);
    let m = cx.measure(&fr.tensor_family(&metric::metric_parallel_defect(&cp)?), &[])?;
    cx.identity("metric_parallel", "nabla g = 0", m);
    let m = cx.measure(&metric::inverse_derivative_defect(&pack.metric), &[])?;
    cx.identity("inverse_derivative", "d(g*) = -g* (dg) g*", m);
    let m = cx.measure(&fr.bilinear_family(&metric::j_skew_defect(&pack)), &[])?;
    cx.identity("j_skew", "g(JX, Y) + g(X, JY) = 0", m);
    let m = cx.measure(&fr.endomorphism_family(&metric::j_intertwine_defect(&pack)), &[])?;
    cx.identity("j_intertwine", "J = #_g J* flat_g", m);

    let mut compat_f = Vec::new();
    let mut bridge_f = Vec::new();
    for (a, b, c) in cx.triples("d-compat") {
        compat_f.push(metric::metric_compatibility_defect(&pack, &a, &b, &c)?);
        bridge_f.push(metric::pairing_bridge_defect(&pack, &a, &b, &c)?);
    }
    let m = cx.measure(&compat_f, &[])?;
    let i = cx.identity("d_metric", "#a(g*(b, c)) = g*(D_a b, c) + g*(b, D_a c)", m);
    cx.note(i, format!("{PAIR_NOTE}: {}", pair_source(src)));
    let mut sym = Vec::new();
    for (a, b) in cx.pairs("d-sym") {
        sym.extend(metric::symmetry_defect(&pack, &a, &b)?.components().iter().cloned());
    }
    let m = cx.measure(&sym, &[])?;
    cx.identity("d_symmetric", "D_a b - D_b a = [a, b]^{lambda_g}", m);
    let m = cx.measure(&bridge_f, &[])?;
    let i = cx.identity("pairing_bridge", "D pi(a, b, c) = g*((D_a J*) b, c)", m);
    cx.note(
        i,
        "D pi(a, b, c) := #a(pi(b, c)) - pi(D_a b, c) - pi(b, D_a c); (D_a J*) b := D_a(J* b) - J*(D_a b)",
    );

    let almost_lie = cx.almost_lie(&pack.algebroid(), "intertwine")?;
    let iso = cx.isometry(&pair, &pack.metric, "isometry")?;
    cx.info("almost_lie", "#[a, b]^{lambda_g} = [#a, #b]", almost_lie);
    cx.info("isometry", "g(#a, #b) = g*(a, b)", iso);
    let mut f = Vec::new();
    for (a, b) in cx.pairs("intertwine") {
        f.extend(metric::anchor_intertwine_defect(&pack, &cp, &a, &b)?.components().iter().cloned());
    }
    let m = cx.measure(&f, &[])?;
    cx.conditional(
        "anchor_intertwine",
        "#(D_a b) = nabla_{#a} #b when # is almost Lie and an isometry",
        &[almost_lie, iso],
        m,
    );
    Ok(cx.out)
}

fn compatibility_suite(mut cx: Ctx) -> Result<Vec<CheckRecord>> {
    let (pair, src) = cx.pair()?;
    let pack = cx.pack(pair.clone())?;
    let (m7, m8) = cx.compatibility_measurement(&pack)?;
    let i = cx.property(
        "eq7",
        "D pi(a, b, c) = 1/2 (c(xi) pi(a, b) - b(xi) pi(a, c) - J*c(xi) g*(a, b) + J*b(xi) g*(a, c))",
        m7,
    );
    cx.note(
        i,
        format!(
            "{PAIR_NOTE}: {}; D pi(a, b, c) := #a(pi(b, c)) - pi(D_a b, c) - pi(b, D_a c)",
            pair_source(src)
        ),
    );
    let i = cx.property(
        "eq8",
        "(D_a J*) b = 1/2 (pi(a, b) flat_g(xi) - b(xi) J*a + g*(a, b) J* flat_g(xi) + J*b(xi) a)",
        m8,
    );
    cx.note(i, "(D_a J*) b := D_a(J* b) - J*(D_a b)");

    let mut f = Vec::new();
    for (a, b, c) in cx.triples("pairing") {
        f.push(compat::compatibility_pairing_defect(&pack, &a, &b, &c)?);
    }
    let m = cx.measure(&f, &[])?;
    cx.identity("pairing", "eq7(a, b, c) = g*(eq8(a, b), c)", m);
    let compatible = m7.max(m8);

    if src == PairSource::AlmostContact {
        let acm = cx.set.almost_contact(&cx.s)?.expect("pair came from it");
        let (s1, s2) = cx.acs_measurements(&acm)?;
        let almost_lie = cx.almost_lie(&pack.algebroid(), "compat-almost-lie")?;
        let cp = christoffel(&acm.metric);
        let hk = compat::half_kenmotsu_defect(&acm, &cp)?;
        let mk = cx.measure(&cx.frames("half-kenmotsu").tensor_family(&hk), &[])?;
        cx.equivalence(
            "half_kenmotsu_equivalence",
            "(pi, xi, g) compatible <=> 1/2-Kenmotsu, for an almost Lie anchor",
            &[s1, s2, almost_lie],
            ("compatible", compatible),
            ("1/2-Kenmotsu", mk),
        );
    }

    if src == PairSource::Lcs {
        if let (Some(omega), Some(f)) = (cx.set.tensor("omega"), cx.set.scalar("f")) {
            let l = cx.set.lcs()?.expect("pair came from it");
            let hyp = conformal_hypotheses(&cx, omega, &pack, &l, f)?;
            let cd = ConformalData {
                omega: omega.clone(),
                metric: pack.metric.clone(),
                f: f.clone(),
            };
            let conf = compat::conformal_machinery(&cd, &cx.s)?;
            let ml = cx.measure(&cx.frames("lambda-f").tensor_family(&conf.lambda_f), &[])?;
            let i = cx.equivalence(
                "conformal_equivalence",
                "(pi, xi, g) compatible <=> Lambda_f = 0, for Hermitian (omega, g), isometric anchor, theta = df",
                &hyp,
                ("compatible", compatible),
                ("Lambda_f = 0", ml),
            );
            let note = cx.out[i].note.take().unwrap_or_default();
            cx.note(i, format!("{note}; J read from omega(X, Y) = g(JX, Y)"));
        }
    }
    Ok(cx.out)
}

/// Hermitian association, `J^2 = -1`, integrability, isometric anchor, lcs
/// and `theta = df`.
fn conformal_hypotheses(
    cx: &Ctx,
    omega: &TensorField,
    pack: &ContravariantPack,
    l: &LcsStructure,
    f: &ScalarField,
) -> Result<Vec<Measurement>> {
    let fr = cx.frames("hermitian");
    let h = compat::hermitian_defects(omega, &pack.metric, &cx.s)?;
    let mut fam = fr.bilinear_family(&h.association);
    fam.extend(fr.endomorphism_family(&h.square));
    fam.extend(fr.tensor_family(&h.nijenhuis));
    let herm = cx.measure(&fam, &[])?;
    let iso = cx.isometry(&pack.pair, &pack.metric, "conformal-isometry")?;
    let (w, t) = contact_lcs::lcs_defect(l)?;
    let lcs = cx.measure(&comps(&[w, t]), &[])?;
    let df = exterior_derivative(&TensorField::scalar(cx.dim(), f.clone()))?;
    let exact = cx.measure(l.theta.minus(&df).components(), &[])?;
    Ok(vec![herm, iso, lcs, exact])
}

fn kenmotsu_suite(mut cx: Ctx) -> Result<Vec<CheckRecord>> {
    let acm = cx.set.almost_contact(&cx.s)?.expect("checked");
    let (s1, s2) = cx.acs_measurements(&acm)?;
    cx.property("almost_contact", "Phi^2 = -Id + eta (x) xi, eta(xi) = 1, Phi xi = 0, eta o Phi = 0", s1);
    cx.property("associated_metric", "g(Phi X, Phi Y) = g(X, Y) - eta(X) eta(Y), flat_g(xi) = eta", s2);
    let acs = [s1, s2];

    let fr = cx.frames("kenmotsu");
    let m = cx.measure(&fr.cobilinear_family(&compat::acs_bivector_symmetric_part(&acm)), &[])?;
    cx.conditional("bivector_skew", "g(#a, Phi #b) = -g(#b, Phi #a)", &acs, m);

    let pair = compat::acs_bivector(&acm)?;
    let pack = cx.pack(pair.clone())?;
    let iso = cx.isometry(&pair, &acm.metric, "kenmotsu-isometry")?;
    cx.conditional("isometry", "g(#_{pi, xi} a, #_{pi, xi} b) = g*(a, b)", &acs, iso);
    let m = cx.measure(&fr.cobilinear_family(&compat::phi_intertwine_defect(&acm, &pack)), &[])?;
    cx.conditional("phi_intertwine", "#_{pi, xi} o J* = -Phi o #_{pi, xi}", &acs, m);

    let cp = christoffel(&acm.metric);
    let hk = compat::half_kenmotsu_defect(&acm, &cp)?;
    let m = cx.measure(&cx.frames("half-kenmotsu").tensor_family(&hk), &[])?;
    cx.property("half_kenmotsu", "(nabla_X Phi) Y = 1/2 (g(Phi X, Y) xi - eta(Y) Phi X)", m);

    let cm = cx.measure(&fr.bilinear_family(&compat::contact_metric_defect(&acm)?), &[])?;
    cx.info("contact_metric", "g(X, Phi Y) = d eta(X, Y)", cm);

    let mut f = Vec::new();
    for (a, b) in cx.pairs("kenmotsu-intertwine") {
        f.extend(metric::anchor_intertwine_defect(&pack, &cp, &a, &b)?.components().iter().cloned());
    }
    let m = cx.measure(&f, &[])?;
    cx.conditional(
        "contact_intertwine",
        "#(D_a b) = nabla_{#a} #b for a contact metric structure",
        &[s1, s2, cm],
        m,
    );

    let almost_lie = cx.almost_lie(&pack.algebroid(), "kenmotsu-almost-lie")?;
    let mut f = Vec::new();
    for (a, b) in cx.pairs("lemma31") {
        f.extend(compat::lemma31_defect(&acm, &pack, &cp, &a, &b)?.components().iter().cloned());
    }
    let m = cx.measure(&f, &[])?;
    cx.conditional(
        "anchor_d_j_star",
        "#((D_a J*) b) = -(nabla_{#a} Phi)(#b) for an almost Lie anchor",
        &[s1, s2, almost_lie],
        m,
    );
    Ok(cx.out)
}

fn conformal_suite(mut cx: Ctx) -> Result<Vec<CheckRecord>> {
    let omega = cx.set.tensor("omega").expect("checked").clone();
    let f = cx.set.scalar("f").expect("checked").clone();
    let m = cx.set.metric(&cx.s)?.expect("checked");
    let cd = ConformalData {
        omega: omega.clone(),
        metric: m.clone(),
        f: f.clone(),
    };
    let conf = compat::conformal_machinery(&cd, &cx.s)?;
    let fr = cx.frames("conformal");
    let ma = cx.measure(&fr.tensor_family(&conf.connection), &[])?;
    cx.identity(
        "connection",
        "nabla^f_X Y = nabla_X Y + 1/2 (X(f) Y + Y(f) X - g(X, Y) grad_g f)",
        ma,
    );
    let mc = cx.measure(&fr.tensor_family(&conf.bridge), &[])?;
    cx.identity("bridge", "nabla^f (e^f omega) = e^f Lambda_f", mc);
    let ml = cx.measure(&fr.tensor_family(&conf.lambda_f), &[])?;
    cx.property("lambda_f", "Lambda_f = 0, i.e. e^f omega parallel for e^f g", ml);

    let h = compat::hermitian_defects(&omega, &m, &cx.s)?;
    let mut fam = fr.bilinear_family(&h.association);
    fam.extend(fr.endomorphism_family(&h.square));
    let herm = cx.measure(&fam, &[])?;
    let i = cx.property("almost_hermitian", "omega(X, Y) = g(JX, Y), J^2 = -Id", herm);
    cx.note(i, "J read from omega(X, Y) = g(JX, Y) with the bivector induced by omega");
    let nij = cx.measure(&fr.tensor_family(&h.nijenhuis), &[])?;
    cx.property("integrable", "N_J = 0", nij);

    let l = cx.set.lcs()?.expect("checked");
    let (w, t) = contact_lcs::lcs_defect(&l)?;
    let lcs = cx.measure(&comps(&[w, t]), &[])?;
    cx.property("lcs", "d omega + theta ^ omega = 0, d theta = 0", lcs);
    let df = exterior_derivative(&TensorField::scalar(cx.dim(), f))?;
    let exact = cx.measure(l.theta.minus(&df).components(), &[])?;
    cx.property("exact_theta", "theta = df", exact);

    let pair = contact_lcs::lcs_jacobi(&l, &cx.s)?;
    let iso = cx.isometry(&pair, &m, "conformal-isometry")?;
    cx.info("isometry", "g(#a, #b) = g*(a, b)", iso);
    let d34 = compat::lemma34_defect(&pair, &m)?;
    let m34 = cx.measure(&fr.cobilinear_family(&d34), &[])?;
    cx.conditional(
        "j_anchor",
        "J o #_{pi, xi} = #_{pi, xi} o J* for Hermitian (omega, g) with isometric anchor",
        &[herm, nij, iso],
        m34,
    );
    Ok(cx.out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use jacobi_core::builtin::builtin;

    fn set(name: &str) -> StructureSet {
        builtin(name).unwrap().unwrap()
    }

    #[test]
    fn unknown_suite() {
        let e = run_suite("frobnicate", &set("contact-r3"), &Config::default()).unwrap_err();
        assert!(matches!(e, SuiteError::UnknownSuite(_)));
    }

    #[test]
    fn missing_entries_reported() {
        let e = run_suite("kenmotsu", &set("poisson-r2"), &Config::default()).unwrap_err();
        assert!(e.to_string().contains("phi, xi, eta"), "{e}");
        assert!(missing_entries("contact", &set("lcs-r4")).is_some());
        assert!(missing_entries("kenmotsu", &set("contact-r3")).is_none());
    }

    #[test]
    fn fnv_is_stable() {
        assert_eq!(fnv(""), 0xcbf2_9ce4_8422_2325);
        assert_ne!(fnv("a"), fnv("b"));
    }
}
