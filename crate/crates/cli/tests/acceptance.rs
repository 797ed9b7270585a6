//! Acceptance criteria, one PASS/FAIL line each.

use std::process::Command;

use jacobi_core::builtin::builtin;
use jacobi_core::compat::{conformal_machinery, ConformalData};
use jacobi_core::contact_lcs::{contact_anchor_defect, contact_jacobi, reeb_field, ContactStructure};
use jacobi_core::defect::max_defect;
use jacobi_core::frame::Frames;
use jacobi_core::jacobi::{
    jacobi_defect, jacobiator_defect, koszul_bracket, sharp_pi, torsion_defect, AlgebroidData, JacobiPair,
};
use jacobi_core::metric::{contravariant_d, d_tensor_pi, metric_compatibility_defect, MetricStructure};
use jacobi_core::random::FieldGen;
use jacobi_core::tensor::{lie_bracket, schouten_bb};
use jacobi_core::{
    parse_scalar, Chart, ContravariantPack, MatrixField, MatrixRole, Sampler, ScalarField, StructureSet, TensorField,
};
use jacobi_verify::{run_suite, Config, DefectReport};

const BUILTINS: [&str; 8] = [
    "poisson-r2",
    "contact-r3",
    "kenmotsu-r3",
    "kenmotsu-alpha1-r3",
    "lcs-r4",
    "kahler-r4",
    "jacobi-violate-r3",
    "nonclosed-theta-r4",
];

fn set(name: &str) -> StructureSet {
    builtin(name).unwrap().unwrap()
}

fn sampler(s: &StructureSet) -> Sampler {
    Sampler::new(s.chart.clone())
}

fn tmax(t: &TensorField, s: &Sampler) -> f64 {
    max_defect(t.components(), s).unwrap()
}

fn suite(name: &str, b: &str) -> DefectReport {
    run_suite(name, &set(b), &Config::default()).unwrap()
}

/// Raw max defect of check `id`.
fn defect(r: &DefectReport, id: &str) -> f64 {
    r.check(id).unwrap_or_else(|| panic!("no check {id} in {}", r.suite)).max_abs_defect
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: String) -> Outcome {
    Outcome { ok, detail }
}

fn calibration() -> Outcome {
    let mut worst: f64 = 0.0;
    for dim in [3usize, 4] {
        let coords = ["x", "y", "z", "w"];
        let s = Sampler::new(Chart::new(&coords[..dim]).unwrap());
        let mut g = FieldGen::new(dim, 1000 + dim as u64);
        for _ in 0..20 {
            let pi = g.polynomial_bivector();
            let (a, b, c) = (g.one_form(), g.one_form(), g.one_form());
            let sa = sharp_pi(&pi, &a).unwrap();
            let sb = sharp_pi(&pi, &b).unwrap();
            let k = sharp_pi(&pi, &koszul_bracket(&pi, &a, &b).unwrap()).unwrap();
            let lhs = c.pair(&k).unwrap().sub(&c.pair(&lie_bracket(&sa, &sb).unwrap()).unwrap());
            let rhs = schouten_bb(&pi).unwrap().evaluate(&[&a, &b, &c]).unwrap().half();
            worst = worst.max(max_defect(&[lhs.sub(&rhs)], &s).unwrap());
        }
    }
    outcome(worst <= 1e-9, format!("max defect {worst:.3e} over 40 bivectors"))
}

fn torsion_theorem() -> Outcome {
    let st = set("contact-r3");
    let s = sampler(&st);
    let c = ContactStructure::new(st.tensor("eta").unwrap().clone()).unwrap();
    let pair = contact_jacobi(&c, &s).unwrap();
    let x_dy = TensorField::one_form(vec![ScalarField::zero(), ScalarField::var(0), ScalarField::zero()]);
    let zero = TensorField::one_form(vec![ScalarField::zero(); 3]);
    let mut g = FieldGen::new(3, 2);
    let pairs: Vec<_> = (0..10).map(|_| (g.polynomial_one_form(), g.polynomial_one_form())).collect();
    let measure = |lambda: &TensorField| {
        let data = AlgebroidData::new(pair.clone(), lambda.clone()).unwrap();
        let (mut d1, mut d2) = (0.0f64, 0.0f64);
        for (a, b) in &pairs {
            let t = torsion_defect(&data, a, b).unwrap();
            d1 = d1.max(tmax(&t.d1, &s));
            d2 = d2.max(tmax(&t.d2, &s));
        }
        (d1, d2)
    };
    let (e1, e2) = measure(&c.eta);
    let (x1, x2) = measure(&x_dy);
    let (_, z2) = measure(&zero);
    let ok = e2 <= 1e-9 && x2 <= 1e-9 && z2 <= 1e-9 && e1 <= 1e-9 && x1 > 1e-3;
    outcome(
        ok,
        format!("D2 {e2:.1e}/{x2:.1e}/{z2:.1e} for eta/x dy/0; D1 {e1:.1e} for eta, {x1:.3e} for x dy"),
    )
}

fn contact_pipeline() -> Outcome {
    let st = set("contact-r3");
    let s = sampler(&st);
    let c = ContactStructure::new(st.tensor("eta").unwrap().clone()).unwrap();
    let xi = reeb_field(&c, &s).unwrap();
    let dz = TensorField::vector(vec![ScalarField::zero(), ScalarField::zero(), ScalarField::one()]);
    let reeb = tmax(&xi.minus(&dz), &s);
    let anchor = max_defect(contact_anchor_defect(&c, &s).unwrap().entries(), &s).unwrap();
    let pair = contact_jacobi(&c, &s).unwrap();
    let (j1, j2) = jacobi_defect(&pair).unwrap();
    let jac = tmax(&j1, &s).max(tmax(&j2, &s));
    let data = AlgebroidData::new(pair, c.eta.clone()).unwrap();
    let mut g = FieldGen::new(3, 3);
    let mut jtor: f64 = 0.0;
    for _ in 0..10 {
        let (a, b, cc) = (g.one_form(), g.one_form(), g.one_form());
        jtor = jtor.max(tmax(&jacobiator_defect(&data, &a, &b, &cc).unwrap(), &s));
    }
    let ok = reeb <= 1e-12 && anchor <= 1e-9 && jac <= 1e-9 && jtor <= 1e-8;
    outcome(
        ok,
        format!("reeb {reeb:.1e}, anchor {anchor:.1e}, Jacobi {jac:.1e}, jacobiator {jtor:.1e}"),
    )
}

fn lcs_lemma() -> Outcome {
    let good = suite("lcs", "lcs-r4");
    let bad = suite("lcs", "nonclosed-theta-r4");
    let ids = ["lcs.bracket_identity", "lcs.lie_identity"];
    let ident = ids
        .iter()
        .map(|id| defect(&good, id).max(defect(&bad, id)))
        .fold(0.0, f64::max);
    let lcs_good = defect(&good, "lcs.closed_omega").max(defect(&good, "lcs.closed_theta"));
    let jac_good = defect(&good, "lcs.jacobi");
    let lcs_bad = defect(&bad, "lcs.closed_omega").max(defect(&bad, "lcs.closed_theta"));
    let jac_bad = defect(&bad, "lcs.jacobi");
    let ok = ident <= 1e-9 && lcs_good <= 1e-9 && jac_good <= 1e-9 && lcs_bad > 1e-3 && jac_bad > 1e-3;
    outcome(
        ok,
        format!(
            "identities {ident:.1e}; lcs-r4 lcs {lcs_good:.1e} Jacobi {jac_good:.1e}; \
             nonclosed lcs {lcs_bad:.3e} Jacobi {jac_bad:.3e}"
        ),
    )
}

fn contravariant_derivative() -> Outcome {
    let mut worst: f64 = 0.0;
    for b in BUILTINS {
        let r = suite("connection", b);
        worst = worst.max(defect(&r, "connection.d_metric")).max(defect(&r, "connection.d_symmetric"));
    }
    let st = set("poisson-r2");
    let s = sampler(&st);
    let m = st.metric(&s).unwrap().unwrap();
    let (pair, _) = st.jacobi_pair(&s).unwrap().unwrap();
    let pack = ContravariantPack::new(pair, m.clone()).unwrap();
    let poisson = ContravariantPack::new(JacobiPair::poisson(st.tensor("pi").unwrap().clone()).unwrap(), m).unwrap();
    let mut g = FieldGen::new(2, 5);
    let (mut same, mut dpi, mut comp) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..10 {
        let (a, b, c) = (g.polynomial_one_form(), g.polynomial_one_form(), g.polynomial_one_form());
        let d = contravariant_d(&pack, &a, &b).unwrap().minus(&contravariant_d(&poisson, &a, &b).unwrap());
        same = same.max(tmax(&d, &s));
        dpi = dpi.max(max_defect(&[d_tensor_pi(&pack, &a, &b, &c).unwrap()], &s).unwrap());
        comp = comp.max(max_defect(&[metric_compatibility_defect(&pack, &a, &b, &c).unwrap()], &s).unwrap());
    }
    let ok = worst <= 1e-8 && same <= 1e-12 && dpi <= 1e-12 && comp <= 1e-12;
    outcome(
        ok,
        format!(
            "all builtins {worst:.1e}; poisson-r2 D vs xi=0 {same:.1e}, D pi {dpi:.1e}, compatibility {comp:.1e}"
        ),
    )
}

fn anchor_intertwining() -> Outcome {
    let c = suite("connection", "contact-r3");
    let p = suite("connection", "poisson-r2");
    let l = suite("connection", "lcs-r4");
    let (dc, dp) = (defect(&c, "connection.anchor_intertwine"), defect(&p, "connection.anchor_intertwine"));
    let (dl, iso) = (defect(&l, "connection.anchor_intertwine"), defect(&l, "connection.isometry"));
    let ok = dc <= 1e-8 && dp <= 1e-8 && dl > 1e-3 && iso > 1e-3;
    outcome(
        ok,
        format!("contact-r3 {dc:.1e}, poisson-r2 {dp:.1e}; lcs-r4 {dl:.3e} with isometry defect {iso:.3e}"),
    )
}

fn pairing() -> Outcome {
    let worst = BUILTINS
        .iter()
        .map(|b| defect(&suite("compatibility", b), "compatibility.pairing"))
        .fold(0.0, f64::max);
    outcome(worst <= 1e-9, format!("max over builtins {worst:.3e}"))
}

fn half_kenmotsu() -> Outcome {
    let k = defect(&suite("kenmotsu", "kenmotsu-r3"), "kenmotsu.half_kenmotsu");
    let a = defect(&suite("kenmotsu", "kenmotsu-alpha1-r3"), "kenmotsu.half_kenmotsu");
    let c = defect(&suite("kenmotsu", "contact-r3"), "kenmotsu.half_kenmotsu");
    let cr = suite("compatibility", "contact-r3");
    let compat = defect(&cr, "compatibility.eq7").max(defect(&cr, "compatibility.eq8"));
    let ok = k <= 1e-8 && a > 1e-2 && c > 1e-2 && compat > 1e-3;
    outcome(
        ok,
        format!("kenmotsu-r3 {k:.1e}; alpha1 {a:.3e}; contact-r3 {c:.3e} with compatibility defect {compat:.3e}"),
    )
}

fn isometry() -> Outcome {
    let mut worst: f64 = 0.0;
    for b in ["contact-r3", "kenmotsu-r3"] {
        let r = suite("kenmotsu", b);
        worst = worst.max(defect(&r, "kenmotsu.isometry")).max(defect(&r, "kenmotsu.phi_intertwine"));
    }
    outcome(worst <= 1e-9, format!("max isometry/intertwine defect {worst:.3e}"))
}

fn conformal() -> Outcome {
    let c = Chart::new(&["x", "y", "u", "v"]).unwrap();
    let s = Sampler::new(c.clone());
    let fr = Frames::new(4, 3, 9);
    let fam = |t: &TensorField| max_defect(&fr.tensor_family(t), &s).unwrap();
    let mut g = FieldGen::new(4, 10);
    let (mut conn, mut bridge, mut lam_min) = (0.0f64, 0.0f64, f64::INFINITY);
    for _ in 0..5 {
        let omega = g.two_form();
        let diag = (0..4).map(|_| {
            let p = g.polynomial();
            p.mul(&p).add(&ScalarField::one())
        });
        let metric = MetricStructure::new(MatrixField::diagonal(diag.collect(), MatrixRole::Metric), &s).unwrap();
        let cd = ConformalData {
            omega,
            metric,
            f: g.polynomial(),
        };
        let d = conformal_machinery(&cd, &s).unwrap();
        conn = conn.max(fam(&d.connection));
        bridge = bridge.max(fam(&d.bridge));
        lam_min = lam_min.min(fam(&d.lambda_f));
    }
    let st = set("lcs-r4");
    let s4 = sampler(&st);
    let cd = ConformalData {
        omega: st.tensor("omega").unwrap().clone(),
        metric: st.metric(&s4).unwrap().unwrap(),
        f: parse_scalar("x", &st.chart).unwrap(),
    };
    let d = conformal_machinery(&cd, &s4).unwrap();
    let (lc, lb) = (fam(&d.connection), fam(&d.bridge));
    let r = suite("conformal-kahler", "lcs-r4");
    let lam = defect(&r, "conformal-kahler.lambda_f");
    let herm = defect(&r, "conformal-kahler.almost_hermitian").max(defect(&r, "conformal-kahler.integrable"));
    let ok = conn <= 1e-8 && bridge <= 1e-8 && lc <= 1e-8 && lb <= 1e-8 && lam <= 1e-8 && herm <= 1e-9;
    outcome(
        ok,
        format!(
            "random: connection {conn:.1e}, bridge {bridge:.1e} (min Lambda_f {lam_min:.2e}); \
             lcs-r4: connection {lc:.1e}, bridge {lb:.1e}, Lambda_f {lam:.1e}, hermitian {herm:.1e}"
        ),
    )
}

fn cli_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_verify");
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let status = Command::new(bin)
            .args(["check", "all", "--builtin", "contact-r3", "--seed", "7", "--report"])
            .arg(&path)
            .status()
            .unwrap();
        (status.code(), std::fs::read(&path).unwrap_or_default())
    };
    let (c1, r1) = run("r1.json");
    let (c2, r2) = run("r2.json");
    let violate = Command::new(bin)
        .args(["check", "all", "--builtin", "jacobi-violate-r3"])
        .output()
        .unwrap()
        .status
        .code();
    let missing = Command::new(bin)
        .args(["check", "all", "--chart"])
        .arg(dir.path().join("absent.json"))
        .output()
        .unwrap()
        .status
        .code();
    let ok = !r1.is_empty() && r1 == r2 && c1 == Some(0) && c2 == Some(0) && violate == Some(1) && missing == Some(2);
    outcome(
        ok,
        format!(
            "reports identical: {}; exit codes {:?}/{:?}/{:?}",
            r1 == r2,
            c1,
            violate,
            missing
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("calibration of the Schouten bracket", calibration),
        ("torsion of the anchored bracket on contact-r3", torsion_theorem),
        ("contact pipeline on contact-r3", contact_pipeline),
        ("lcs identities and lcs <=> Jacobi", lcs_lemma),
        ("contravariant derivative invariants", contravariant_derivative),
        ("anchor intertwining", anchor_intertwining),
        ("compatibility pairing", pairing),
        ("1/2-Kenmotsu", half_kenmotsu),
        ("anchor isometry and Phi intertwining", isometry),
        ("conformal machinery", conformal),
        ("CLI determinism and exit codes", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let o = f();
        println!(
            "{} criterion {:>2}: {name} ({}) [{:.1}s]",
            if o.ok { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
        if !o.ok {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all {} acceptance criteria passed", criteria.len());
}
