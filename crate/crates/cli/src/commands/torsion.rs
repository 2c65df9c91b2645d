use cayley_core::json::{form_to_json, jet_from_json, jet_to_json, JsonScalar};
use cayley_core::presets::JET_TORSION_FREE;
use cayley_core::random;
use cayley_core::spin7::torsion::{dphi_decomposition_defect, torsion_residuals, JetPoint};
use cayley_core::spin7::Spin7Data;
use cayley_core::Q;
use serde_json::{json, Value};

use super::{echo, read_input, tol_label, tolerance};
use crate::report::{sci, Report, Table};
use crate::{Backend, CliError, CliResult, Opts, Outcome};

const FLOAT_TOL: f64 = 1e-10;

pub const JET_PRESETS: [&str; 3] = ["torsion_free", "zero", "random"];

/// Anchors of the structure equations and their two consequences.
const RESIDUALS: [(&str, &str); 6] = [
    ("r_a", "dω = 0"),
    ("r_b", "d(pReΩ) = −dθ∧ω"),
    ("r_c", "d(rReΩ + qImΩ) = −dη∧ω"),
    ("r_d", "dη∧pReΩ − dθ∧(rReΩ + qImΩ) + ½d(pq)∧ω² = 0"),
    ("res36", "q dθ∧ImΩ + ½(½(p dq − 3q dp) + J(r dp − p dr))∧ω² = 0"),
    ("res37", "(p dη − r dθ)∧ReΩ + q dθ∧ImΩ + (p dq − q dp + J(r dp − p dr))∧ω² = 0"),
];

/// JSON text of the jet and where it came from.
fn source(opts: &Opts) -> CliResult<(String, String)> {
    let generated = |j: JetPoint<Q>| serde_json::to_string(&jet_to_json(&j)).expect("jet serializes");
    match (&opts.input, opts.preset.as_deref()) {
        (Some(_), Some(_)) => Err(CliError::Usage("give either --input or --preset, not both".into())),
        (Some(path), None) => Ok((read_input(path)?, path.display().to_string())),
        (None, None) | (None, Some("torsion_free")) => Ok((JET_TORSION_FREE.into(), "torsion_free".into())),
        (None, Some("zero")) => Ok((generated(JetPoint::flat(Spin7Data::standard())), "zero".into())),
        (None, Some("random")) => {
            let mut rng = random::rng(opts.seed);
            let data = random::spin7_data(&mut rng);
            Ok((generated(random::jet(&mut rng, data)), "random".into()))
        }
        (None, Some(other)) => Err(CliError::Usage(format!("unknown jet preset {other:?}; known: {}", JET_PRESETS.join(", ")))),
    }
}

fn evaluate<S: JsonScalar>(rep: &mut Report, jet: &JetPoint<S>, tol: f64) {
    let r = torsion_residuals(jet);
    let forms = [&r.r_a, &r.r_b, &r.r_c, &r.r_d, &r.res36, &r.res37];
    let mut nonzero = Vec::new();
    let mut payload = serde_json::Map::new();
    for ((name, anchor), f) in RESIDUALS.iter().zip(forms) {
        let norm = f.coeff_norm();
        let zero = if S::EXACT { f.is_zero() } else { norm <= tol };
        if !zero {
            nonzero.push(name.to_string());
        }
        payload.insert(name.to_string(), form_to_json(f));
        rep.check(&format!("residual/{name}"), zero, sci(norm), &tol_label(tol), anchor);
    }
    let defect = dphi_decomposition_defect(jet);
    let ok = if S::EXACT { defect.is_zero() } else { defect.max_abs() <= tol };
    rep.check(
        "dphi/decomposition",
        ok,
        sci(defect.max_abs()),
        &tol_label(tol),
        "dΦ = −η∧R_b + θ∧R_c + R_d + (η∧θ + pq ω)∧R_a",
    );
    let mut derived = Table::new("derived one-forms", &["FORM", "NORM"]);
    derived.row(vec!["alpha_eta".into(), sci(r.alpha_eta.coeff_norm())]);
    derived.row(vec!["alpha_theta".into(), sci(r.alpha_theta.coeff_norm())]);
    rep.tables.push(derived);
    match &r.classes {
        Ok(c) => {
            let mut t = Table::new("torsion classes of the horizontal SU(3)-structure", &["CLASS", "NORM"]);
            t.row(vec!["w1".into(), sci(c.w1.to_f64().abs())]);
            t.row(vec!["w1_hat".into(), sci(c.w1_hat.to_f64().abs())]);
            for (n, f) in [("w2", &c.w2), ("w2_hat", &c.w2_hat), ("w3", &c.w3), ("w4", &c.w4), ("w5", &c.w5)] {
                t.row(vec![n.into(), sci(f.coeff_norm())]);
            }
            rep.tables.push(t);
        }
        Err(e) => rep.notes.push(format!("horizontal torsion classes unavailable: {e}")),
    }
    rep.notes.push(if nonzero.is_empty() { "all residuals vanish".into() } else { format!("nonzero residuals: {}", nonzero.join(", ")) });
    rep.data.insert("residuals".into(), Value::Object(payload));
    rep.data.insert("nonzero".into(), json!(nonzero));
}

fn parse_jet<S: JsonScalar>(text: &str, origin: &str) -> CliResult<JetPoint<S>> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Data(format!("{origin}: {e}")))?;
    jet_from_json(&v).map_err(|e| CliError::Data(format!("{origin}: {e}")))
}

pub fn run(opts: &Opts) -> CliResult<Outcome> {
    let (text, origin) = source(opts)?;
    let tol = tolerance(opts, FLOAT_TOL);
    let seeded = opts.input.is_none() && opts.preset.as_deref() == Some("random");
    let mut rep = Report::new(echo("torsion", opts, &[]), seeded.then_some(opts.seed));
    match opts.backend {
        Backend::Exact => evaluate(&mut rep, &parse_jet::<Q>(&text, &origin)?, tol),
        Backend::Float => evaluate(&mut rep, &parse_jet::<f64>(&text, &origin)?, tol),
    }
    if opts.input.is_none() && origin == "torsion_free" {
        rep.notes.push("shipped jet: built from the torsion-free parametrization with free (dη)₈, (dθ)₈, dp, dq, dr".into());
    }
    Ok(Outcome { report: rep, gate: false })
}
