use cayley_core::presets::{self, describe_parameter, GysinPreset, LatticePreset, Preset};
use cayley_core::topology::lattice::integer_rank;
use cayley_core::topology::{admissibility_report, chern_scan, gysin_tower, seifert_filter, KahlerVector, ScanFilters};
use serde_json::json;

use super::{echo, read_input};
use crate::report::{Report, Table};
use crate::{CliError, CliResult, Opts, Outcome, Param};

fn parameter(param: &Param) -> CliResult<Option<(&'static str, i64)>> {
    match (param.p, param.k) {
        (Some(_), Some(_)) => Err(CliError::Usage("give at most one of --p and --k".into())),
        (Some(p), None) => Ok(Some(("p", p))),
        (None, Some(k)) => Ok(Some(("k", k))),
        (None, None) => Ok(None),
    }
}

fn load(opts: &Opts, param: &Param, default: &str) -> CliResult<(Preset, Vec<(&'static str, String)>)> {
    let given = parameter(param)?;
    let value = given.map(|(_, v)| v);
    let preset = match (&opts.input, &opts.preset) {
        (Some(_), Some(_)) => return Err(CliError::Usage("give either --input or --preset, not both".into())),
        (Some(path), None) => presets::parse(&read_input(path)?, value)?,
        (None, name) => {
            let name = name.as_deref().unwrap_or(default);
            if presets::builtin(name).is_none() {
                return Err(CliError::Usage(format!("unknown preset {name:?}; known: {}", presets::TOPOLOGY_PRESETS.join(", "))));
            }
            presets::load(name, value)?
        }
    };
    let declared = match &preset {
        Preset::Gysin(g) => g.parameter.clone(),
        Preset::Lattice(l) => l.parameter.clone(),
    };
    if let (Some((flag, _)), Some((name, _))) = (given, &declared) {
        if flag != name {
            return Err(CliError::Usage(format!("this input is parametrized by {name}; use --{name}")));
        }
    }
    let extra = declared.map(|(n, v)| vec![("param", format!("{n}={v}"))]).unwrap_or_default();
    Ok((preset, extra))
}

fn fmt_vec(v: &[i64]) -> String {
    format!("({})", v.iter().map(i64::to_string).collect::<Vec<_>>().join(", "))
}

pub fn scan(opts: &Opts, kahler: Option<Vec<i64>>, max_coeff: Option<i64>, param: &Param) -> CliResult<Outcome> {
    let (preset, mut extra) = load(opts, param, "dP6")?;
    let Preset::Lattice(p) = preset else {
        return Err(CliError::Data("this input is a Gysin table; use the betti command".into()));
    };
    let k = match kahler {
        Some(v) => {
            if v.len() != p.lattice.rank() {
                return Err(CliError::Data(format!("Kähler vector has {} entries, the lattice has rank {}", v.len(), p.lattice.rank())));
            }
            extra.push(("kahler", v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")));
            KahlerVector::new(v)?
        }
        None => p.kahler.clone(),
    };
    let mut filters = ScanFilters::default();
    if let Some(m) = max_coeff {
        if m < 1 {
            return Err(CliError::Usage("--max-coeff must be at least 1".into()));
        }
        filters.max_coeff = m;
        extra.push(("max-coeff", m.to_string()));
    }
    let mut rep = Report::new(echo("scan", opts, &extra), None);
    scan_report(&mut rep, &p, &k, &filters)?;
    Ok(Outcome { report: rep, gate: opts.check })
}

fn scan_report(rep: &mut Report, p: &LatticePreset, k: &KahlerVector, filters: &ScanFilters) -> CliResult<()> {
    let res = chern_scan(&p.lattice, k, filters)?;
    let m = p.lattice.rank();
    let mut info = Table::new(&format!("{}: {}", p.name, p.description), &["QUANTITY", "VALUE"]);
    info.row(vec!["parameter".into(), describe_parameter(&p.parameter)]);
    info.row(vec!["labels".into(), p.lattice.labels().join(", ")]);
    info.row(vec!["Kähler vector k".into(), fmt_vec(k.as_slice())]);
    info.row(vec!["clearing factor".into(), res.clearing_factor.to_string()]);
    info.row(vec!["functional c·Qk".into(), fmt_vec(&res.functional)]);
    info.row(vec!["kernel rank".into(), res.kernel_rank().to_string()]);
    rep.tables.push(info);
    let mut basis = Table::new("integral kernel basis", &["#", "VECTOR"]);
    for (i, v) in res.kernel_basis.iter().enumerate() {
        basis.row(vec![i.to_string(), fmt_vec(v)]);
    }
    rep.tables.push(basis);
    let seifert = p.seifert;
    let mut header = vec!["#", "CANDIDATE", "aᵀQk"];
    if seifert.is_some() {
        header.push("COPRIME TO WEIGHT");
    }
    let mut cands = Table::new("primitive candidates", &header);
    let mut orthogonal = true;
    for (i, c) in res.candidates.iter().enumerate() {
        let pairing = p.lattice.pairing(&c.a, k.as_slice())?;
        orthogonal &= num_is_zero(&pairing);
        let mut row = vec![i.to_string(), fmt_vec(&c.a), pairing.to_string()];
        if let Some((coord, weight)) = seifert {
            row.push(if seifert_filter(c.a[coord], weight) { "yes".into() } else { "no".into() });
        }
        cands.row(row);
    }
    rep.tables.push(cands);
    rep.check("scan/orthogonality", orthogonal, format!("{} candidates", res.candidates.len()), "exact", "aᵀQk = 0");
    rep.check(
        "scan/kernel_rank",
        res.kernel_rank() + 1 == m,
        format!("rank {} for m = {m}", res.kernel_rank()),
        "exact",
        "rank ker(a ↦ aᵀQk) = m − 1",
    );
    let rank = integer_rank(&res.candidates.iter().map(|c| c.a.clone()).collect::<Vec<_>>())?;
    rep.check("scan/independent_candidates", rank >= 2, format!("candidates span rank {rank}"), "exact", "two independent classes");
    if let Some((a, b)) = res.independent_pair() {
        let adm = admissibility_report(&p.lattice, k, &[a.clone(), b.clone()], &p.link);
        for e in &adm.entries {
            rep.push(&format!("admissibility/{}", e.name), e.status, e.detail.clone(), "exact", admissibility_anchor(&e.name));
        }
        rep.notes.push(format!("pair used for admissibility: {} and {}", fmt_vec(&a.a), fmt_vec(&b.a)));
    }
    if let Some((coord, weight)) = seifert {
        let e = -(weight + 2);
        let smooth = seifert_filter(e, weight);
        rep.check(
            "seifert/canonical_class",
            smooth == (weight % 2 != 0),
            format!("e = {e}, k = {weight}: {}", if smooth { "smooth" } else { "orbifold" }),
            "exact",
            "gcd(e, k) = 1; smooth iff k odd",
        );
        rep.notes.push(format!("Seifert condition uses coordinate {} of each candidate", p.lattice.labels()[coord]));
    }
    rep.notes.extend(p.notes.iter().cloned());
    rep.data.insert("kernel_basis".into(), json!(res.kernel_basis));
    rep.data.insert("candidates".into(), json!(res.candidates.iter().map(|c| c.a.clone()).collect::<Vec<_>>()));
    rep.data.insert("clearing_factor".into(), json!(res.clearing_factor));
    Ok(())
}

fn num_is_zero(x: &cayley_core::Q) -> bool {
    cayley_core::Scalar::is_negligible(x, 0.0)
}

fn admissibility_anchor(name: &str) -> &'static str {
    match name {
        "independence" => "c₁, c₂ linearly independent",
        "h2_base" => "dim H²(B) ≥ 2",
        "h2_link" => "dim H²(Σ) ≥ 1",
        "massey" => "Massey triple products vanish",
        _ => "aᵀQk = 0",
    }
}

pub fn betti(opts: &Opts, param: &Param) -> CliResult<Outcome> {
    let (preset, extra) = load(opts, param, "cAp")?;
    let Preset::Gysin(g) = preset else {
        return Err(CliError::Data("this input is an intersection lattice; use the scan command".into()));
    };
    let mut rep = Report::new(echo("betti", opts, &extra), None);
    betti_report(&mut rep, &g)?;
    Ok(Outcome { report: rep, gate: opts.check })
}

fn betti_report(rep: &mut Report, g: &GysinPreset) -> CliResult<()> {
    let stages: Vec<Vec<i64>> = g.stages.iter().map(|s| s.ranks.clone()).collect();
    let tower = gysin_tower(g.base_betti.clone(), &stages)?;
    let width = tower.last().map_or(g.base_betti.len(), |t| t.0.len());
    let header: Vec<String> = std::iter::once("SPACE".to_string()).chain((0..width).map(|i| format!("b{i}"))).collect();
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut t = Table::new(&format!("{}: {} ({})", g.name, g.description, describe_parameter(&g.parameter)), &header_refs);
    let row = |label: &str, b: &[i64]| {
        std::iter::once(label.to_string()).chain((0..width).map(|i| b.get(i).map_or(String::new(), i64::to_string))).collect()
    };
    t.row(row("base", &g.base_betti));
    for (s, b) in g.stages.iter().zip(&tower) {
        t.row(row(&s.label, &b.0));
    }
    rep.tables.push(t);
    for (s, b) in g.stages.iter().zip(&tower) {
        let chi = b.euler_characteristic();
        rep.check(&format!("euler/{}", s.label), chi == 0, format!("χ = {chi}"), "exact", "χ(P) = 0 for a circle bundle P");
    }
    if let (Some(("p", p)), Some(m)) = (g.parameter.as_ref().map(|(n, v)| (n.as_str(), *v)), tower.last()) {
        if g.name == "cAp" {
            rep.check("table/b2", m.get(2) == p - 2, format!("b₂ = {} (expected {})", m.get(2), p - 2), "exact", "b₂(M) = p − 2");
            rep.check("table/b3", m.get(3) == 2 * p - 1, format!("b₃ = {} (expected {})", m.get(3), 2 * p - 1), "exact", "b₃(M) = 2p − 1");
        }
    }
    if let Ok(input) = cayley_core::topology::GysinInput::trivial(g.base_betti.clone()) {
        rep.notes.extend(input.poincare_warnings().into_iter().map(|w| format!("base: {w}")));
    }
    rep.notes.extend(g.notes.iter().cloned());
    rep.data.insert("betti".into(), json!(tower.iter().map(|b| b.0.clone()).collect::<Vec<_>>()));
    Ok(())
}
