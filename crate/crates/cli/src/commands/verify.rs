use cayley_core::exterior::{pullback, Form, Orientation};
use cayley_core::random::{self, TestRng};
use cayley_core::su3::{hitchin_dual, identity_battery, im_omega0, pullback_su3, re_omega0, standard, Mutation, SU3Structure, TorsionClasses};
use cayley_core::{Scalar, Q};

use super::{echo, tol_label, tolerance};
use crate::report::{sci, Report};
use crate::{Backend, CliError, CliResult, MutateSign, Opts, Outcome};

const FLOAT_TOL: f64 = 1e-9;
const LINEARIZATION_TOL: f64 = 1e-6;
const LINEARIZATION_STEP: f64 = 1e-5;
const EQUIVARIANCE_TOL: f64 = 1e-9;
const TORSION_STRUCTURES: usize = 50;

struct Tally {
    name: &'static str,
    anchor: &'static str,
    max: f64,
    failures: usize,
    first: Option<usize>,
}

impl Tally {
    fn new(name: &'static str, anchor: &'static str) -> Self {
        Tally { name, anchor, max: 0.0, failures: 0, first: None }
    }

    fn record(&mut self, i: usize, defect: f64, ok: bool) {
        self.max = self.max.max(defect);
        if !ok {
            self.failures += 1;
            self.first.get_or_insert(i);
        }
    }

    fn value(&self, total: usize) -> String {
        match self.first {
            None => format!("max defect {}", sci(self.max)),
            Some(i) => format!("max defect {}; {}/{total} fail, first #{i}", sci(self.max), self.failures),
        }
    }
}

fn convert<S: Scalar>(f: &Form<Q>) -> Form<S> {
    f.map(|x| S::from_q(x))
}

fn structure<S: Scalar>(rng: &mut TestRng, i: usize) -> CliResult<SU3Structure<S>> {
    if i == 0 {
        return Ok(standard());
    }
    // Float comparisons use an absolute tolerance, so keep the coefficients of
    // the pulled-back forms of order one.
    let a = if S::EXACT { random::gl_plus(rng, 6, 2) } else { random::well_conditioned(rng, 6) };
    let a = a.map(|x| S::from_q(x));
    Ok(pullback_su3(&a, &standard())?)
}

fn battery<S: Scalar>(rep: &mut Report, rng: &mut TestRng, count: usize, mutate: Option<Mutation>, tol: f64) -> CliResult<()> {
    let mut tallies: Vec<Tally> = Vec::new();
    for i in 0..count {
        let s = structure::<S>(rng, i)?;
        let s = mutate.map_or(s.clone(), |m| s.mutated(m));
        let x: Vec<S> = random::vector(rng, 6, 3).iter().map(|v| S::from_q(v)).collect();
        let eta = convert(&random::form(rng, 6, 1, 3));
        let beta = convert(&random::form(rng, 6, 2, 3));
        let gamma = convert(&random::form(rng, 6, 3, 3));
        let checks = identity_battery(&s, &x, &eta, &beta, &gamma);
        if tallies.is_empty() {
            tallies = checks.iter().map(|c| Tally::new(c.name, c.anchor)).collect();
        }
        for (t, c) in tallies.iter_mut().zip(&checks) {
            t.record(i, c.max_defect(), c.holds(tol));
        }
    }
    for t in &tallies {
        rep.check(&format!("battery/{}", t.name), t.failures == 0, t.value(count), &tol_label(tol), t.anchor);
    }
    Ok(())
}

fn random_classes<S: Scalar>(rng: &mut TestRng, s: &SU3Structure<S>) -> TorsionClasses<S> {
    let scalar = |rng: &mut TestRng| S::from_q(&random::rational(rng, 3, 2));
    TorsionClasses {
        w1: scalar(rng),
        w1_hat: scalar(rng),
        w2: s.project2(&convert(&random::form(rng, 6, 2, 3))).b8,
        w2_hat: s.project2(&convert(&random::form(rng, 6, 2, 3))).b8,
        w3: s.project3(&convert(&random::form(rng, 6, 3, 3))).g12,
        w4: convert(&random::form(rng, 6, 1, 3)),
        w5: convert(&random::form(rng, 6, 1, 3)),
    }
}

fn class_defect<S: Scalar>(a: &TorsionClasses<S>, b: &TorsionClasses<S>) -> f64 {
    let scalars = [(&a.w1, &b.w1), (&a.w1_hat, &b.w1_hat)].map(|(x, y)| (x.clone() - y.clone()).to_f64().abs());
    let forms = [(&a.w2, &b.w2), (&a.w2_hat, &b.w2_hat), (&a.w3, &b.w3), (&a.w4, &b.w4), (&a.w5, &b.w5)].map(|(x, y)| (x - y).max_abs());
    scalars.into_iter().chain(forms).fold(0.0, f64::max)
}

fn torsion_round_trip<S: Scalar>(rep: &mut Report, rng: &mut TestRng, count: usize, tol: f64) -> CliResult<()> {
    let mut t = Tally::new("round_trip", "dω = 3w₁ReΩ + 3ŵ₁ImΩ + w₃ + w₄∧ω");
    for i in 0..count {
        let s = structure::<S>(rng, i)?;
        let c = random_classes(rng, &s);
        let (d_omega, d_re, d_im) = s.reconstruct(&c);
        match s.torsion_classes(&d_omega, &d_re, &d_im) {
            Ok(back) => {
                let d = class_defect(&c, &back);
                t.record(i, d, d <= tol);
            }
            Err(_) => t.record(i, f64::INFINITY, false),
        }
    }
    rep.check("torsion_classes/round_trip", t.failures == 0, t.value(count), &tol_label(tol), t.anchor);
    Ok(())
}

fn rel(a: &Form<f64>, b: &Form<f64>) -> f64 {
    (a - b).coeff_norm() / b.coeff_norm().max(f64::MIN_POSITIVE)
}

fn hitchin(rep: &mut Report, rng: &mut TestRng, backend: Backend, tol: f64) {
    let anchor = "ψ̂(ReΩ₀) = ImΩ₀";
    match backend {
        Backend::Exact => {
            let ok = hitchin_dual::<Q>(&re_omega0(), Orientation::Positive).is_ok_and(|d| d.psi_hat == im_omega0());
            rep.check("hitchin/dual_of_re_omega0", ok, if ok { "equal".into() } else { "differs".into() }, "exact", anchor);
        }
        Backend::Float => {
            let d = hitchin_dual::<f64>(&re_omega0(), Orientation::Positive).map_or(f64::INFINITY, |d| (&d.psi_hat - &im_omega0()).max_abs());
            rep.check("hitchin/dual_of_re_omega0", d <= tol, format!("max defect {}", sci(d)), &tol_label(tol), anchor);
        }
    }
    let structures: Vec<SU3Structure<f64>> = std::iter::once(Ok(standard()))
        .chain((0..4).map(|_| pullback_su3(&random::to_f64(&random::well_conditioned(rng, 6)), &standard())))
        .collect::<Result<_, _>>()
        .expect("well-conditioned pullbacks are SU(3)-structures");
    let h = LINEARIZATION_STEP;
    let mut lin: f64 = 0.0;
    for i in 0..50 {
        let s = &structures[i % structures.len()];
        let rho = random::form_f64(rng, 6, 3);
        let dual = |t: f64| hitchin_dual(&(&s.re_omega + &rho.scale(&t)), Orientation::Positive).map(|d| d.psi_hat);
        let err = match (dual(h), dual(-h)) {
            (Ok(p), Ok(m)) => rel(&(&p - &m).scale(&(0.5 / h)), &s.hitchin_linearization(&rho)),
            _ => f64::INFINITY,
        };
        lin = lin.max(err);
    }
    rep.check(
        "hitchin/linearization",
        lin <= LINEARIZATION_TOL,
        format!("max rel. error {} vs central differences, h = {h:e}", sci(lin)),
        &tol_label(LINEARIZATION_TOL),
        "ρ̂ = ⋆(ρ₆ + ρ₁⊕₁) − ⋆ρ₁₂",
    );
    let mut eq: f64 = 0.0;
    for _ in 0..20 {
        let a = random::to_f64(&random::well_conditioned(rng, 6));
        let psi = &re_omega0::<f64>() + &random::form_f64(rng, 6, 3).scale(&0.1);
        let err = (|| {
            let d = hitchin_dual(&psi, Orientation::Positive).ok()?;
            let pulled = hitchin_dual(&pullback(&a, &psi).ok()?, Orientation::Positive).ok()?;
            Some(rel(&pulled.psi_hat, &pullback(&a, &d.psi_hat).ok()?))
        })()
        .unwrap_or(f64::INFINITY);
        eq = eq.max(err);
    }
    rep.check(
        "hitchin/equivariance",
        eq <= EQUIVARIANCE_TOL,
        format!("max rel. error {}", sci(eq)),
        &tol_label(EQUIVARIANCE_TOL),
        "ψ̂(A*ψ) = A*ψ̂(ψ), A ∈ GL⁺(6)",
    );
}

pub fn run(opts: &Opts, structures: usize, mutate: Option<MutateSign>) -> CliResult<Outcome> {
    if structures == 0 {
        return Err(CliError::Usage("--structures must be at least 1".into()));
    }
    let mutation = mutate.map(|m| match m {
        MutateSign::Omega => Mutation::Omega,
        MutateSign::ReOmega => Mutation::ReOmega,
        MutateSign::ImOmega => Mutation::ImOmega,
    });
    let mut extra = vec![("structures", structures.to_string())];
    if let Some(m) = mutate {
        extra.push(("mutate-sign", m.name().to_string()));
    }
    let mut rep = Report::new(echo("verify-identities", opts, &extra), Some(opts.seed));
    let tol = tolerance(opts, FLOAT_TOL);
    let mut rng = random::rng(opts.seed);
    let torsion_count = structures.min(TORSION_STRUCTURES);
    match opts.backend {
        Backend::Exact => {
            battery::<Q>(&mut rep, &mut rng, structures, mutation, tol)?;
            torsion_round_trip::<Q>(&mut rep, &mut rng, torsion_count, tol)?;
        }
        Backend::Float => {
            battery::<f64>(&mut rep, &mut rng, structures, mutation, tol)?;
            torsion_round_trip::<f64>(&mut rep, &mut rng, torsion_count, tol)?;
        }
    }
    hitchin(&mut rep, &mut rng, opts.backend, tol);
    if let Some(m) = mutate {
        rep.notes.push(format!("{}: sign flipped on every structure before the battery; failures are expected", m.name()));
    }
    let kind = if opts.backend == Backend::Exact { "GL⁺" } else { "well-conditioned GL⁺" };
    rep.notes.push(format!("structure #0 is the standard structure; the rest are {kind} pullbacks drawn from seed {}", opts.seed));
    Ok(Outcome { report: rep, gate: true })
}
