use cayley_core::model::closure::{grid_spin7_closure, smooth_invariant_data, FirstOrderAnsatz};
use cayley_core::model::dirac::{d_star_j_d_sweep, weitzenbock_sweep, SweepRow};
use cayley_core::model::grid::{fd_d, fitted_order, GridChart, PlaneWaves};
use cayley_core::random;
use cayley_core::su3::{pullback_su3, standard, SU3Structure};

use super::echo;
use crate::report::{sci, Report, Table};
use crate::{CliError, CliResult, Opts, Outcome, Suite};

const DEFAULT_N: usize = 32;
const ORDER_TARGET: f64 = 2.0;
const ORDER_TOL: f64 = 0.2;
const ROUND_OFF: f64 = 1e-12;

fn levels(n: usize, full: bool) -> Vec<usize> {
    let mut ns = vec![n / 2, n, 2 * n];
    if full {
        ns.push(4 * n);
    }
    ns
}

fn sweep_table(title: &str, rows: &[SweepRow]) -> Table {
    let mut t = Table::new(title, &["N", "h", "VALUE"]);
    for r in rows {
        t.row(vec![r.n.to_string(), sci(r.h), sci(r.value)]);
    }
    t
}

fn order_of(rows: &[SweepRow]) -> f64 {
    let hs: Vec<f64> = rows.iter().map(|r| r.h).collect();
    let vs: Vec<f64> = rows.iter().map(|r| r.value).collect();
    fitted_order(&hs, &vs)
}

fn structure(seed: u64) -> CliResult<SU3Structure<f64>> {
    let mut rng = random::rng(seed);
    Ok(pullback_su3(&random::to_f64(&random::well_conditioned(&mut rng, 6)), &standard())?)
}

fn dirac_suite(rep: &mut Report, opts: &Opts, n: usize, period: f64) -> CliResult<()> {
    let s = structure(opts.seed)?;
    let mut rng = random::rng(opts.seed.wrapping_add(1));
    let chart = GridChart::with_counts(vec![n, n, n / 2, 4, 1, 1], period)?;
    let mut dd: f64 = 0.0;
    for k in 0..4 {
        let f = PlaneWaves::random(&chart, k, 3, &mut rng).sample(&chart);
        dd = dd.max(fd_d(&fd_d(&f)).max_abs() / f.max_abs().max(f64::MIN_POSITIVE));
    }
    rep.check("dirac/d_squared", dd <= ROUND_OFF, format!("max rel. |dd| {}", sci(dd)), &sci(ROUND_OFF), "d∘d = 0");
    let ns = levels(n, opts.full);
    let rows = weitzenbock_sweep(&ns, period, &s, opts.seed)?;
    let order = order_of(&rows);
    rep.tables.push(sweep_table("Dirac² minus Hodge Laplacian, relative deviation", &rows));
    rep.check(
        "dirac/weitzenbock_order",
        (order - ORDER_TARGET).abs() <= ORDER_TOL,
        format!("fitted order {order:.3}"),
        "2 ± 0.2",
        "Dirac² = Δ on flat space",
    );
    let rows = d_star_j_d_sweep(&ns, period, &s, opts.seed.wrapping_add(2))?;
    let max = rows.iter().map(|r| r.value).fold(0.0, f64::max);
    let order = order_of(&rows);
    let ok = max <= ROUND_OFF || (order - ORDER_TARGET).abs() <= ORDER_TOL;
    rep.tables.push(sweep_table("|d*(J dh)| relative to |dh|", &rows));
    rep.check(
        "dirac/d_star_j_d",
        ok,
        if max <= ROUND_OFF { format!("max {} (round-off)", sci(max)) } else { format!("fitted order {order:.3}") },
        &format!("{} or order 2 ± 0.2", sci(ROUND_OFF)),
        "d*Jdh = 0",
    );
    Ok(())
}

fn closure_suite(rep: &mut Report, opts: &Opts, n: usize, period: f64) -> CliResult<()> {
    let chart8 = |m: usize| GridChart::with_counts(vec![m, m, 1, 1, 1, 1, 1, 1], period);
    let rep_n = grid_spin7_closure(&smooth_invariant_data(&chart8(n)?, 0.2, opts.seed)?)?;
    let rel = rep_n.leibniz_defect / rep_n.combination.max(f64::MIN_POSITIVE);
    rep.check(
        "closure/leibniz",
        rel <= ROUND_OFF,
        format!("rel. defect {} at N = {n}", sci(rel)),
        &sci(ROUND_OFF),
        "dΦ = −η∧R_b + θ∧R_c + R_d + (η∧θ + pq ω)∧R_a",
    );
    let mut rows = Vec::new();
    for m in levels(n, opts.full) {
        let r = grid_spin7_closure(&smooth_invariant_data(&chart8(m)?, 0.2, opts.seed)?)?;
        rows.push(SweepRow { n: m, h: period / m as f64, value: r.stencil_defect });
    }
    let order = order_of(&rows);
    let last = &rows[rows.len() - 2..];
    let finest = (last[1].value / last[0].value).ln() / (last[1].h / last[0].h).ln();
    rep.tables.push(sweep_table("stencil dΦ minus structure-equation combination", &rows));
    rep.notes.push(format!("closure stencil defect: fitted order {order:.3} over all levels, {finest:.3} over the finest pair (informational)"));
    let chart6 = GridChart::new(6, n, period)?;
    let mut worst: f64 = 0.0;
    for i in 0..3u64 {
        let a = FirstOrderAnsatz::random(1.0 + i as f64, opts.seed.wrapping_add(i))?;
        worst = worst.max(a.residual(&chart6, 200, opts.seed.wrapping_add(i))?);
    }
    rep.check(
        "closure/first_order_ansatz",
        worst <= ROUND_OFF,
        format!("max residual {} at N = {n}", sci(worst)),
        &sci(ROUND_OFF),
        "dρ = −p₀⁻¹dθ₁∧ω₀",
    );
    Ok(())
}

pub fn run(opts: &Opts, suite: Suite, period: f64) -> CliResult<Outcome> {
    let n = opts.n.unwrap_or(DEFAULT_N);
    if n < 8 || n % 2 != 0 {
        return Err(CliError::Usage(format!("--n must be even and at least 8, got {n}")));
    }
    if !(period > 0.0 && period.is_finite()) {
        return Err(CliError::Usage(format!("--period must be positive, got {period}")));
    }
    let suite_name = format!("{suite:?}").to_lowercase();
    let extra = [("suite", suite_name), ("n", n.to_string()), ("period", period.to_string())];
    let mut rep = Report::new(echo("grid", opts, &extra), Some(opts.seed));
    if matches!(suite, Suite::Dirac | Suite::All) {
        dirac_suite(&mut rep, opts, n, period)?;
    }
    if matches!(suite, Suite::Closure | Suite::All) {
        closure_suite(&mut rep, opts, n, period)?;
    }
    rep.notes.push(format!("periodic grids of side {period}; sweep levels N/2, N, 2N{}", if opts.full { ", 4N" } else { "" }));
    Ok(Outcome { report: rep, gate: opts.check })
}
