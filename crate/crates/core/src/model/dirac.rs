//! The flat Dirac operator on `T⁶` acting on triples `(f, g, γ)`.

use crate::error::{Error, Result};
use crate::su3::SU3Structure;

use super::grid::{fd_d, fd_dstar, GridChart, GridField, PlaneWaves};

/// Output of [`dirac_flat`], one slot per input slot.
#[derive(Clone, Debug, PartialEq)]
pub struct DiracTriple {
    pub f: GridField,
    pub g: GridField,
    pub gamma: GridField,
}

impl DiracTriple {
    pub fn new(f: GridField, g: GridField, gamma: GridField) -> Result<Self> {
        if f.chart() != g.chart() || f.chart() != gamma.chart() {
            return Err(Error::ChartMismatch("Dirac slots live on different charts".into()));
        }
        if f.chart().dim() != 6 || f.degree() != 0 || g.degree() != 0 || gamma.degree() != 1 {
            return Err(Error::ChartMismatch("Dirac expects two functions and a 1-form on a 6-dimensional chart".into()));
        }
        Ok(DiracTriple { f, g, gamma })
    }

    pub fn sub(&self, o: &DiracTriple) -> Result<DiracTriple> {
        Ok(DiracTriple { f: self.f.sub(&o.f)?, g: self.g.sub(&o.g)?, gamma: self.gamma.sub(&o.gamma)? })
    }

    pub fn max_abs(&self) -> f64 {
        self.f.max_abs().max(self.g.max_abs()).max(self.gamma.max_abs())
    }

    pub fn l2_norm(&self) -> f64 {
        (self.f.l2_norm().powi(2) + self.g.l2_norm().powi(2) + self.gamma.l2_norm().powi(2)).sqrt()
    }
}

/// `curl γ = ⋆(dγ ∧ ReΩ)` evaluated pointwise from the discrete `dγ`.
pub fn fd_curl(gamma: &GridField, s: &SU3Structure<f64>) -> GridField {
    fd_d(gamma).map(1, |dg| s.curl_from(dg))
}

/// `(d*γ, −d*Jγ, curl γ + df − Jdg)` for a constant structure `s`.
pub fn dirac_flat(u: &DiracTriple, s: &SU3Structure<f64>) -> Result<DiracTriple> {
    let g = &s.metric;
    let j_gamma = u.gamma.map(1, |a| s.j_form(a));
    let j_dg = fd_d(&u.g).map(1, |a| s.j_form(a));
    DiracTriple::new(
        fd_dstar(&u.gamma, g)?,
        fd_dstar(&j_gamma, g)?.scale(-1.0),
        fd_curl(&u.gamma, s).add(&fd_d(&u.f))?.sub(&j_dg)?,
    )
}

/// Componentwise discrete Hodge Laplacian of a triple.
pub fn laplacian_triple(u: &DiracTriple, s: &SU3Structure<f64>) -> Result<DiracTriple> {
    let g = &s.metric;
    let lap = |f: &GridField| super::grid::fd_laplacian(f, g);
    DiracTriple::new(lap(&u.f)?, lap(&u.g)?, lap(&u.gamma)?)
}

/// Flips the sign of the middle slot. The printed triple is not formally
/// self-adjoint on its own: `dirac_flat ∘ flip_g` is, and its square is the
/// Hodge Laplacian.
pub fn flip_g(u: &DiracTriple) -> DiracTriple {
    DiracTriple { g: u.g.scale(-1.0), ..u.clone() }
}

/// `(D∘P)²u` with `D` = [`dirac_flat`] and `P` = [`flip_g`].
pub fn dirac_square(u: &DiracTriple, s: &SU3Structure<f64>) -> Result<DiracTriple> {
    let once = dirac_flat(&flip_g(u), s)?;
    dirac_flat(&flip_g(&once), s)
}

/// One row of a dyadic refinement sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub h: f64,
    pub value: f64,
}

/// Relative max-norm deviation of `(D∘P)²u` from the exact Laplacian of a
/// random plane-wave triple, for each resolution in `ns`. Fields vary along
/// the first three axes.
pub fn weitzenbock_sweep(ns: &[usize], period: f64, s: &SU3Structure<f64>, seed: u64) -> Result<Vec<SweepRow>> {
    let mut rng = crate::random::rng(seed);
    let probe = GridChart::with_counts(vec![4, 4, 4, 1, 1, 1], period)?;
    let waves = [
        PlaneWaves::random(&probe, 0, 2, &mut rng),
        PlaneWaves::random(&probe, 0, 2, &mut rng),
        PlaneWaves::random(&probe, 1, 2, &mut rng),
    ];
    let laps = waves.iter().map(|w| w.laplacian(&s.metric)).collect::<Result<Vec<_>>>()?;
    ns.iter()
        .map(|&n| {
            let chart = GridChart::with_counts(vec![n, n, n, 1, 1, 1], period)?;
            let u = DiracTriple::new(waves[0].sample(&chart), waves[1].sample(&chart), waves[2].sample(&chart))?;
            let exact = DiracTriple::new(laps[0].sample(&chart), laps[1].sample(&chart), laps[2].sample(&chart))?;
            let dev = dirac_square(&u, s)?.sub(&exact)?.max_abs() / exact.max_abs();
            Ok(SweepRow { n, h: chart.h(), value: dev })
        })
        .collect()
}

/// Relative size of `d*(J dh)` for a random smooth function `h`.
pub fn d_star_j_d_sweep(ns: &[usize], period: f64, s: &SU3Structure<f64>, seed: u64) -> Result<Vec<SweepRow>> {
    let mut rng = crate::random::rng(seed);
    let probe = GridChart::with_counts(vec![4, 4, 4, 1, 1, 1], period)?;
    let wave = PlaneWaves::random(&probe, 0, 3, &mut rng);
    ns.iter()
        .map(|&n| {
            let chart = GridChart::with_counts(vec![n, n, n, 1, 1, 1], period)?;
            let h = wave.sample(&chart);
            let jdh = fd_d(&h).map(1, |a| s.j_form(a));
            let v = fd_dstar(&jdh, &s.metric)?.max_abs() / fd_d(&h).max_abs();
            Ok(SweepRow { n, h: chart.h(), value: v })
        })
        .collect()
}
