//! The round Sasaki–Einstein 5-sphere and its Calabi–Yau cone `C³ ∖ {0}`.
//!
//! Forms are written in explicit coordinates and differentiated exactly by
//! forward-mode dual numbers, one coordinate direction at a time.

use std::f64::consts::FRAC_PI_2;

use rand::Rng;

use crate::error::{Error, Result};
use crate::exterior::{basis_masks, mask_pos, Form};
use crate::scalar::Dual;
use crate::su3::make_su3;

/// `d F` at `x` for a form-valued function of the coordinates.
pub fn exterior_derivative(x: &[f64], f: impl Fn(&[Dual]) -> Form<Dual>) -> Form<f64> {
    let n = x.len();
    let mut out: Option<Form<f64>> = None;
    for j in 0..n {
        let seeded: Vec<Dual> = x.iter().enumerate().map(|(i, &v)| Dual::new(v, if i == j { 1.0 } else { 0.0 })).collect();
        let fj = f(&seeded);
        let term = Form::e(n, &[j + 1]).wedge(&fj.map(|c| c.d));
        out = Some(match out {
            None => term,
            Some(acc) => &acc + &term,
        });
    }
    out.expect("at least one coordinate")
}

pub fn value(f: &Form<Dual>) -> Form<f64> {
    f.map(|c| c.v)
}

/// Moves a form on R^n to R^{n+1} along `e^i ↦ e^{i+1}`.
fn shift_up<S: crate::scalar::Scalar>(f: &Form<S>) -> Form<S> {
    let (n, k) = (f.dim(), f.degree());
    let mut coeffs = vec![S::zero(); crate::exterior::binom(n + 1, k)];
    for (&m, c) in basis_masks(n, k).iter().zip(f.coeffs()) {
        coeffs[mask_pos(n + 1, k, m << 1)] = c.clone();
    }
    Form::from_coeffs(n + 1, k, coeffs)
}

/// The tuple `(η, ω₁, ω₂, ω₃)` at one point.
#[derive(Clone, Debug)]
pub struct SeForms<S> {
    pub eta: Form<S>,
    pub omega1: Form<S>,
    pub omega2: Form<S>,
    pub omega3: Form<S>,
}

/// A 5-dimensional coordinate patch carrying a candidate Sasaki–Einstein
/// structure.
pub trait SasakiEinsteinModel {
    fn check_domain(&self, x: &[f64]) -> Result<()>;
    fn forms(&self, x: &[Dual]) -> SeForms<Dual>;
    /// Deterministic sample of points inside the chart domain.
    fn sample_points(&self, count: usize, seed: u64) -> Vec<Vec<f64>>;
}

/// Round `S⁵ ⊂ C³` in the chart
/// `z = (cos t₁ e^{iφ₁}, sin t₁ cos t₂ e^{iφ₂}, sin t₁ sin t₂ e^{iφ₃})`,
/// valid where every `|z_k| > 0`.
///
/// `eta_scale` and `swap_23` deform the structure for negative tests.
#[derive(Clone, Debug)]
pub struct RoundS5 {
    pub margin: f64,
    pub eta_scale: f64,
    pub swap_23: bool,
}

impl Default for RoundS5 {
    fn default() -> Self {
        RoundS5 { margin: 1e-2, eta_scale: 1.0, swap_23: false }
    }
}

type Complex1 = (Form<Dual>, Form<Dual>);

fn cwedge(a: &Complex1, b: &Complex1) -> Complex1 {
    (&a.0.wedge(&b.0) - &a.1.wedge(&b.1), &a.0.wedge(&b.1) + &a.1.wedge(&b.0))
}

fn cscale(a: &Complex1, re: Dual, im: Dual) -> Complex1 {
    (&a.0.scale(&re) - &a.1.scale(&im), &a.0.scale(&im) + &a.1.scale(&re))
}

impl SasakiEinsteinModel for RoundS5 {
    fn check_domain(&self, x: &[f64]) -> Result<()> {
        if x.len() != 5 {
            return Err(Error::PatchDomain(format!("expected 5 coordinates, got {}", x.len())));
        }
        let ok = |t: f64| t >= self.margin && t <= FRAC_PI_2 - self.margin;
        if !(ok(x[0]) && ok(x[1])) || x.iter().any(|v| !v.is_finite()) {
            return Err(Error::PatchDomain(format!("(t1, t2) = ({}, {}) outside [{m}, pi/2 - {m}]", x[0], x[1], m = self.margin)));
        }
        Ok(())
    }

    fn forms(&self, x: &[Dual]) -> SeForms<Dual> {
        let e = |i: usize| Form::<Dual>::e(5, &[i]);
        let (s1, c1, s2, c2) = (x[0].sin(), x[0].cos(), x[1].sin(), x[1].cos());
        let rho = [c1, s1 * c2, s1 * s2];
        let drho = [e(1).scale(&(-s1)), &e(1).scale(&(c1 * c2)) - &e(2).scale(&(s1 * s2)), &e(1).scale(&(c1 * s2)) + &e(2).scale(&(s1 * c2))];
        let dphi = [e(3), e(4), e(5)];
        let mut eta = Form::zero(5, 1);
        let mut omega1 = Form::zero(5, 2);
        let mut z = Vec::new();
        let mut dz = Vec::new();
        for k in 0..3 {
            eta = &eta + &dphi[k].scale(&(rho[k] * rho[k]));
            omega1 = &omega1 + &drho[k].wedge(&dphi[k]).scale(&rho[k]);
            let (cp, sp) = (x[2 + k].cos(), x[2 + k].sin());
            z.push((rho[k] * cp, rho[k] * sp));
            dz.push(cscale(&(drho[k].clone(), dphi[k].scale(&rho[k])), cp, sp));
        }
        // σ = ι_{∂_r}(dz₁∧dz₂∧dz₃) = z₁ dz₂∧dz₃ − z₂ dz₁∧dz₃ + z₃ dz₁∧dz₂.
        let terms = [(0, 1, 2, false), (1, 0, 2, true), (2, 0, 1, false)];
        let mut sigma = (Form::zero(5, 2), Form::zero(5, 2));
        for (a, b, c, neg) in terms {
            let t = cscale(&cwedge(&dz[b], &dz[c]), z[a].0, z[a].1);
            sigma = if neg { (&sigma.0 - &t.0, &sigma.1 - &t.1) } else { (&sigma.0 + &t.0, &sigma.1 + &t.1) };
        }
        let (omega2, omega3) = if self.swap_23 { (sigma.1, sigma.0) } else { sigma };
        SeForms { eta: eta.scale(&Dual::constant(self.eta_scale)), omega1, omega2, omega3 }
    }

    fn sample_points(&self, count: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = crate::random::rng(seed);
        let (lo, hi) = (self.margin, FRAC_PI_2 - self.margin);
        (0..count)
            .map(|_| {
                let mut x = vec![rng.gen_range(lo..=hi), rng.gen_range(lo..=hi)];
                x.extend((0..3).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)));
                x
            })
            .collect()
    }
}

/// Largest coefficient norms over the samples of `dη − 2ω₁`,
/// `dω₂ + 3η∧ω₃` and `dω₃ − 3η∧ω₂`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeResiduals {
    pub d_eta: f64,
    pub d_omega2: f64,
    pub d_omega3: f64,
}

impl SeResiduals {
    pub fn max(&self) -> f64 {
        self.d_eta.max(self.d_omega2).max(self.d_omega3)
    }
}

/// Pointwise residuals of the structure equations at one point.
pub fn se_residuals_at<M: SasakiEinsteinModel>(m: &M, x: &[f64]) -> Result<[Form<f64>; 3]> {
    m.check_domain(x)?;
    let f = m.forms(&x.iter().map(|&v| Dual::constant(v)).collect::<Vec<_>>());
    let (eta, w1, w2, w3) = (value(&f.eta), value(&f.omega1), value(&f.omega2), value(&f.omega3));
    let d_eta = exterior_derivative(x, |y| m.forms(y).eta);
    let d_w2 = exterior_derivative(x, |y| m.forms(y).omega2);
    let d_w3 = exterior_derivative(x, |y| m.forms(y).omega3);
    Ok([&d_eta - &w1.scale(&2.0), &d_w2 + &eta.wedge(&w3).scale(&3.0), &d_w3 - &eta.wedge(&w2).scale(&3.0)])
}

pub fn se_structure_check<M: SasakiEinsteinModel>(m: &M, points: &[Vec<f64>]) -> Result<SeResiduals> {
    let mut out = SeResiduals { d_eta: 0.0, d_omega2: 0.0, d_omega3: 0.0 };
    for x in points {
        let [a, b, c] = se_residuals_at(m, x)?;
        out.d_eta = out.d_eta.max(a.coeff_norm());
        out.d_omega2 = out.d_omega2.max(b.coeff_norm());
        out.d_omega3 = out.d_omega3.max(c.coeff_norm());
    }
    Ok(out)
}

/// `(ω_C, ReΩ_C, ImΩ_C)` on the cone in coordinates `(r, x)`, with
/// `ω_C = r dr∧η + r²ω₁` and `Ω_C = r²(dr + irη)∧(ω₂ + iω₃)`.
pub fn cone_forms<M: SasakiEinsteinModel>(m: &M, y: &[Dual]) -> [Form<Dual>; 3] {
    let r = y[0];
    let f = m.forms(&y[1..]);
    let (eta, w1, w2, w3) = (shift_up(&f.eta), shift_up(&f.omega1), shift_up(&f.omega2), shift_up(&f.omega3));
    let dr = Form::<Dual>::e(6, &[1]);
    let r2 = r * r;
    let omega = &dr.wedge(&eta).scale(&r) + &w1.scale(&r2);
    let re = (&dr.wedge(&w2) - &eta.wedge(&w3).scale(&r)).scale(&r2);
    let im = (&dr.wedge(&w3) + &eta.wedge(&w2).scale(&r)).scale(&r2);
    [omega, re, im]
}

/// Closure residuals of the cone plus the pointwise SU(3) checks on the
/// `r = 1` slice.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeReport {
    pub d_omega: f64,
    pub d_re_omega: f64,
    pub d_im_omega: f64,
    /// Largest `|⅙ω³ − ¼ReΩ∧ImΩ|` on the slice, using the `ImΩ` that the
    /// structure derives from `ReΩ`.
    pub monge_ampere: f64,
    /// Largest coefficient norm of the derived `ImΩ` minus `ImΩ_C`.
    pub im_omega_mismatch: f64,
}

impl ConeReport {
    pub fn closure(&self) -> f64 {
        self.d_omega.max(self.d_re_omega).max(self.d_im_omega)
    }
}

pub fn cone_structure<M: SasakiEinsteinModel>(m: &M, points: &[Vec<f64>], radii: &[f64]) -> Result<ConeReport> {
    let mut rep = ConeReport { d_omega: 0.0, d_re_omega: 0.0, d_im_omega: 0.0, monge_ampere: 0.0, im_omega_mismatch: 0.0 };
    for x in points {
        m.check_domain(x)?;
        for &r in radii.iter().chain(std::iter::once(&1.0)) {
            let mut y = vec![r];
            y.extend_from_slice(x);
            for (i, slot) in [&mut rep.d_omega, &mut rep.d_re_omega, &mut rep.d_im_omega].into_iter().enumerate() {
                let d = exterior_derivative(&y, |z| cone_forms(m, z)[i].clone());
                *slot = slot.max(d.coeff_norm());
            }
        }
        let y: Vec<Dual> = std::iter::once(1.0).chain(x.iter().copied()).map(Dual::constant).collect();
        let [w, re, im] = cone_forms(m, &y).map(|f| value(&f));
        let s = make_su3(&w, &re)?;
        rep.monge_ampere = rep.monge_ampere.max(s.monge_ampere_defect().abs());
        rep.im_omega_mismatch = rep.im_omega_mismatch.max((&s.im_omega - &im).coeff_norm());
    }
    Ok(rep)
}
