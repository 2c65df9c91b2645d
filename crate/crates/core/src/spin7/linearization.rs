//! The linear change of variables that turns the linearized torsion-free
//! system around constants `(p₀, q₀, r₀)` into Dirac-type equations.
//!
//! Forward: `ξ₂ = p₀η − r₀θ`, `ξ₁ = q₀θ`, `g = r₀P − p₀R + S`,
//! `t = r₀P − p₀R − S`, `h = ½(q₀P − 3p₀Q)`, `f = ½(p₀Q − 3q₀P)`.
//!
//! All variables are forms of a common degree for the scalars and a common
//! degree for `η, θ, ξ₁, ξ₂`, so the same map acts on values and on their
//! differentials.

use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::scalar::Scalar;
use crate::su3::SU3Structure;

#[derive(Clone, Debug, PartialEq)]
pub struct Constants<S> {
    pub p0: S,
    pub q0: S,
    pub r0: S,
}

impl<S: Scalar> Constants<S> {
    pub fn new(p0: S, q0: S, r0: S) -> Result<Self> {
        if !p0.is_positive() || !q0.is_positive() {
            return Err(Error::DegenerateConstants(format!("p₀ = {:?}, q₀ = {:?}", p0, q0)));
        }
        Ok(Constants { p0, q0, r0 })
    }
}

/// `(f, g, h, t, ξ₁, ξ₂)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiracVars<S> {
    pub f: Form<S>,
    pub g: Form<S>,
    pub h: Form<S>,
    pub t: Form<S>,
    pub xi1: Form<S>,
    pub xi2: Form<S>,
}

/// `(P, Q, R, S, η, θ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorsionVars<S> {
    pub p: Form<S>,
    pub q: Form<S>,
    pub r: Form<S>,
    pub s: Form<S>,
    pub eta: Form<S>,
    pub theta: Form<S>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearizationVars<S> {
    pub consts: Constants<S>,
    pub forward: DiracVars<S>,
    pub backward: TorsionVars<S>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Recompute the Dirac variables from the torsion variables.
    Forward,
    /// Recompute the torsion variables from the Dirac variables.
    Backward,
}

pub fn to_dirac<S: Scalar>(v: &TorsionVars<S>, c: &Constants<S>) -> DiracVars<S> {
    let half = S::ratio(1, 2);
    let three = S::from_i64(3);
    let rp = &v.p.scale(&c.r0) - &v.r.scale(&c.p0);
    DiracVars {
        f: (&v.q.scale(&c.p0) - &v.p.scale(&(c.q0.clone() * three.clone()))).scale(&half),
        g: &rp + &v.s,
        h: (&v.p.scale(&c.q0) - &v.q.scale(&(c.p0.clone() * three))).scale(&half),
        t: &rp - &v.s,
        xi1: v.theta.scale(&c.q0),
        xi2: &v.eta.scale(&c.p0) - &v.theta.scale(&c.r0),
    }
}

/// `P = −(h+3f)/(4q₀)`, `Q = −(3h+f)/(4p₀)`, `S = ½(g−t)`,
/// `R = −(1/p₀)(r₀(h+3f)/(4q₀) + ½(g+t))`, `θ = ξ₁/q₀`,
/// `η = (ξ₂ + (r₀/q₀)ξ₁)/p₀`.
pub fn from_dirac<S: Scalar>(v: &DiracVars<S>, c: &Constants<S>) -> TorsionVars<S> {
    let half = S::ratio(1, 2);
    let three = S::from_i64(3);
    let four = S::from_i64(4);
    let h3f = &v.h + &v.f.scale(&three);
    let p = h3f.scale(&(-S::one() / (four.clone() * c.q0.clone())));
    let q = (&v.h.scale(&three) + &v.f).scale(&(-S::one() / (four.clone() * c.p0.clone())));
    let s = (&v.g - &v.t).scale(&half);
    let gt = (&v.g + &v.t).scale(&half);
    let r = (&h3f.scale(&(c.r0.clone() / (four * c.q0.clone()))) + &gt).scale(&(-S::one() / c.p0.clone()));
    let theta = v.xi1.scale(&(S::one() / c.q0.clone()));
    let eta = (&v.xi2 + &v.xi1.scale(&(c.r0.clone() / c.q0.clone()))).scale(&(S::one() / c.p0.clone()));
    TorsionVars { p, q, r, s, eta, theta }
}

pub fn linearization_change_of_variables<S: Scalar>(v: &LinearizationVars<S>, dir: Direction) -> Result<LinearizationVars<S>> {
    let c = Constants::new(v.consts.p0.clone(), v.consts.q0.clone(), v.consts.r0.clone())?;
    Ok(match dir {
        Direction::Forward => LinearizationVars { forward: to_dirac(&v.backward, &c), ..v.clone() },
        Direction::Backward => LinearizationVars { backward: from_dirac(&v.forward, &c), ..v.clone() },
    })
}

/// The two 5-form components `(z₃, z₄)` of the linearized equations, from
/// the differentials of the torsion variables: 1-forms `dP, dQ, dR, dS` and
/// 2-forms `dη, dθ`.
///
/// `z₃ = (p₀dη − r₀dθ)∧ReΩ − q₀dθ∧ImΩ + (½d(p₀Q + q₀P) + J dS)∧ω²`,
/// `z₄ = (p₀dη − r₀dθ)∧ReΩ + q₀dθ∧ImΩ + (d(p₀Q − q₀P) + J d(r₀P − p₀R))∧ω²`.
///
/// The `J dS` term carries weight 1; with weight ½ the regrouping into
/// Dirac form fails by `½dS` (see the tests).
pub fn linearized_system<S: Scalar>(s: &SU3Structure<S>, c: &Constants<S>, dv: &TorsionVars<S>) -> (Form<S>, Form<S>) {
    linearized_system_weighted(s, c, dv, &S::one())
}

pub(crate) fn linearized_system_weighted<S: Scalar>(
    su3: &SU3Structure<S>,
    c: &Constants<S>,
    dv: &TorsionVars<S>,
    s_weight: &S,
) -> (Form<S>, Form<S>) {
    let half = S::ratio(1, 2);
    let (re, im, w) = (&su3.re_omega, &su3.im_omega, &su3.omega);
    let w2 = w.wedge(w);
    let xi2 = &dv.eta.scale(&c.p0) - &dv.theta.scale(&c.r0);
    let z3_w = &(&dv.q.scale(&c.p0) + &dv.p.scale(&c.q0)).scale(&half) + &su3.j_form(&dv.s).scale(s_weight);
    let z3 = &(&xi2.wedge(re) - &dv.theta.wedge(im).scale(&c.q0)) + &z3_w.wedge(&w2);
    let z4_w = &(&dv.q.scale(&c.p0) - &dv.p.scale(&c.q0)) + &su3.j_form(&(&dv.p.scale(&c.r0) - &dv.r.scale(&c.p0)));
    let z4 = &(&xi2.wedge(re) + &dv.theta.wedge(im).scale(&c.q0)) + &z4_w.wedge(&w2);
    (z3, z4)
}

/// Left sides of the grouped equations in the Dirac variables:
/// `⋆(dξ₂∧ReΩ) + dg + J dh` and `⋆(dξ₁∧ReΩ) + df + J dt`.
pub fn dirac_form<S: Scalar>(s: &SU3Structure<S>, dd: &DiracVars<S>) -> (Form<S>, Form<S>) {
    let a = &(&s.star(&dd.xi2.wedge(&s.re_omega)) + &dd.g) + &s.j_form(&dd.h);
    let b = &(&s.star(&dd.xi1.wedge(&s.re_omega)) + &dd.f) + &s.j_form(&dd.t);
    (a, b)
}

/// Defects of the regrouping identity
/// `dirac_form(d vars) = (⋆½(z₃+z₄), ⋆½J(z₄−z₃))`.
pub fn regrouping_defect<S: Scalar>(s: &SU3Structure<S>, c: &Constants<S>, dv: &TorsionVars<S>) -> (Form<S>, Form<S>) {
    regrouping_defect_weighted(s, c, dv, &S::one())
}

pub(crate) fn regrouping_defect_weighted<S: Scalar>(
    s: &SU3Structure<S>,
    c: &Constants<S>,
    dv: &TorsionVars<S>,
    s_weight: &S,
) -> (Form<S>, Form<S>) {
    let half = S::ratio(1, 2);
    let (z3, z4) = linearized_system_weighted(s, c, dv, s_weight);
    let (a, b) = dirac_form(s, &to_dirac(dv, c));
    let ra = s.star(&(&z3 + &z4)).scale(&half);
    let rb = s.star(&s.j_form(&(&z4 - &z3))).scale(&half);
    (&a - &ra, &b - &rb)
}
