//! Circle-invariant G₂-structures on R⁷ = R⁶ ⊕ R with `φ = θ∧ω + p³ReΩ`.

use crate::error::{Error, Result};
use crate::exterior::{top, Form};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::su3::SU3Structure;

use super::tol_for;

pub fn g2_assemble<S: Scalar>(theta: &Form<S>, s: &SU3Structure<S>, p: &S) -> Result<Form<S>> {
    if theta.dim() != 7 || theta.degree() != 1 {
        return Err(Error::DimensionMismatch("θ must be a 1-form on R^7".into()));
    }
    if !p.is_positive() {
        return Err(Error::NonPositivePQ(format!("p = {:?}", p)));
    }
    let p3 = p.clone() * p.clone() * p.clone();
    Ok(&theta.wedge(&s.omega.extend(7)) + &s.re_omega.extend(7).scale(&p3))
}

/// `B(u, v) = top((u⌟φ)∧(v⌟φ)∧φ) / 6`, definite exactly when `φ` is a
/// G₂-form.
pub fn g2_bilinear<S: Scalar>(phi: &Form<S>) -> Matrix<S> {
    let n = phi.dim();
    let c: Vec<Form<S>> = (1..=n).map(|i| phi.contract(i)).collect();
    Matrix::from_fn(n, n, |i, j| top(&c[i].wedge(&c[j]).wedge(phi)) / S::from_i64(6))
}

pub fn is_g2_form<S: Scalar>(phi: &Form<S>) -> bool {
    if phi.dim() != 7 || phi.degree() != 3 {
        return false;
    }
    let b = g2_bilinear(phi);
    let tol = tol_for::<S>(b.max_abs());
    let idx = |k: usize| (0..k).collect::<Vec<_>>();
    let minors: Vec<S> = (1..=7).map(|k| b.minor(&idx(k), &idx(k)).det()).collect();
    if minors.iter().any(|m| m.is_negligible(tol)) {
        return false;
    }
    let pos = minors.iter().all(|m| m.is_positive());
    let neg = minors.iter().enumerate().all(|(k, m)| m.is_positive() == (k % 2 == 1));
    pos || neg
}

#[derive(Clone, Debug)]
pub struct G2Jet<S> {
    pub su3: SU3Structure<S>,
    pub p: S,
    pub d_omega: Form<S>,
    pub d_re: Form<S>,
    pub d_im: Form<S>,
    pub d_theta: Form<S>,
    pub dp: Form<S>,
}

impl<S: Scalar> G2Jet<S> {
    pub fn flat(su3: SU3Structure<S>, p: S) -> Self {
        G2Jet {
            su3,
            p,
            d_omega: Form::zero(6, 3),
            d_re: Form::zero(6, 4),
            d_im: Form::zero(6, 4),
            d_theta: Form::zero(6, 2),
            dp: Form::zero(6, 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct G2Report<S> {
    /// `dω`.
    pub a: Form<S>,
    /// `d(p³ReΩ) + dθ∧ω`.
    pub b: Form<S>,
    /// `d(pImΩ)`.
    pub c: Form<S>,
    /// `2p³dp∧ω² − dθ∧pImΩ`.
    pub d: Form<S>,
}

impl<S: Scalar> G2Report<S> {
    pub fn norms(&self) -> Vec<(&'static str, f64)> {
        vec![("a", self.a.coeff_norm()), ("b", self.b.coeff_norm()), ("c", self.c.coeff_norm()), ("d", self.d.coeff_norm())]
    }
}

pub fn g2_torsion_residuals<S: Scalar>(j: &G2Jet<S>) -> G2Report<S> {
    let s = &j.su3;
    let p = &j.p;
    let p2 = p.clone() * p.clone();
    let p3 = p2.clone() * p.clone();
    let w2 = s.omega.wedge(&s.omega);
    let b = &(&j.dp.wedge(&s.re_omega).scale(&(p2 * S::from_i64(3))) + &j.d_re.scale(&p3)) + &j.d_theta.wedge(&s.omega);
    let c = &j.dp.wedge(&s.im_omega) + &j.d_im.scale(p);
    let d = &j.dp.wedge(&w2).scale(&(p3 * S::from_i64(2))) - &j.d_theta.wedge(&s.im_omega).scale(p);
    G2Report { a: j.d_omega.clone(), b, c, d }
}
