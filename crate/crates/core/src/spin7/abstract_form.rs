//! Basis-free description of `Φ` through forms valued in `Lie(T²)`, its dual
//! and `Λ²Lie(T²)*`.
//!
//! With a basis `X, Y` of `Lie(T²)` and dual basis `e¹, e²`:
//! the connection is `A = η⊗X + θ⊗Y`, the horizontal 3-form is
//! `℧ = ℧₁⊗e¹ + ℧₂⊗e²`, and the weighted 2-form is `ϖ = w⊗e¹∧e²`.
//! A pairing of `v₁∧…∧v_k` with a form valued in `ΛLie*` applies
//! `ι_{v₁}⋯ι_{v_k}` in that order.

use crate::error::{Error, Result};
use crate::exterior::{express_in, Form};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

use super::torsion::JetPoint;
use super::{lift, tol_for, Spin7Data};

/// A `Lie(T²)`-valued form `x⊗X + y⊗Y`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieValued<S> {
    pub x: Form<S>,
    pub y: Form<S>,
}

/// A `Lie(T²)*`-valued form `a⊗e¹ + b⊗e²`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualValued<S> {
    pub a: Form<S>,
    pub b: Form<S>,
}

/// A `Λ²Lie(T²)*`-valued form `w⊗e¹∧e²`.
#[derive(Clone, Debug, PartialEq)]
pub struct VolumeValued<S> {
    pub w: Form<S>,
}

/// The normalization of `(℧⩕℧)/ϖ` that reproduces `½pq ω²`. The literal
/// quotient `α` with `α∧w = ℧⩕℧` and `α ∝ ω²` equals `(4/3)pq ω²`.
pub fn quotient_normalization<S: Scalar>() -> S {
    S::ratio(3, 8)
}

impl<S: Scalar> LieValued<S> {
    /// `A⩕A`, returned as the coefficient of `X∧Y`.
    pub fn wedge_self(&self) -> Form<S> {
        &self.x.wedge(&self.y) - &self.y.wedge(&self.x)
    }

    /// `A⩕℧` contracted through the duality pairing.
    pub fn pair_dual(&self, m: &DualValued<S>) -> Form<S> {
        &self.x.wedge(&m.a) + &self.y.wedge(&m.b)
    }

    /// `A⩕ϖ` contracted to a `Lie*`-valued form: `ι_X(e¹∧e²) = e²` and
    /// `ι_Y(e¹∧e²) = −e¹`.
    pub fn pair_volume(&self, v: &VolumeValued<S>) -> DualValued<S> {
        DualValued { a: -&self.y.wedge(&v.w), b: self.x.wedge(&v.w) }
    }

    /// Components in the basis `(X', Y') = (X, Y)·S`.
    pub fn rebased(&self, s: &Matrix<S>) -> Self {
        let inv = s.inverse().expect("basis change must be invertible");
        LieValued {
            x: &self.x.scale(&inv[(0, 0)]) + &self.y.scale(&inv[(0, 1)]),
            y: &self.x.scale(&inv[(1, 0)]) + &self.y.scale(&inv[(1, 1)]),
        }
    }
}

impl<S: Scalar> DualValued<S> {
    /// `℧⩕℧` as the coefficient of `e¹∧e²`.
    pub fn wedge_self(&self) -> Form<S> {
        &self.a.wedge(&self.b) - &self.b.wedge(&self.a)
    }

    pub fn rebased(&self, s: &Matrix<S>) -> Self {
        DualValued {
            a: &self.a.scale(&s[(0, 0)]) + &self.b.scale(&s[(1, 0)]),
            b: &self.a.scale(&s[(0, 1)]) + &self.b.scale(&s[(1, 1)]),
        }
    }
}

impl<S: Scalar> VolumeValued<S> {
    /// `ι_{v₁}ι_{v₂}` of `e¹∧e²` applied to `(X∧Y)`-valued forms gives `−1`.
    pub fn pair_bivector(&self, c: &Form<S>) -> Form<S> {
        -&c.wedge(&self.w)
    }

    pub fn rebased(&self, s: &Matrix<S>) -> Self {
        VolumeValued { w: self.w.scale(&s.det()) }
    }
}

/// The abstract objects of a [`Spin7Data`] in the basis `(X, Y) = (e₇, e₈)`.
pub fn abstract_parts<S: Scalar>(d: &Spin7Data<S>) -> (LieValued<S>, DualValued<S>, VolumeValued<S>) {
    let s = &d.su3;
    let re = lift(&s.re_omega);
    let im = lift(&s.im_omega);
    let a = LieValued { x: d.eta.clone(), y: d.theta.clone() };
    let m = DualValued { a: re.scale(&d.p), b: -(&re.scale(&d.r) + &im.scale(&d.q)) };
    let v = VolumeValued { w: -lift(&s.omega) };
    (a, m, v)
}

/// `ω = −w` recovered from the weighted 2-form.
fn omega_of<S: Scalar>(v: &VolumeValued<S>) -> Form<S> {
    -&v.w
}

/// The normalized quotient `(℧⩕℧)/ϖ`: the multiple of `ω²` whose wedge
/// with `w` is `℧⩕℧`, times [`quotient_normalization`].
pub fn quotient<S: Scalar>(m: &DualValued<S>, v: &VolumeValued<S>) -> Result<Form<S>> {
    let w = omega_of(v);
    let w2 = w.wedge(&w);
    let target = m.wedge_self();
    let tol = tol_for::<S>(target.max_abs());
    let c = express_in(&target, &[w2.wedge(&v.w)], tol)
        .ok_or_else(|| Error::InconsistentVerticalData("℧⩕℧ is not a multiple of ω³".into()))?;
    Ok(w2.scale(&(c[0].clone() * quotient_normalization())))
}

/// `Φ = ½A⩕A⌟ϖ + A⌟℧ + (℧⩕℧)/ϖ`.
pub fn abstract_phi<S: Scalar>(a: &LieValued<S>, m: &DualValued<S>, v: &VolumeValued<S>) -> Result<Form<S>> {
    for f in [&a.x, &a.y, &m.a, &m.b, &v.w] {
        if f.dim() != 8 {
            return Err(Error::DimensionMismatch("abstract forms live on R^8".into()));
        }
    }
    let horizontal = |f: &Form<S>| f.contract(7).is_zero() && f.contract(8).is_zero();
    if !(horizontal(&m.a) && horizontal(&m.b) && horizontal(&v.w)) {
        return Err(Error::InconsistentVerticalData("℧ and ϖ must be horizontal".into()));
    }
    let t1 = v.pair_bivector(&a.wedge_self()).scale(&S::ratio(1, 2));
    let t2 = a.pair_dual(m);
    Ok(&(&t1 + &t2) + &quotient(m, v)?)
}

/// The two abstract structure equations `d℧ + dA⌟ϖ` and
/// `dA⌟℧ + d((℧⩕℧)/ϖ)` evaluated on a jet.
///
/// The quotient is `c·ω²` with `c` a function; its differential is taken
/// from the jets of `p` and `q`, since `c = ½pq` on the invariant shape.
pub fn abstract_residuals<S: Scalar>(j: &JetPoint<S>) -> Result<(DualValued<S>, Form<S>)> {
    let d = &j.data;
    let (_, m, v) = abstract_parts(d);
    let (p, q, r) = (&d.p, &d.q, &d.r);
    let (re, im) = (lift(&d.su3.re_omega), lift(&d.su3.im_omega));
    let w = lift(&d.su3.omega);
    let da = LieValued { x: lift(&j.d_eta), y: lift(&j.d_theta) };
    let dm = DualValued {
        a: &lift(&j.dp).wedge(&re) + &lift(&j.d_re).scale(p),
        b: -(&(&(&lift(&j.dr).wedge(&re) + &lift(&j.d_re).scale(r)) + &lift(&j.dq).wedge(&im)) + &lift(&j.d_im).scale(q)),
    };
    let first_dual = da.pair_volume(&v);
    let first = DualValued { a: &dm.a + &first_dual.a, b: &dm.b + &first_dual.b };
    let quot = quotient(&m, &v)?;
    let w2 = w.wedge(&w);
    let c = express_in(&quot, &[w2.clone()], tol_for::<S>(quot.max_abs())).expect("quotient is a multiple of ω²")[0].clone();
    let dc = (&lift(&j.dp).scale(q) + &lift(&j.dq).scale(p)).scale(&S::ratio(1, 2));
    let d_quot = &dc.wedge(&w2) + &w.wedge(&lift(&j.d_omega)).scale(&(c * S::from_i64(2)));
    let second = &da.pair_dual(&m) + &d_quot;
    Ok((first, second))
}
