//! T²-invariant Spin(7)-structures on R⁸ = R⁶ ⊕ R², with the circle
//! directions `X = e₇`, `Y = e₈`.
//!
//! A structure is encoded by an SU(3)-structure on the horizontal R⁶, two
//! connection forms `η, θ` and three functions `p, q, r`:
//!
//! `Φ = η∧θ∧ω + η∧pReΩ − θ∧(rReΩ + qImΩ) + ½pq ω²`.

pub mod abstract_form;
pub mod formal;
pub mod g2;
pub mod linearization;
pub mod torsion;

use crate::error::{Error, Result};
use crate::exterior::{express_in, solve_wedge, top, Form, Hodge, Metric, Orientation};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::su3::{hitchin_dual, make_su3, SU3Structure, FLOAT_TOL};

/// Embeds a horizontal form on R⁶ into R⁸.
pub fn lift<S: Scalar>(f: &Form<S>) -> Form<S> {
    f.extend(8)
}

pub(crate) fn tol_for<S: Scalar>(scale: f64) -> f64 {
    if S::EXACT {
        0.0
    } else {
        FLOAT_TOL * scale.max(1.0)
    }
}

#[derive(Clone, Debug)]
pub struct Spin7Data<S> {
    pub su3: SU3Structure<S>,
    pub eta: Form<S>,
    pub theta: Form<S>,
    pub p: S,
    pub q: S,
    pub r: S,
}

impl<S: Scalar> Spin7Data<S> {
    /// Validated constructor: `η(X) = θ(Y) = 1`, `η(Y) = θ(X) = 0`,
    /// `p, q > 0`.
    pub fn new(su3: SU3Structure<S>, eta: Form<S>, theta: Form<S>, p: S, q: S, r: S) -> Result<Self> {
        let d = Spin7Data { su3, eta, theta, p, q, r };
        d.validate()?;
        Ok(d)
    }

    /// Data with the given horizontal parts of `η` and `θ`.
    pub fn from_horizontal(su3: SU3Structure<S>, eta_h: &Form<S>, theta_h: &Form<S>, p: S, q: S, r: S) -> Result<Self> {
        let eta = &lift(eta_h) + &Form::e(8, &[7]);
        let theta = &lift(theta_h) + &Form::e(8, &[8]);
        Self::new(su3, eta, theta, p, q, r)
    }

    pub fn standard() -> Self {
        Self::from_horizontal(crate::su3::standard(), &Form::zero(6, 1), &Form::zero(6, 1), S::one(), S::one(), S::zero())
            .expect("standard data is valid")
    }

    pub fn validate(&self) -> Result<()> {
        if self.eta.dim() != 8 || self.eta.degree() != 1 || self.theta.dim() != 8 || self.theta.degree() != 1 {
            return Err(Error::DimensionMismatch("η and θ must be 1-forms on R^8".into()));
        }
        let c = |f: &Form<S>, i: usize| f.coeffs()[i - 1].clone();
        let tol = tol_for::<S>(1.0);
        let ok = (c(&self.eta, 7) - S::one()).is_negligible(tol)
            && c(&self.eta, 8).is_negligible(tol)
            && c(&self.theta, 7).is_negligible(tol)
            && (c(&self.theta, 8) - S::one()).is_negligible(tol);
        if !ok {
            return Err(Error::InconsistentVerticalData(format!(
                "η(X) = {:?}, η(Y) = {:?}, θ(X) = {:?}, θ(Y) = {:?}",
                c(&self.eta, 7),
                c(&self.eta, 8),
                c(&self.theta, 7),
                c(&self.theta, 8)
            )));
        }
        if !self.p.is_positive() || !self.q.is_positive() {
            return Err(Error::NonPositivePQ(format!("p = {:?}, q = {:?}", self.p, self.q)));
        }
        Ok(())
    }

    pub fn eta_h(&self) -> Form<S> {
        self.eta.truncate(6)
    }

    pub fn theta_h(&self) -> Form<S> {
        self.theta.truncate(6)
    }

    /// The substitution `η ↦ εη, θ ↦ εθ`. The result no longer satisfies the
    /// vertical normalization and is meant for [`assemble_phi`] only.
    pub fn scaled_vertical(&self, eps: &S) -> Self {
        Spin7Data { eta: self.eta.scale(eps), theta: self.theta.scale(eps), ..self.clone() }
    }

    pub fn orientation(&self) -> Orientation {
        self.su3.orientation
    }
}

pub fn assemble_phi<S: Scalar>(d: &Spin7Data<S>) -> Form<S> {
    let w = lift(&d.su3.omega);
    let re = lift(&d.su3.re_omega);
    let im = lift(&d.su3.im_omega);
    let half_pq = d.p.clone() * d.q.clone() * S::ratio(1, 2);
    let t1 = d.eta.wedge(&d.theta).wedge(&w);
    let t2 = d.eta.wedge(&re.scale(&d.p));
    let t3 = d.theta.wedge(&(&re.scale(&d.r) + &im.scale(&d.q)));
    let t4 = w.wedge(&w).scale(&half_pq);
    &(&(&t1 + &t2) - &t3) + &t4
}

/// Coefficients `(a, b, c)` of the vertical block `a η² + b θ² + 2c η⊙θ`
/// and the horizontal conformal factor `(pq)^{1/2}`.
///
/// Needs `√p` and `√q`; on the exact backend they must be rational.
pub fn metric_coefficients<S: Scalar>(d: &Spin7Data<S>) -> Result<(S, S, S, S)> {
    vertical_coefficients(&d.p, &d.q, &d.r)
}

/// [`metric_coefficients`] from the three functions alone.
pub fn vertical_coefficients<S: Scalar>(p: &S, q: &S, r: &S) -> Result<(S, S, S, S)> {
    let sq = |x: &S, name: &str| x.sqrt().ok_or_else(|| Error::NotPerfectSquare(format!("{name} = {:?}", x)));
    let ps = sq(p, "p")?;
    let qs = sq(q, "q")?;
    let a = ps.clone() / (q.clone() * qs.clone());
    let b = r.clone() * r.clone() / (p.clone() * q.clone() * ps.clone() * qs.clone()) + qs.clone() / (p.clone() * ps.clone());
    let c = -(r.clone() / (ps.clone() * q.clone() * qs.clone()));
    Ok((a, b, c, ps * qs))
}

/// The metric induced by `Φ`:
/// `p^{1/2}q^{−3/2}η² + (r²(pq)^{−3/2} + q^{1/2}p^{−3/2})θ² − 2r p^{−1/2}q^{−3/2} η⊙θ + (pq)^{1/2}g`.
pub fn induced_metric<S: Scalar>(d: &Spin7Data<S>) -> Result<Metric<S>> {
    let (a, b, c, h) = metric_coefficients(d)?;
    let g6 = d.su3.metric.matrix();
    let (eta, theta) = (d.eta.coeffs(), d.theta.coeffs());
    let g = Matrix::from_fn(8, 8, |i, j| {
        let mut v = a.clone() * eta[i].clone() * eta[j].clone()
            + b.clone() * theta[i].clone() * theta[j].clone()
            + c.clone() * (eta[i].clone() * theta[j].clone() + theta[i].clone() * eta[j].clone());
        if i < 6 && j < 6 {
            v = v + h.clone() * g6[(i, j)].clone();
        }
        v
    });
    let m = Metric::new(g).map_err(|_| Error::IndefiniteMetric)?;
    if !m.is_positive_definite() {
        return Err(Error::IndefiniteMetric);
    }
    Ok(m)
}

/// Hodge star of the induced metric with the orientation of `Φ∧Φ`.
pub fn induced_hodge<S: Scalar>(d: &Spin7Data<S>) -> Result<Hodge<S>> {
    Hodge::new(&induced_metric(d)?, d.orientation())
}

/// An orthonormal-type frame `(λ, μ, ω', ReΩ')` in which
/// `Φ = λ∧μ∧ω' + λ∧ReΩ' − μ∧ImΩ' + ½ω'²`.
#[derive(Clone, Debug)]
pub struct Frame<S> {
    pub lambda: Form<S>,
    pub mu: Form<S>,
    pub omega: Form<S>,
    pub re_omega: Form<S>,
    pub im_omega: Form<S>,
}

impl<S: Scalar> Frame<S> {
    pub fn phi(&self) -> Form<S> {
        let t1 = self.lambda.wedge(&self.mu).wedge(&self.omega);
        let t2 = self.lambda.wedge(&self.re_omega);
        let t3 = self.mu.wedge(&self.im_omega);
        let t4 = self.omega.wedge(&self.omega).scale(&S::ratio(1, 2));
        &(&(&t1 + &t2) - &t3) + &t4
    }

    /// `λ² + μ² + g_{ω',Ω'}` as an 8×8 matrix, with the horizontal metric
    /// supplied by the caller.
    pub fn metric(&self, g_h: &Matrix<S>) -> Matrix<S> {
        let (l, m) = (self.lambda.coeffs(), self.mu.coeffs());
        Matrix::from_fn(8, 8, |i, j| {
            let v = l[i].clone() * l[j].clone() + m[i].clone() * m[j].clone();
            if i < 6 && j < 6 {
                v + g_h[(i, j)].clone()
            } else {
                v
            }
        })
    }

    /// Rotation by `(c, s)` with `c² + s² = 1`: `λ ↦ cλ − sμ`, `μ ↦ sλ + cμ`
    /// and `Ω ↦ (c − is)Ω`, which preserves [`Frame::phi`].
    pub fn rotated(&self, c: &S, s: &S) -> Self {
        Frame {
            lambda: &self.lambda.scale(c) - &self.mu.scale(s),
            mu: &self.lambda.scale(s) + &self.mu.scale(c),
            omega: self.omega.clone(),
            re_omega: &self.re_omega.scale(c) + &self.im_omega.scale(s),
            im_omega: &self.im_omega.scale(c) - &self.re_omega.scale(s),
        }
    }
}

/// The frame from the proof of the normal form:
/// `λ = gη − lθ`, `μ = fθ` with `f = q^{1/4}p^{−3/4}`, `g = p^{1/4}q^{−3/4}`,
/// `l = r(pq)^{−3/4}`, and `ω' = (pq)^{1/2}ω`, `Ω' = (pq)^{3/4}Ω`.
///
/// Needs fourth roots of `p` and `q`.
pub fn frame<S: Scalar>(d: &Spin7Data<S>) -> Result<(Frame<S>, Matrix<S>)> {
    let root4 = |x: &S, name: &str| {
        x.sqrt()
            .and_then(|y| y.sqrt())
            .ok_or_else(|| Error::NotPerfectSquare(format!("fourth root of {name} = {:?}", x)))
    };
    let p4 = root4(&d.p, "p")?;
    let q4 = root4(&d.q, "q")?;
    let pq4 = p4.clone() * q4.clone();
    let pq4_3 = pq4.clone() * pq4.clone() * pq4.clone();
    let f = q4.clone() / (p4.clone() * p4.clone() * p4.clone());
    let g = p4.clone() / (q4.clone() * q4.clone() * q4.clone());
    let l = d.r.clone() / pq4_3.clone();
    let h = pq4.clone() * pq4.clone();
    let fr = Frame {
        lambda: &d.eta.scale(&g) - &d.theta.scale(&l),
        mu: d.theta.scale(&f),
        omega: lift(&d.su3.omega).scale(&h),
        re_omega: lift(&d.su3.re_omega).scale(&pq4_3),
        im_omega: lift(&d.su3.im_omega).scale(&pq4_3),
    };
    Ok((fr, d.su3.metric.matrix().scale(&h)))
}

/// Recovers `(ω, ReΩ, η, θ, p, q, r)` from `Φ` and the two circle
/// generators.
///
/// `X` and `Y` must span `⟨e₇, e₈⟩`. The returned data is expressed in the
/// basis in which `X` and `Y` become `e₇` and `e₈`.
pub fn recover_data<S: Scalar>(phi: &Form<S>, x: &[S], y: &[S]) -> Result<Spin7Data<S>> {
    let bad = |m: &str| Error::NotInvariantShape(m.to_string());
    if phi.dim() != 8 || phi.degree() != 4 || x.len() != 8 || y.len() != 8 {
        return Err(Error::DimensionMismatch("recover_data expects a 4-form and two vectors on R^8".into()));
    }
    if x[..6].iter().chain(&y[..6]).any(|c| !c.is_zero()) {
        return Err(bad("circle generators must lie in the span of e7, e8"));
    }
    let m = Matrix::from_rows(vec![vec![x[6].clone(), y[6].clone()], vec![x[7].clone(), y[7].clone()]]);
    if m.det().is_zero() {
        return Err(bad("circle generators are linearly dependent"));
    }
    let t = Matrix::from_fn(8, 8, |i, j| match (i < 6, j < 6) {
        (true, true) => {
            if i == j {
                S::one()
            } else {
                S::zero()
            }
        }
        (false, false) => m[(i - 6, j - 6)].clone(),
        _ => S::zero(),
    });
    let phi = phi.pullback_unchecked(&t);
    let tol = tol_for::<S>(phi.max_abs());

    let b = phi.contract(7);
    let c = phi.contract(8);
    let omega8 = b.contract(8);
    let omega = omega8.truncate(6);
    if !(&lift(&omega) - &omega8).is_negligible(tol) {
        return Err(bad("Y⌟X⌟Φ is not horizontal"));
    }
    // B = θ∧ω + pReΩ with θ = e⁸ + θ_h, so the horizontal part of B is
    // θ_h∧ω + pReΩ and the e⁸ part is ω.
    let bh = b.truncate(6);
    if !(&b - &(&lift(&bh) + &Form::e(8, &[8]).wedge(&omega8))).is_negligible(tol) {
        return Err(bad("X⌟Φ has the wrong vertical part"));
    }
    let w2 = omega.wedge(&omega);
    let theta_h = solve_wedge(&bh.wedge(&omega), &w2, 1, tol).ok_or_else(|| bad("cannot split θ_h∧ω from X⌟Φ"))?;
    let psi1 = &bh - &theta_h.wedge(&omega);
    // C = −η∧ω − (rReΩ + qImΩ) with η = e⁷ + η_h.
    let ch = c.truncate(6);
    if !(&c - &(&lift(&ch) - &Form::e(8, &[7]).wedge(&omega8))).is_negligible(tol) {
        return Err(bad("Y⌟Φ has the wrong vertical part"));
    }
    let eta_h = -solve_wedge(&ch.wedge(&omega), &w2, 1, tol).ok_or_else(|| bad("cannot split η_h∧ω from Y⌟Φ"))?;
    let psi2 = -(&ch - &(-&eta_h).wedge(&omega));

    let w3 = top(&w2.wedge(&omega));
    if w3.is_negligible(tol) {
        return Err(Error::Degenerate);
    }
    if !w3.is_positive() {
        // Φ∧Φ = (pq)²ω³∧…, so this is the orientation of Φ itself.
        return Err(bad("Φ induces the opposite orientation of R^8"));
    }
    let dual = hitchin_dual(&psi1, Orientation::Positive)?;
    // ψ₁∧ψ̂₁ = p²ReΩ∧ImΩ = (2/3)p²ω³.
    let p2 = top(&psi1.wedge(&dual.psi_hat)) * S::ratio(3, 2) / w3;
    if !p2.is_positive() {
        return Err(Error::NonPositivePQ(format!("p² = {:?}", p2)));
    }
    let p = p2.sqrt().ok_or_else(|| Error::NotPerfectSquare(format!("p² = {:?}", p2)))?;
    let re = psi1.scale(&(S::one() / p.clone()));
    let su3 = make_su3(&omega, &re).map_err(|e| match e {
        Error::Incompatible => bad("primitive part of X⌟Φ is not compatible with ω"),
        other => other,
    })?;
    let c = express_in(&psi2, &[su3.re_omega.clone(), su3.im_omega.clone()], tol)
        .ok_or_else(|| bad("primitive part of Y⌟Φ is not in the span of ReΩ, ImΩ"))?;
    let (r, q) = (c[0].clone(), c[1].clone());
    if !q.is_positive() {
        return Err(Error::NonPositivePQ(format!("q = {:?}", q)));
    }
    let d = Spin7Data::from_horizontal(su3, &eta_h, &theta_h, p, q, r)?;
    if !(&assemble_phi(&d) - &phi).is_negligible(tol) {
        return Err(bad("½pq ω² term does not match"));
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use crate::scalar::{q, Q};
    use crate::su3::{im_omega0, omega0, re_omega0, standard};

    fn phi0() -> Form<Q> {
        let w = lift(&omega0::<Q>());
        let e7 = Form::e(8, &[7]);
        let e8 = Form::e(8, &[8]);
        &(&(&e7.wedge(&e8).wedge(&w) + &e7.wedge(&lift(&re_omega0()))) - &e8.wedge(&lift(&im_omega0())))
            + &w.wedge(&w).scale(&q(1, 2))
    }

    fn basis_vec(i: usize) -> Vec<Q> {
        (1..=8).map(|j| if i == j { q(1, 1) } else { q(0, 1) }).collect()
    }

    pub(crate) fn random_data(rng: &mut random::TestRng) -> Spin7Data<Q> {
        random::spin7_data(rng)
    }

    #[test]
    fn standard_data_gives_cayley_form() {
        assert_eq!(assemble_phi(&Spin7Data::<Q>::standard()), phi0());
        let m = induced_metric(&Spin7Data::<Q>::standard()).unwrap();
        assert_eq!(m.matrix(), &Matrix::identity(8));
    }

    #[test]
    fn epsilon_substitution_scales_terms() {
        let d = Spin7Data::<Q>::standard();
        let phi = assemble_phi(&d.scaled_vertical(&q(1, 2)));
        assert_eq!(phi.get(&[1, 2, 7, 8]), q(1, 4));
        // e⁷∧e¹³⁵ = −e¹³⁵⁷.
        assert_eq!(phi.get(&[1, 3, 5, 7]), q(-1, 2));
        assert_eq!(phi.get(&[1, 2, 3, 4]), q(1, 1));
    }

    #[test]
    fn metric_example_block() {
        let d = Spin7Data::<Q>::from_horizontal(standard(), &Form::zero(6, 1), &Form::zero(6, 1), q(1, 1), q(4, 1), q(0, 1))
            .unwrap();
        let g = induced_metric(&d).unwrap();
        assert_eq!(g.matrix()[(6, 6)], q(1, 8));
        assert_eq!(g.matrix()[(7, 7)], q(2, 1));
        assert_eq!(g.matrix()[(0, 0)], q(2, 1));
        assert_eq!(g.matrix()[(6, 7)], q(0, 1));
    }

    #[test]
    fn cayley_normalization_and_self_duality() {
        let phi = phi0();
        assert_eq!(top(&phi.wedge(&phi)), q(14, 1));
        let mut rng = random::rng(11);
        for _ in 0..4 {
            let d = random_data(&mut rng);
            let phi = assemble_phi(&d);
            let h = induced_hodge(&d).unwrap();
            assert_eq!(top(&phi.wedge(&phi)), h.vol_coeff().clone() * q(14, 1));
            assert_eq!(h.star(&phi), phi);
        }
    }

    #[test]
    fn metric_matches_frame() {
        let mut rng = random::rng(12);
        for _ in 0..10 {
            let d = random_data(&mut rng);
            let (fr, gh) = frame(&d).unwrap();
            assert_eq!(fr.phi(), assemble_phi(&d));
            assert_eq!(&fr.metric(&gh), induced_metric(&d).unwrap().matrix());
            // The horizontal metric of the rescaled structure agrees with the
            // conformal factor computed independently from (ω', ReΩ').
            let s = make_su3(&fr.omega.truncate(6), &fr.re_omega.truncate(6)).unwrap();
            assert_eq!(s.metric.matrix(), &gh);
        }
    }

    #[test]
    fn frame_rotation_preserves_phi() {
        let mut rng = random::rng(13);
        let d = random_data(&mut rng);
        let (fr, _) = frame(&d).unwrap();
        let rot = fr.rotated(&q(3, 5), &q(4, 5));
        assert_eq!(rot.phi(), fr.phi());
        // The opposite phase on Ω is not a symmetry.
        let (c, s) = (q(3, 5), q(4, 5));
        let wrong = Frame {
            re_omega: &fr.re_omega.scale(&c) - &fr.im_omega.scale(&s),
            im_omega: &fr.im_omega.scale(&c) + &fr.re_omega.scale(&s),
            ..rot
        };
        assert_ne!(wrong.phi(), fr.phi());
    }

    #[test]
    fn recover_standard() {
        let d = recover_data(&phi0(), &basis_vec(7), &basis_vec(8)).unwrap();
        assert_eq!((d.p.clone(), d.q.clone(), d.r.clone()), (q(1, 1), q(1, 1), q(0, 1)));
        assert_eq!(d.su3.omega, omega0());
        assert_eq!(d.su3.re_omega, re_omega0());
        assert_eq!(d.eta, Form::e(8, &[7]));
        assert_eq!(d.theta, Form::e(8, &[8]));
    }

    #[test]
    fn recover_round_trip() {
        let mut rng = random::rng(14);
        for _ in 0..25 {
            let d = random_data(&mut rng);
            let r = recover_data(&assemble_phi(&d), &basis_vec(7), &basis_vec(8)).unwrap();
            assert_eq!(r.su3.omega, d.su3.omega);
            assert_eq!(r.su3.re_omega, d.su3.re_omega);
            assert_eq!((r.eta, r.theta), (d.eta, d.theta));
            assert_eq!((r.p, r.q, r.r), (d.p, d.q, d.r));
        }
    }

    #[test]
    fn recover_with_swapped_generators_fails() {
        let r = recover_data(&phi0(), &basis_vec(8), &basis_vec(7));
        assert!(
            matches!(r, Err(Error::NotInvariantShape(_)) | Err(Error::NonPositivePQ(_))),
            "unexpected {:?}",
            r.map(|d| (d.p, d.q, d.r))
        );
    }

    #[test]
    fn invalid_vertical_data_is_rejected() {
        let s = standard::<Q>();
        let r = Spin7Data::new(s.clone(), Form::e(8, &[8]), Form::e(8, &[7]), q(1, 1), q(1, 1), q(0, 1));
        assert!(matches!(r, Err(Error::InconsistentVerticalData(_))));
        let r = Spin7Data::from_horizontal(s, &Form::zero(6, 1), &Form::zero(6, 1), q(-1, 1), q(1, 1), q(0, 1));
        assert!(matches!(r, Err(Error::NonPositivePQ(_))));
    }
}
