//! Pointwise torsion analysis of T²-invariant Spin(7)-structures.
//!
//! A [`JetPoint`] fixes the value of the data at a point together with free
//! formal values of its exterior derivatives. Nothing here enforces `d² = 0`
//! between jets; the residuals are pure algebra.

use crate::exterior::Form;
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::su3::{SU3Structure, TorsionClasses};

use super::formal::Formal;
use super::{assemble_phi, lift, Spin7Data};

#[derive(Clone, Debug)]
pub struct JetPoint<S> {
    pub data: Spin7Data<S>,
    pub d_omega: Form<S>,
    pub d_re: Form<S>,
    pub d_im: Form<S>,
    pub d_eta: Form<S>,
    pub d_theta: Form<S>,
    pub dp: Form<S>,
    pub dq: Form<S>,
    pub dr: Form<S>,
}

impl<S: Scalar> JetPoint<S> {
    /// All derivatives zero.
    pub fn flat(data: Spin7Data<S>) -> Self {
        JetPoint {
            data,
            d_omega: Form::zero(6, 3),
            d_re: Form::zero(6, 4),
            d_im: Form::zero(6, 4),
            d_eta: Form::zero(6, 2),
            d_theta: Form::zero(6, 2),
            dp: Form::zero(6, 1),
            dq: Form::zero(6, 1),
            dr: Form::zero(6, 1),
        }
    }

    /// All jet coefficients in a fixed order.
    pub fn flatten(&self) -> Vec<S> {
        [&self.d_omega, &self.d_re, &self.d_im, &self.d_eta, &self.d_theta, &self.dp, &self.dq, &self.dr]
            .iter()
            .flat_map(|f| f.coeffs().to_vec())
            .collect()
    }

    /// True when every jet has the expected shape.
    pub fn is_well_formed(&self) -> bool {
        let shape = |f: &Form<S>, k: usize| f.dim() == 6 && f.degree() == k;
        shape(&self.d_omega, 3)
            && shape(&self.d_re, 4)
            && shape(&self.d_im, 4)
            && shape(&self.d_eta, 2)
            && shape(&self.d_theta, 2)
            && shape(&self.dp, 1)
            && shape(&self.dq, 1)
            && shape(&self.dr, 1)
    }
}

#[derive(Clone, Debug)]
pub struct TorsionReport<S> {
    /// `dω`.
    pub r_a: Form<S>,
    /// `d(pReΩ) + dθ∧ω`.
    pub r_b: Form<S>,
    /// `d(rReΩ) + d(qImΩ) + dη∧ω`.
    pub r_c: Form<S>,
    /// `dη∧pReΩ − dθ∧(rReΩ + qImΩ) + ½d(pq)∧ω²`.
    pub r_d: Form<S>,
    pub alpha_eta: Form<S>,
    pub alpha_theta: Form<S>,
    /// `q dθ∧ImΩ + ½(½(p dq − 3q dp) + J(r dp − p dr))∧ω²`.
    pub res36: Form<S>,
    /// `(p dη − r dθ)∧ReΩ + q dθ∧ImΩ + (p dq − q dp + J(r dp − p dr))∧ω²`.
    pub res37: Form<S>,
    /// Torsion of the horizontal SU(3)-structure, or the reason it could
    /// not be decomposed.
    pub classes: std::result::Result<TorsionClasses<S>, String>,
}

impl<S: Scalar> TorsionReport<S> {
    /// Named coefficient norms of every residual.
    pub fn norms(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("r_a", self.r_a.coeff_norm()),
            ("r_b", self.r_b.coeff_norm()),
            ("r_c", self.r_c.coeff_norm()),
            ("r_d", self.r_d.coeff_norm()),
            ("alpha_eta", self.alpha_eta.coeff_norm()),
            ("alpha_theta", self.alpha_theta.coeff_norm()),
            ("res36", self.res36.coeff_norm()),
            ("res37", self.res37.coeff_norm()),
        ]
    }

    /// The four components of the structure equations as one vector.
    pub fn system_vector(&self) -> Vec<S> {
        [&self.r_a, &self.r_b, &self.r_c, &self.r_d].iter().flat_map(|f| f.coeffs().to_vec()).collect()
    }

    pub fn system_is_negligible(&self, tol: f64) -> bool {
        [&self.r_a, &self.r_b, &self.r_c, &self.r_d].iter().all(|f| f.is_negligible(tol))
    }
}

fn half<S: Scalar>() -> S {
    S::ratio(1, 2)
}

/// `J(r dp − p dr)`, which recurs in every closed formula.
fn j_rdp_pdr<S: Scalar>(s: &SU3Structure<S>, p: &S, r: &S, dp: &Form<S>, dr: &Form<S>) -> Form<S> {
    s.j_form(&(&dp.scale(r) - &dr.scale(p)))
}

/// `α_θ = (1/2q)(J(r dp − p dr) + ½p dq − (3/2)q dp)`.
pub fn alpha_theta<S: Scalar>(s: &SU3Structure<S>, p: &S, q: &S, r: &S, dp: &Form<S>, dq: &Form<S>, dr: &Form<S>) -> Form<S> {
    let inner = &(&j_rdp_pdr(s, p, r, dp, dr) + &dq.scale(&(p.clone() * half()))) - &dp.scale(&(q.clone() * S::ratio(3, 2)));
    inner.scale(&(S::one() / (q.clone() * S::from_i64(2))))
}

/// `α_η = (1/2pq)(qJ(½q dp − (3/2)p dq) + rJ(r dp − p dr) + ½r(p dq − q dp) − pq dr)`.
///
/// This is the form forced by the structure equations; it satisfies
/// `pα_η = (r − qJ)α_θ − ½J d(pq)`. See [`alpha_eta_stated`] for the variant
/// whose `J`-free part differs.
pub fn alpha_eta<S: Scalar>(s: &SU3Structure<S>, p: &S, q: &S, r: &S, dp: &Form<S>, dq: &Form<S>, dr: &Form<S>) -> Form<S> {
    let j_part = alpha_eta_j_part(s, p, q, r, dp, dq, dr);
    let plain = &(&dq.scale(p) - &dp.scale(q)).scale(&(r.clone() * half())) - &dr.scale(&(p.clone() * q.clone()));
    (&j_part + &plain).scale(&(S::one() / (p.clone() * q.clone() * S::from_i64(2))))
}

/// `α_η = (1/2pq)(q d(pq) + qJ(½q dp − (3/2)p dq) + rJ(r dp − p dr) + p(½r dq − p dr))`,
/// which does not solve the structure equations unless `dp = dq = dr = 0`
/// along the `J`-free directions.
pub fn alpha_eta_stated<S: Scalar>(s: &SU3Structure<S>, p: &S, q: &S, r: &S, dp: &Form<S>, dq: &Form<S>, dr: &Form<S>) -> Form<S> {
    let j_part = alpha_eta_j_part(s, p, q, r, dp, dq, dr);
    let dpq = &dp.scale(q) + &dq.scale(p);
    let plain = &dpq.scale(q) + &(&dq.scale(&(r.clone() * half())) - &dr.scale(p)).scale(p);
    (&j_part + &plain).scale(&(S::one() / (p.clone() * q.clone() * S::from_i64(2))))
}

fn alpha_eta_j_part<S: Scalar>(s: &SU3Structure<S>, p: &S, q: &S, r: &S, dp: &Form<S>, dq: &Form<S>, dr: &Form<S>) -> Form<S> {
    let t2 = s.j_form(&(&dp.scale(&(q.clone() * half())) - &dq.scale(&(p.clone() * S::ratio(3, 2))))).scale(q);
    let t3 = j_rdp_pdr(s, p, r, dp, dr).scale(r);
    &t2 + &t3
}

pub fn torsion_residuals<S: Scalar>(j: &JetPoint<S>) -> TorsionReport<S> {
    let d = &j.data;
    let s = &d.su3;
    let (p, q, r) = (&d.p, &d.q, &d.r);
    let (w, re, im) = (&s.omega, &s.re_omega, &s.im_omega);
    let w2 = w.wedge(w);
    let d_pre = &j.dp.wedge(re) + &j.d_re.scale(p);
    let r_b = &d_pre + &j.d_theta.wedge(w);
    let d_rre = &j.dr.wedge(re) + &j.d_re.scale(r);
    let d_qim = &j.dq.wedge(im) + &j.d_im.scale(q);
    let r_c = &(&d_rre + &d_qim) + &j.d_eta.wedge(w);
    let dpq = &j.dp.scale(q) + &j.dq.scale(p);
    let r_d = &(&j.d_eta.wedge(&re.scale(p)) - &j.d_theta.wedge(&(&re.scale(r) + &im.scale(q))))
        + &dpq.wedge(&w2).scale(&half());
    let jr = j_rdp_pdr(s, p, r, &j.dp, &j.dr);
    let c36 = &(&j.dq.scale(p) - &j.dp.scale(&(q.clone() * S::from_i64(3)))).scale(&half()) + &jr;
    let res36 = &j.d_theta.wedge(im).scale(q) + &c36.wedge(&w2).scale(&half());
    let c37 = &(&j.dq.scale(p) - &j.dp.scale(q)) + &jr;
    let res37 = &(&(&j.d_eta.scale(p) - &j.d_theta.scale(r)).wedge(re) + &j.d_theta.wedge(im).scale(q)) + &c37.wedge(&w2);
    TorsionReport {
        r_a: j.d_omega.clone(),
        r_b,
        r_c,
        r_d,
        alpha_eta: alpha_eta(s, p, q, r, &j.dp, &j.dq, &j.dr),
        alpha_theta: alpha_theta(s, p, q, r, &j.dp, &j.dq, &j.dr),
        res36,
        res37,
        classes: s.torsion_classes(&j.d_omega, &j.d_re, &j.d_im).map_err(|e| e.to_string()),
    }
}

/// `dΦ` computed by the Leibniz rule from the jet.
pub fn formal_dphi<S: Scalar>(j: &JetPoint<S>) -> Form<S> {
    let d = &j.data;
    let s = &d.su3;
    let f = |v: &S, dv: &Form<S>| Formal::function(v.clone(), lift(dv));
    let (p, q, r) = (f(&d.p, &j.dp), f(&d.q, &j.dq), f(&d.r, &j.dr));
    let eta = Formal::new(d.eta.clone(), lift(&j.d_eta));
    let theta = Formal::new(d.theta.clone(), lift(&j.d_theta));
    let w = Formal::new(lift(&s.omega), lift(&j.d_omega));
    let re = Formal::new(lift(&s.re_omega), lift(&j.d_re));
    let im = Formal::new(lift(&s.im_omega), lift(&j.d_im));
    let t1 = eta.wedge(&theta).wedge(&w);
    let t2 = eta.wedge(&p.wedge(&re));
    let t3 = theta.wedge(&(&r.wedge(&re) + &q.wedge(&im)));
    let t4 = p.wedge(&q).wedge(&w).wedge(&w).scale(&half());
    let phi = &(&(&t1 + &t2) - &t3) + &t4;
    if S::EXACT {
        debug_assert_eq!(phi.val, assemble_phi(d));
    }
    phi.d
}

/// `−η∧R_b + θ∧R_c + R_d + η∧θ∧R_a + pq ω∧R_a` assembled from the
/// residuals of a jet.
pub fn residual_combination<S: Scalar>(d: &Spin7Data<S>, rep: &TorsionReport<S>) -> Form<S> {
    let ra = lift(&rep.r_a);
    &(&(&(&d.eta.wedge(&lift(&rep.r_b)).scale(&-S::one()) + &d.theta.wedge(&lift(&rep.r_c))) + &lift(&rep.r_d))
        + &d.eta.wedge(&d.theta).wedge(&ra))
        + &lift(&d.su3.omega).wedge(&ra).scale(&(d.p.clone() * d.q.clone()))
}

/// `dΦ` minus [`residual_combination`], which vanishes for every jet.
pub fn dphi_decomposition_defect<S: Scalar>(j: &JetPoint<S>) -> Form<S> {
    &formal_dphi(j) - &residual_combination(&j.data, &torsion_residuals(j))
}

/// Largest coefficient of [`dphi_decomposition_defect`].
pub fn dphi_decomposition_check<S: Scalar>(j: &JetPoint<S>) -> f64 {
    dphi_decomposition_defect(j).max_abs()
}

/// Jets built from free `(dη)₈, (dθ)₈, dp, dq, dr` with the torsion forced
/// to `w₁ = ŵ₁ = w₃ = w₄ = 0`, `w₂ = −(1/p)(dθ)₈`,
/// `ŵ₂ = (1/pq)(r(dθ)₈ − p(dη)₈)`, `w₅ = (1/2pq)(J(p dr − r dp) − ½d(pq))`,
/// and `dη = J α_η♯⌟ReΩ + (dη)₈`, `dθ = J α_θ♯⌟ReΩ + (dθ)₈`.
pub fn parametrized_jet<S: Scalar>(
    data: &Spin7Data<S>,
    deta8: &Form<S>,
    dtheta8: &Form<S>,
    dp: &Form<S>,
    dq: &Form<S>,
    dr: &Form<S>,
) -> JetPoint<S> {
    let s = &data.su3;
    let (p, q, r) = (&data.p, &data.q, &data.r);
    let pq = p.clone() * q.clone();
    let ae = alpha_eta(s, p, q, r, dp, dq, dr);
    let at = alpha_theta(s, p, q, r, dp, dq, dr);
    let lift6 = |a: &Form<S>| s.re_omega.interior(&s.j_vec(&s.sharp(a)));
    let d_eta = &lift6(&ae) + deta8;
    let d_theta = &lift6(&at) + dtheta8;
    let w2 = dtheta8.scale(&(-S::one() / p.clone()));
    let w2_hat = (&dtheta8.scale(r) - &deta8.scale(p)).scale(&(S::one() / pq.clone()));
    let dpq = &dp.scale(q) + &dq.scale(p);
    let w5 = (&s.j_form(&(&dr.scale(p) - &dp.scale(r))) - &dpq.scale(&half())).scale(&(S::one() / (pq * S::from_i64(2))));
    let c = TorsionClasses {
        w1: S::zero(),
        w1_hat: S::zero(),
        w2,
        w2_hat,
        w3: Form::zero(6, 3),
        w4: Form::zero(6, 1),
        w5,
    };
    let (d_omega, d_re, d_im) = s.reconstruct(&c);
    JetPoint {
        data: data.clone(),
        d_omega,
        d_re,
        d_im,
        d_eta,
        d_theta,
        dp: dp.clone(),
        dq: dq.clone(),
        dr: dr.clone(),
    }
}

/// The linear space of jets whose horizontal SU(3) derivatives come from
/// torsion classes, coordinatized by
/// `(w₁, ŵ₁, w₂, ŵ₂, w₃, w₄, w₅, dη, dθ, dp, dq, dr)`.
pub struct JetSpace<S> {
    pub data: Spin7Data<S>,
    b8: Vec<Form<S>>,
    b12: Vec<Form<S>>,
}

impl<S: Scalar> JetSpace<S> {
    pub const DIM: usize = 2 + 8 + 8 + 12 + 6 + 6 + 15 + 15 + 6 + 6 + 6;

    pub fn new(data: Spin7Data<S>) -> Self {
        let b8 = data.su3.lambda28_basis();
        let b12 = data.su3.lambda312_basis();
        JetSpace { data, b8, b12 }
    }

    pub fn jet(&self, x: &[S]) -> JetPoint<S> {
        assert_eq!(x.len(), Self::DIM);
        let mut it = x.iter().cloned();
        let mut take = |n: usize| -> Vec<S> { (0..n).map(|_| it.next().unwrap()).collect() };
        let comb = |basis: &[Form<S>], c: Vec<S>, k: usize| {
            basis.iter().zip(c).fold(Form::zero(6, k), |acc, (b, x)| &acc + &b.scale(&x))
        };
        let w = take(2);
        let w2 = comb(&self.b8, take(8), 2);
        let w2_hat = comb(&self.b8, take(8), 2);
        let w3 = comb(&self.b12, take(12), 3);
        let w4 = Form::one_form(&take(6));
        let w5 = Form::one_form(&take(6));
        let c = TorsionClasses { w1: w[0].clone(), w1_hat: w[1].clone(), w2, w2_hat, w3, w4, w5 };
        let (d_omega, d_re, d_im) = self.data.su3.reconstruct(&c);
        JetPoint {
            data: self.data.clone(),
            d_omega,
            d_re,
            d_im,
            d_eta: Form::from_coeffs(6, 2, take(15)),
            d_theta: Form::from_coeffs(6, 2, take(15)),
            dp: Form::one_form(&take(6)),
            dq: Form::one_form(&take(6)),
            dr: Form::one_form(&take(6)),
        }
    }

    /// Matrix of a linear functional of the jet in these coordinates.
    pub fn matrix_of(&self, f: impl Fn(&JetPoint<S>) -> Vec<S>) -> Matrix<S> {
        let cols: Vec<Vec<S>> = (0..Self::DIM)
            .map(|i| {
                let x: Vec<S> = (0..Self::DIM).map(|k| if k == i { S::one() } else { S::zero() }).collect();
                f(&self.jet(&x))
            })
            .collect();
        Matrix::from_fn(cols[0].len(), Self::DIM, |i, j| cols[j][i].clone())
    }
}

/// Rank data showing that a residual is a consequence of the structure
/// equations on the space of consistent jets.
#[derive(Clone, Debug, PartialEq)]
pub struct ConsequenceCheck {
    pub rank_system: usize,
    pub rank_with_residual: usize,
    pub kernel_dim: usize,
}

impl ConsequenceCheck {
    pub fn holds(&self) -> bool {
        self.rank_system == self.rank_with_residual
    }
}

/// Checks that `residual` vanishes on every consistent jet solving the
/// structure equations, i.e. that its rows lie in the row space of the
/// system.
pub fn consequence_check<S: Scalar>(space: &JetSpace<S>, residual: impl Fn(&TorsionReport<S>) -> Form<S>, tol: f64) -> ConsequenceCheck {
    let sys = space.matrix_of(|j| torsion_residuals(j).system_vector());
    let res = space.matrix_of(|j| residual(&torsion_residuals(j)).into_coeffs());
    let stacked = Matrix::from_fn(sys.rows() + res.rows(), sys.cols(), |i, j| {
        if i < sys.rows() {
            sys[(i, j)].clone()
        } else {
            res[(i - sys.rows(), j)].clone()
        }
    });
    let rank_system = sys.rank(tol);
    ConsequenceCheck { rank_system, rank_with_residual: stacked.rank(tol), kernel_dim: sys.cols() - rank_system }
}

/// Coefficients `C` with `residual = C · system` as linear functionals on
/// the jet space, or `None` when some row of the residual is not a
/// combination of the system rows.
pub fn consequence_coefficients<S: Scalar>(
    space: &JetSpace<S>,
    residual: impl Fn(&TorsionReport<S>) -> Form<S>,
    tol: f64,
) -> Option<Matrix<S>> {
    let sys = space.matrix_of(|j| torsion_residuals(j).system_vector());
    let res = space.matrix_of(|j| residual(&torsion_residuals(j)).into_coeffs());
    let st = sys.transpose();
    let rows = (0..res.rows()).map(|i| st.solve(res.row(i), tol)).collect::<Option<Vec<_>>>()?;
    Some(Matrix::from_rows(rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use crate::scalar::{q, Q};
    use crate::spin7::tests::random_data;
    use crate::su3::standard;

    fn random_jet(rng: &mut random::TestRng, data: Spin7Data<Q>) -> JetPoint<Q> {
        random::jet(rng, data)
    }

    fn random_b8(rng: &mut random::TestRng, s: &SU3Structure<Q>) -> Form<Q> {
        random::lambda28(rng, s)
    }

    #[test]
    fn zero_jets_give_zero_report() {
        let j = JetPoint::flat(Spin7Data::<Q>::standard());
        let rep = torsion_residuals(&j);
        assert!(rep.norms().iter().all(|(_, n)| *n == 0.0));
        assert_eq!(dphi_decomposition_check(&j), 0.0);
    }

    #[test]
    fn random_jets_have_nonzero_residuals() {
        let mut rng = random::rng(21);
        let data = random_data(&mut rng);
        let j = random_jet(&mut rng, data);
        let rep = torsion_residuals(&j);
        for (name, n) in rep.norms() {
            assert!(n > 0.0, "{name} vanished on a generic jet");
        }
    }

    #[test]
    fn dphi_decomposes_on_all_jets() {
        let mut rng = random::rng(22);
        for i in 0..6 {
            let data = random_data(&mut rng);
        let mut j = random_jet(&mut rng, data);
            if i % 2 == 0 {
                j.d_omega = Form::zero(6, 3);
            }
            assert!(dphi_decomposition_defect(&j).is_zero());
        }
    }

    #[test]
    fn parametrized_jets_solve_the_system() {
        let mut rng = random::rng(23);
        for _ in 0..5 {
            let d = random_data(&mut rng);
            let deta8 = random_b8(&mut rng, &d.su3);
            let dtheta8 = random_b8(&mut rng, &d.su3);
            let dp = random::form(&mut rng, 6, 1, 3);
            let dq = random::form(&mut rng, 6, 1, 3);
            let dr = random::form(&mut rng, 6, 1, 3);
            let j = parametrized_jet(&d, &deta8, &dtheta8, &dp, &dq, &dr);
            let rep = torsion_residuals(&j);
            assert!(rep.system_is_negligible(0.0), "{:?}", rep.norms());
            assert!(rep.res36.is_zero() && rep.res37.is_zero());
        }
    }

    #[test]
    fn alpha_eta_satisfies_both_regroupings() {
        let mut rng = random::rng(26);
        for _ in 0..5 {
            let d = random_data(&mut rng);
            let s = &d.su3;
            let (p, q, r) = (&d.p, &d.q, &d.r);
            let dp = random::form(&mut rng, 6, 1, 3);
            let dq = random::form(&mut rng, 6, 1, 3);
            let dr = random::form(&mut rng, 6, 1, 3);
            let ae = alpha_eta(s, p, q, r, &dp, &dq, &dr).scale(p);
            let at = alpha_theta(s, p, q, r, &dp, &dq, &dr);
            let dpq = &dp.scale(q) + &dq.scale(p);
            let minus = &(&at.scale(r) - &s.j_form(&at).scale(q)) - &s.j_form(&dpq).scale(&half());
            assert_eq!(ae, minus);
            let plus = &(&(&at.scale(r) + &s.j_form(&at).scale(q)) + &s.j_form(&(&dp.scale(q) - &dq.scale(p))))
                + &(&dp.scale(r) - &dr.scale(p));
            assert_eq!(ae, plus);
            assert_ne!(alpha_eta_stated(s, p, q, r, &dp, &dq, &dr).scale(p), minus);
        }
    }

    #[test]
    fn stated_alpha_eta_breaks_the_system() {
        let d = Spin7Data::from_horizontal(standard(), &Form::zero(6, 1), &Form::zero(6, 1), q(1, 1), q(16, 1), q(0, 1)).unwrap();
        let s = &d.su3;
        let dr = Form::e(6, &[1]);
        let z = Form::zero(6, 1);
        let mut j = parametrized_jet(&d, &Form::zero(6, 2), &Form::zero(6, 2), &z, &z, &dr);
        let stated = alpha_eta_stated(s, &d.p, &d.q, &d.r, &z, &z, &dr);
        j.d_eta = s.re_omega.interior(&s.j_vec(&s.sharp(&stated)));
        assert!(!torsion_residuals(&j).r_c.is_zero());
    }

    #[test]
    fn solutions_are_exactly_the_parametrized_family() {
        // Exact ranks over a dense random structure are slow, so use a
        // sparse pullback of the standard structure with generic p, q, r.
        let mut a = Matrix::<Q>::identity(6);
        a[(0, 0)] = q(2, 1);
        a[(0, 3)] = q(1, 1);
        a[(4, 1)] = q(-1, 1);
        let su3 = crate::su3::pullback_su3(&a, &standard()).unwrap();
        let eta_h = Form::one_form(&[q(1, 1), q(0, 1), q(2, 1), q(0, 1), q(0, 1), q(-1, 1)]);
        let data = Spin7Data::from_horizontal(su3, &eta_h, &Form::zero(6, 1), q(4, 1), q(9, 1), q(5, 3)).unwrap();
        let space = JetSpace::new(data);
        let c36 = consequence_check(&space, |r| r.res36.clone(), 0.0);
        assert!(c36.holds(), "{c36:?}");
        let c37 = consequence_check(&space, |r| r.res37.clone(), 0.0);
        assert!(c37.holds(), "{c37:?}");
        // Free data of the parametrization: (dη)₈, (dθ)₈ and dp, dq, dr.
        assert_eq!(c36.kernel_dim, 8 + 8 + 18);
        // The parametrized family is 34-dimensional and solves the system, so it is
        // the whole solution space.
        let d = &space.data;
        let b8 = d.su3.lambda28_basis();
        let z2 = Form::zero(6, 2);
        let z1 = Form::zero(6, 1);
        let mut jets = Vec::new();
        for b in &b8 {
            jets.push(parametrized_jet(d, b, &z2, &z1, &z1, &z1));
            jets.push(parametrized_jet(d, &z2, b, &z1, &z1, &z1));
        }
        for i in 1..=6 {
            let e = Form::e(6, &[i]);
            jets.push(parametrized_jet(d, &z2, &z2, &e, &z1, &z1));
            jets.push(parametrized_jet(d, &z2, &z2, &z1, &e, &z1));
            jets.push(parametrized_jet(d, &z2, &z2, &z1, &z1, &e));
        }
        assert!(jets.iter().all(|j| torsion_residuals(j).system_is_negligible(0.0)));
        let rows: Vec<Vec<Q>> = jets.iter().map(|j| j.flatten()).collect();
        assert_eq!(Matrix::from_rows(rows).rank(0.0), 34);
    }

    #[test]
    fn corollary_residual_is_not_implied_off_shell() {
        // Dropping the structure equations, (3.6)-type residuals are generic.
        let mut rng = random::rng(25);
        let d_theta = random::form(&mut rng, 6, 2, 3);
        let j = JetPoint { d_theta, ..JetPoint::flat(random_data(&mut rng)) };
        assert!(!torsion_residuals(&j).res36.is_zero());
    }
}

