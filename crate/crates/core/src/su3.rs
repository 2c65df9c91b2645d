//! SU(3)-structures on R⁶: construction from `(ω, ReΩ)`, Hitchin duality,
//! type decompositions and intrinsic torsion.
//!
//! Conventions: `ω₀ = e¹²+e³⁴+e⁵⁶` and `Ω₀ = (e¹+ie²)∧(e³+ie⁴)∧(e⁵+ie⁶)`.
//! The complex structure acts on vectors with `J e₁ = e₂` and on forms by
//! pullback, `(Jα)(v, ...) = α(Jv, ...)`, so `J e¹ = −e²`.

use crate::error::{Error, Result};
use crate::exterior::{express_in, solve_wedge, top, Form, Hodge, Metric, Orientation};
use crate::linalg::Matrix;
use crate::scalar::{Scalar, Q};

/// Relative tolerance used by float-backend checks in this module.
pub const FLOAT_TOL: f64 = 1e-10;

pub fn omega0<S: Scalar>() -> Form<S> {
    let one = S::one();
    Form::from_terms(6, 2, &[(&[1, 2], one.clone()), (&[3, 4], one.clone()), (&[5, 6], one)])
}

pub fn re_omega0<S: Scalar>() -> Form<S> {
    let one = S::one();
    Form::from_terms(
        6,
        3,
        &[(&[1, 3, 5], one.clone()), (&[1, 4, 6], -one.clone()), (&[2, 3, 6], -one.clone()), (&[2, 4, 5], -one)],
    )
}

pub fn im_omega0<S: Scalar>() -> Form<S> {
    let one = S::one();
    Form::from_terms(
        6,
        3,
        &[(&[2, 3, 5], one.clone()), (&[1, 4, 5], one.clone()), (&[1, 3, 6], one.clone()), (&[2, 4, 6], -one)],
    )
}

fn tol_for<S: Scalar>(scale: f64) -> f64 {
    if S::EXACT {
        0.0
    } else {
        FLOAT_TOL * scale.max(1.0)
    }
}

/// The endomorphism `K_ψ`, defined by `(v⌟ψ)∧ψ = K_ψ(v) ⌟ vol_o`.
pub fn hitchin_k<S: Scalar>(psi: &Form<S>, o: Orientation) -> Matrix<S> {
    assert!(psi.dim() == 6 && psi.degree() == 3, "hitchin_k expects a 3-form on R^6");
    let sign = S::from_i64(o.sign());
    let mut k = Matrix::zeros(6, 6);
    for a in 0..6 {
        let beta = psi.contract(a + 1).wedge(psi);
        for i in 0..6 {
            let rest: Vec<usize> = (1..=6).filter(|&t| t != i + 1).collect();
            let c = beta.get(&rest) * sign.clone();
            k[(i, a)] = if i % 2 == 1 { -c } else { c };
        }
    }
    k
}

/// `λ(ψ) = tr(K_ψ²)/6`; negative exactly on stable forms.
pub fn hitchin_lambda<S: Scalar>(psi: &Form<S>) -> S {
    let k = hitchin_k(psi, Orientation::Positive);
    k.mul(&k).trace() / S::from_i64(6)
}

#[derive(Clone, Debug, PartialEq)]
pub struct HitchinDual<S> {
    /// Complex structure on vectors.
    pub j: Matrix<S>,
    pub psi_hat: Form<S>,
    pub lambda: S,
}

/// `J_ψ` and `ψ̂` for a stable 3-form on R⁶.
///
/// On the exact backend this needs `−λ` to be a rational square and returns
/// [`Error::NotPerfectSquare`] otherwise; see [`hitchin_dual_q`] for the
/// variant that falls back to floats.
pub fn hitchin_dual<S: Scalar>(psi: &Form<S>, o: Orientation) -> Result<HitchinDual<S>> {
    if psi.dim() != 6 || psi.degree() != 3 {
        return Err(Error::DimensionMismatch("hitchin_dual expects a 3-form on R^6".into()));
    }
    let k = hitchin_k(psi, o);
    let lambda = k.mul(&k).trace() / S::from_i64(6);
    let norm2 = psi.coeff_norm().powi(2);
    if S::EXACT {
        if !(-lambda.clone()).is_positive() {
            return Err(Error::NotStable(format!("lambda = {:?}", lambda)));
        }
    } else {
        // λ is quartic in ψ, so the cutoff scales with the fourth power.
        let l = lambda.to_f64();
        if l >= 0.0 || l.abs() < 1e-12 * norm2 * norm2 {
            return Err(Error::NotStable(format!("lambda = {l:e}")));
        }
    }
    let root = (-lambda.clone()).sqrt().ok_or_else(|| Error::NotPerfectSquare(format!("-lambda = {:?}", -lambda.clone())))?;
    let j = k.scale(&(-S::one() / root));
    let mut hat = Form::zero(6, 3);
    for a in 0..6 {
        let jea = j.col(a);
        let t = Form::e(6, &[a + 1]).wedge(&psi.interior(&jea));
        hat = &hat + &t;
    }
    let psi_hat = hat.scale(&S::ratio(-1, 3));
    Ok(HitchinDual { j, psi_hat, lambda })
}

/// Hitchin dual of a rational 3-form: exact when `−λ` is a rational square,
/// float otherwise.
#[derive(Clone, Debug, PartialEq)]
pub enum Dualized {
    Exact(HitchinDual<Q>),
    Float(HitchinDual<f64>),
}

pub fn hitchin_dual_q(psi: &Form<Q>, o: Orientation) -> Result<Dualized> {
    match hitchin_dual(psi, o) {
        Ok(d) => Ok(Dualized::Exact(d)),
        Err(Error::NotPerfectSquare(_)) => Ok(Dualized::Float(hitchin_dual(&psi.to_f64(), o)?)),
        Err(e) => Err(e),
    }
}

/// An SU(3)-structure with all derived tensors.
///
/// Fields are public for inspection; only [`make_su3`] guarantees they are
/// mutually consistent.
#[derive(Clone, Debug)]
pub struct SU3Structure<S> {
    pub omega: Form<S>,
    pub re_omega: Form<S>,
    pub im_omega: Form<S>,
    /// Complex structure on vectors.
    pub j: Matrix<S>,
    pub metric: Metric<S>,
    pub vol: Form<S>,
    pub orientation: Orientation,
    pub lambda: S,
    hodge: Hodge<S>,
}

/// Builds the structure determined by `(ω, ReΩ)` without rescaling.
pub fn make_su3<S: Scalar>(omega: &Form<S>, re_omega: &Form<S>) -> Result<SU3Structure<S>> {
    if omega.dim() != 6 || omega.degree() != 2 || re_omega.dim() != 6 || re_omega.degree() != 3 {
        return Err(Error::DimensionMismatch("make_su3 expects a 2-form and a 3-form on R^6".into()));
    }
    let w3 = top(&omega.wedge(omega).wedge(omega));
    let scale = omega.max_abs().powi(3);
    if w3.is_negligible(tol_for::<S>(scale) * 1e-2) {
        return Err(Error::Degenerate);
    }
    let orientation = if w3.is_positive() { Orientation::Positive } else { Orientation::Negative };
    let dual = hitchin_dual(re_omega, orientation)?;
    if !omega.wedge(re_omega).is_negligible(tol_for::<S>(omega.max_abs() * re_omega.max_abs())) {
        return Err(Error::Incompatible);
    }
    let w = Matrix::from_fn(6, 6, |a, c| if a == c { S::zero() } else { omega.get(&[a + 1, c + 1]) });
    let g = w.mul(&dual.j);
    if !g.is_symmetric(tol_for::<S>(g.max_abs())) {
        return Err(Error::IndefiniteMetric);
    }
    let g = Matrix::from_fn(6, 6, |a, b| (g[(a, b)].clone() + g[(b, a)].clone()) / S::from_i64(2));
    let metric = Metric::new(g).map_err(|_| Error::IndefiniteMetric)?;
    if !metric.is_positive_definite() {
        return Err(Error::IndefiniteMetric);
    }
    let ginv = metric.inverse()?;
    let vol_c = w3 / S::from_i64(6);
    let hodge = Hodge::from_parts(&ginv, vol_c.clone());
    Ok(SU3Structure {
        omega: omega.clone(),
        re_omega: re_omega.clone(),
        im_omega: dual.psi_hat,
        j: dual.j,
        metric,
        vol: Form::from_coeffs(6, 6, vec![vol_c]),
        orientation,
        lambda: dual.lambda,
        hodge,
    })
}

/// Like [`make_su3`], but first rescales `ReΩ` so that the Monge–Ampère
/// normalization holds.
pub fn make_su3_normalized<S: Scalar>(omega: &Form<S>, re_omega: &Form<S>) -> Result<SU3Structure<S>> {
    let s = make_su3(omega, re_omega)?;
    let lhs = top(&omega.wedge(omega).wedge(omega)) * S::ratio(2, 3);
    let rhs = top(&s.re_omega.wedge(&s.im_omega));
    let c2 = lhs / rhs;
    let c = c2.sqrt().ok_or_else(|| Error::NotPerfectSquare(format!("rescaling factor squared = {:?}", c2)))?;
    make_su3(omega, &re_omega.scale(&c))
}

pub fn standard<S: Scalar>() -> SU3Structure<S> {
    make_su3(&omega0(), &re_omega0()).expect("standard structure is valid")
}

/// Pulls a structure back by a linear map; `A` must be invertible.
pub fn pullback_su3<S: Scalar>(a: &Matrix<S>, s: &SU3Structure<S>) -> Result<SU3Structure<S>> {
    make_su3(&crate::exterior::pullback(a, &s.omega)?, &crate::exterior::pullback(a, &s.re_omega)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TypeSplit2<S> {
    pub b1: Form<S>,
    pub b6: Form<S>,
    pub b8: Form<S>,
    /// `b1 = c1·ω`.
    pub c1: S,
    /// `b6 = x6 ⌟ ReΩ`.
    pub x6: Vec<S>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TypeSplit3<S> {
    pub g6: Form<S>,
    pub g11: Form<S>,
    pub g12: Form<S>,
    /// `g6 = xi6 ∧ ω`.
    pub xi6: Form<S>,
    /// `g11 = a·ReΩ + b·ImΩ`.
    pub a: S,
    pub b: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TorsionClasses<S> {
    pub w1: S,
    pub w1_hat: S,
    pub w2: Form<S>,
    pub w2_hat: Form<S>,
    pub w3: Form<S>,
    pub w4: Form<S>,
    pub w5: Form<S>,
}

/// Which defining form a debugging fault flips.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Mutation {
    Omega,
    ReOmega,
    ImOmega,
}

impl<S: Scalar> SU3Structure<S> {
    pub fn hodge(&self) -> &Hodge<S> {
        &self.hodge
    }

    pub fn star(&self, a: &Form<S>) -> Form<S> {
        self.hodge.star(a)
    }

    pub fn inner(&self, a: &Form<S>, b: &Form<S>) -> S {
        self.hodge.inner(a, b)
    }

    /// `J` acting on forms by pullback.
    pub fn j_form(&self, a: &Form<S>) -> Form<S> {
        a.pullback_unchecked(&self.j)
    }

    pub fn j_vec(&self, v: &[S]) -> Vec<S> {
        self.j.mul_vec(v)
    }

    pub fn flat(&self, v: &[S]) -> Form<S> {
        self.metric.flat(v)
    }

    pub fn sharp(&self, gamma: &Form<S>) -> Vec<S> {
        self.hodge.gram(1).mul_vec(gamma.coeffs())
    }

    fn tol(&self, scale: f64) -> f64 {
        tol_for::<S>(scale)
    }

    /// `(1/6)ω³ − (1/4)ReΩ∧ImΩ` as a top-degree coefficient.
    pub fn monge_ampere_defect(&self) -> S {
        let w = &self.omega;
        top(&w.wedge(w).wedge(w)) * S::ratio(1, 6) - top(&self.re_omega.wedge(&self.im_omega)) * S::ratio(1, 4)
    }

    /// A copy with one defining form negated after derivation, used to
    /// exercise failure reporting.
    pub fn mutated(&self, m: Mutation) -> Self {
        let mut s = self.clone();
        match m {
            Mutation::Omega => s.omega = -&s.omega,
            Mutation::ReOmega => s.re_omega = -&s.re_omega,
            Mutation::ImOmega => s.im_omega = -&s.im_omega,
        }
        s
    }

    fn orthogonal_coeffs(&self, target: &Form<S>, span: &[Form<S>]) -> Vec<S> {
        let n = span.len();
        let g = Matrix::from_fn(n, n, |i, j| self.inner(&span[i], &span[j]));
        let rhs: Vec<S> = span.iter().map(|b| self.inner(b, target)).collect();
        g.solve(&rhs, 1e-13).expect("spanning forms are independent")
    }

    /// Splits a 2-form into its `Λ²₁ ⊕ Λ²₆ ⊕ Λ²₈` components.
    pub fn project2(&self, beta: &Form<S>) -> TypeSplit2<S> {
        assert!(beta.dim() == 6 && beta.degree() == 2, "project2 expects a 2-form on R^6");
        let mut span = vec![self.omega.clone()];
        span.extend((1..=6).map(|i| self.re_omega.contract(i)));
        let c = self.orthogonal_coeffs(beta, &span);
        let b1 = self.omega.scale(&c[0]);
        let x6: Vec<S> = c[1..].to_vec();
        let b6 = self.re_omega.interior(&x6);
        let b8 = &(beta - &b1) - &b6;
        TypeSplit2 { b1, b6, b8, c1: c[0].clone(), x6 }
    }

    /// Splits a 3-form into its `Λ³₆ ⊕ Λ³₁⊕₁ ⊕ Λ³₁₂` components.
    pub fn project3(&self, gamma: &Form<S>) -> TypeSplit3<S> {
        assert!(gamma.dim() == 6 && gamma.degree() == 3, "project3 expects a 3-form on R^6");
        let mut span: Vec<Form<S>> = (1..=6).map(|i| Form::e(6, &[i]).wedge(&self.omega)).collect();
        span.push(self.re_omega.clone());
        span.push(self.im_omega.clone());
        let c = self.orthogonal_coeffs(gamma, &span);
        let xi6 = Form::one_form(&c[..6]);
        let g6 = xi6.wedge(&self.omega);
        let (a, b) = (c[6].clone(), c[7].clone());
        let g11 = &self.re_omega.scale(&a) + &self.im_omega.scale(&b);
        let g12 = &(gamma - &g6) - &g11;
        TypeSplit3 { g6, g11, g12, xi6, a, b }
    }

    /// A basis of `Λ²₈ = {β : β∧ω² = 0, β∧ReΩ = 0}`.
    pub fn lambda28_basis(&self) -> Vec<Form<S>> {
        let w2 = self.omega.wedge(&self.omega);
        self.kernel_basis(2, |b| vec![b.wedge(&w2), b.wedge(&self.re_omega)])
    }

    /// A basis of `Λ³₁₂ = {γ : γ∧ω = 0, γ∧ReΩ = 0, γ∧ImΩ = 0}`.
    pub fn lambda312_basis(&self) -> Vec<Form<S>> {
        self.kernel_basis(3, |g| vec![g.wedge(&self.omega), g.wedge(&self.re_omega), g.wedge(&self.im_omega)])
    }

    fn kernel_basis(&self, k: usize, constraints: impl Fn(&Form<S>) -> Vec<Form<S>>) -> Vec<Form<S>> {
        let basis: Vec<Form<S>> = crate::exterior::basis_masks(6, k)
            .iter()
            .map(|&m| Form::e(6, &crate::exterior::mask_indices(m)))
            .collect();
        let cols: Vec<Vec<S>> =
            basis.iter().map(|b| constraints(b).into_iter().flat_map(|f| f.into_coeffs()).collect()).collect();
        let m = Matrix::from_fn(cols[0].len(), cols.len(), |i, j| cols[j][i].clone());
        m.nullspace(1e-12).into_iter().map(|v| Form::from_coeffs(6, k, v)).collect()
    }

    /// Linearized Hitchin map at `ReΩ`: `⋆(ρ₆ + ρ₁⊕₁) − ⋆ρ₁₂`.
    pub fn hitchin_linearization(&self, rho: &Form<S>) -> Form<S> {
        let t = self.project3(rho);
        &self.star(&(&t.g6 + &t.g11)) - &self.star(&t.g12)
    }

    /// `curl γ = ⋆(dγ ∧ ReΩ)` from the value of `dγ`.
    pub fn curl_from(&self, dgamma: &Form<S>) -> Form<S> {
        self.star(&dgamma.wedge(&self.re_omega))
    }

    /// Splits a 4-form as `a·ω² + ξ∧ψ + τ∧ω` with `τ ∈ Λ²₈`, where `ψ` is
    /// `ReΩ` or `ImΩ`.
    fn split4(&self, f: &Form<S>, psi: &Form<S>) -> Result<(S, Form<S>, Form<S>)> {
        let t = self.project2(&self.star(f));
        // ⋆ is an involution on 4-forms in dimension 6, so f = ⋆b1 + ⋆b6 + ⋆b8.
        let tol = self.tol(f.max_abs());
        let w2 = self.omega.wedge(&self.omega);
        let s1 = self.star(&t.b1);
        let a = express_in(&s1, std::slice::from_ref(&w2), tol)
            .ok_or_else(|| Error::DecompositionInconsistent("Λ⁴₁ component".into()))?[0]
            .clone();
        let xi = solve_wedge(&self.star(&t.b6), psi, 1, tol)
            .ok_or_else(|| Error::DecompositionInconsistent("Λ⁴₆ component".into()))?;
        let tau = -&t.b8;
        Ok((a, xi, tau))
    }

    /// Intrinsic torsion from the formal derivatives of `(ω, ReΩ, ImΩ)`.
    ///
    /// Fails with [`Error::DecompositionInconsistent`] when the three
    /// derivatives cannot come from one set of torsion classes.
    pub fn torsion_classes(&self, d_omega: &Form<S>, d_re: &Form<S>, d_im: &Form<S>) -> Result<TorsionClasses<S>> {
        if d_omega.degree() != 3 || d_re.degree() != 4 || d_im.degree() != 4 {
            return Err(Error::DimensionMismatch("torsion_classes expects (3, 4, 4)-forms".into()));
        }
        let t = self.project3(d_omega);
        let w1 = t.a.clone() / S::from_i64(3);
        let w1_hat = t.b.clone() / S::from_i64(3);
        let (a_re, w5, w2) = self.split4(d_re, &self.re_omega)?;
        let (a_im, w5b, w2_hat) = self.split4(d_im, &self.im_omega)?;
        let scale = d_omega.max_abs().max(d_re.max_abs()).max(d_im.max_abs());
        let tol = self.tol(scale);
        let check = |x: S, what: &str| -> Result<()> {
            if x.is_negligible(tol) {
                Ok(())
            } else {
                Err(Error::DecompositionInconsistent(format!("{what} mismatch by {:e}", x.to_f64())))
            }
        };
        check(a_re - w1_hat.clone() * S::from_i64(2), "ω² coefficient of dReΩ against ŵ₁")?;
        check(a_im + w1.clone() * S::from_i64(2), "ω² coefficient of dImΩ against w₁")?;
        if !(&w5 - &w5b).is_negligible(tol) {
            return Err(Error::DecompositionInconsistent("w₅ differs between dReΩ and dImΩ".into()));
        }
        Ok(TorsionClasses { w1, w1_hat, w2, w2_hat, w3: t.g12, w4: t.xi6, w5 })
    }

    /// `(dω, dReΩ, dImΩ)` assembled from torsion classes.
    pub fn reconstruct(&self, c: &TorsionClasses<S>) -> (Form<S>, Form<S>, Form<S>) {
        let w2f = self.omega.wedge(&self.omega);
        let d_omega = &(&(&self.re_omega.scale(&(c.w1.clone() * S::from_i64(3)))
            + &self.im_omega.scale(&(c.w1_hat.clone() * S::from_i64(3))))
            + &c.w3)
            + &c.w4.wedge(&self.omega);
        let d_re = &(&w2f.scale(&(c.w1_hat.clone() * S::from_i64(2))) + &c.w5.wedge(&self.re_omega))
            + &c.w2.wedge(&self.omega);
        let d_im = &(&w2f.scale(&(c.w1.clone() * S::from_i64(-2))) + &c.w5.wedge(&self.im_omega))
            + &c.w2_hat.wedge(&self.omega);
        (d_omega, d_re, d_im)
    }
}

/// One named identity with its defect form.
#[derive(Clone, Debug)]
pub struct IdentityCheck<S> {
    pub name: &'static str,
    pub anchor: &'static str,
    /// Zero exactly when the identity holds; for chained equalities the
    /// defects of each link are concatenated.
    pub defects: Vec<Form<S>>,
}

impl<S: Scalar> IdentityCheck<S> {
    pub fn max_defect(&self) -> f64 {
        self.defects.iter().map(|d| d.max_abs()).fold(0.0, f64::max)
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.defects.iter().all(|d| d.is_negligible(tol))
    }
}

/// The contraction and Hodge-star identities of an SU(3)-structure, sampled
/// at a vector `x`, a 1-form `eta`, a 2-form `beta` (whose `Λ²₈` part is
/// used) and a 3-form `gamma` (whose `Λ³₁₂` part is used).
pub fn identity_battery<S: Scalar>(
    s: &SU3Structure<S>,
    x: &[S],
    eta: &Form<S>,
    beta: &Form<S>,
    gamma: &Form<S>,
) -> Vec<IdentityCheck<S>> {
    let w = &s.omega;
    let re = &s.re_omega;
    let im = &s.im_omega;
    let w2 = w.wedge(w);
    let xf = s.flat(x);
    let jxf = s.j_form(&xf);
    let xre = re.interior(x);
    let half = S::ratio(1, 2);
    let tau8 = s.project2(beta).b8;
    let sigma12 = s.project3(gamma).g12;
    let jeta = s.j_form(eta);
    let ew = eta.wedge(w);
    vec![
        IdentityCheck { name: "contract_omega", anchor: "X⌟ω = −JX♭", defects: vec![&w.interior(x) + &jxf] },
        IdentityCheck {
            name: "contract_im_omega",
            anchor: "X⌟ImΩ = −(JX)⌟ReΩ",
            defects: vec![&im.interior(x) + &re.interior(&s.j_vec(x))],
        },
        IdentityCheck {
            name: "contract_re_omega_wedge_omega",
            anchor: "(X⌟ReΩ)∧ω = JX♭∧ReΩ = X♭∧ImΩ",
            defects: vec![&xre.wedge(w) - &jxf.wedge(re), &jxf.wedge(re) - &xf.wedge(im)],
        },
        IdentityCheck {
            name: "contract_re_omega_wedge_re_omega",
            anchor: "(X⌟ReΩ)∧ReΩ = X♭∧ω²",
            defects: vec![&xre.wedge(re) - &xf.wedge(&w2)],
        },
        IdentityCheck {
            name: "contract_re_omega_wedge_im_omega",
            anchor: "(X⌟ReΩ)∧ImΩ = −JX♭∧ω²",
            defects: vec![&xre.wedge(im) + &jxf.wedge(&w2)],
        },
        IdentityCheck {
            name: "star_one_form",
            anchor: "⋆η = −½Jη∧ω²",
            defects: vec![&s.star(eta) + &jeta.wedge(&w2).scale(&half)],
        },
        IdentityCheck { name: "star_omega", anchor: "⋆ω = ½ω²", defects: vec![&s.star(w) - &w2.scale(&half)] },
        IdentityCheck {
            name: "star_contract_re_omega",
            // The middle term carries the sign that agrees with
            // (X⌟ReΩ)∧ω = JX♭∧ReΩ = X♭∧ImΩ; the opposite sign would make the
            // two chains contradict each other.
            anchor: "⋆(X⌟ReΩ) = JX♭∧ReΩ = X♭∧ImΩ",
            defects: vec![&s.star(&xre) - &jxf.wedge(re), &s.star(&xre) - &xf.wedge(im)],
        },
        IdentityCheck {
            name: "star_tau8_wedge_omega",
            anchor: "⋆(τ₈∧ω) = −τ₈",
            defects: vec![&s.star(&tau8.wedge(w)) + &tau8],
        },
        IdentityCheck {
            name: "star_sigma12",
            // With J acting by pullback, ⋆ is −J on Λ³₆ (see ⋆(η∧ω) below)
            // and +J on Λ³₁₂.
            anchor: "⋆σ₁₂ = Jσ₁₂",
            defects: vec![&s.star(&sigma12) - &s.j_form(&sigma12)],
        },
        IdentityCheck {
            name: "star_eta_wedge_omega",
            anchor: "⋆(η∧ω) = −Jη∧ω = −J(η∧ω)",
            defects: vec![&s.star(&ew) + &jeta.wedge(w), &s.star(&ew) + &s.j_form(&ew)],
        },
        IdentityCheck {
            name: "star_re_im_omega",
            anchor: "⋆ReΩ = ImΩ, ⋆ImΩ = −ReΩ",
            defects: vec![&s.star(re) - im, &s.star(im) + re],
        },
    ]
}
