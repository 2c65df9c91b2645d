//! Exterior forms on oriented inner-product spaces of dimension at most 8.
//!
//! A form stores one coefficient per strictly increasing index tuple, in
//! lexicographic order. Indices are 1-based in every public signature.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::OnceLock;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

pub const MAX_DIM: usize = 8;

struct Basis {
    masks: Vec<u16>,
    pos: Vec<usize>,
}

fn tables() -> &'static Vec<Vec<Basis>> {
    static T: OnceLock<Vec<Vec<Basis>>> = OnceLock::new();
    T.get_or_init(|| {
        (0..=MAX_DIM)
            .map(|n| {
                (0..=n)
                    .map(|k| {
                        let masks: Vec<u16> = (0..n)
                            .combinations(k)
                            .map(|c| c.iter().fold(0u16, |m, &i| m | (1 << i)))
                            .collect();
                        let mut pos = vec![usize::MAX; 1 << MAX_DIM];
                        for (p, &m) in masks.iter().enumerate() {
                            pos[m as usize] = p;
                        }
                        Basis { masks, pos }
                    })
                    .collect()
            })
            .collect()
    })
}

/// Bitmasks of the basis k-forms in storage order; empty when `k > n`.
pub fn basis_masks(n: usize, k: usize) -> &'static [u16] {
    tables()[n].get(k).map_or(&[], |b| &b.masks)
}

/// Storage position of a basis mask.
pub fn mask_pos(n: usize, k: usize, mask: u16) -> usize {
    tables()[n][k].pos[mask as usize]
}

/// Number of basis k-forms in dimension n.
pub fn binom(n: usize, k: usize) -> usize {
    if k > n {
        0
    } else {
        tables()[n][k].masks.len()
    }
}

/// 1-based sorted indices of a mask.
pub fn mask_indices(mask: u16) -> Vec<usize> {
    (0..16).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect()
}

/// Sign of `e^a ∧ e^b` relative to `e^{a∪b}` for disjoint masks.
pub fn wedge_sign(a: u16, b: u16) -> bool {
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        inversions += (a >> (j + 1)).count_ones();
    }
    inversions % 2 == 1
}

/// Canonicalizes a 1-based index tuple: `(mask, negative)` or `None` if an
/// index repeats.
fn canonical(idx: &[usize]) -> Option<(u16, bool)> {
    let mut v: Vec<usize> = idx.to_vec();
    let mut neg = false;
    // Bubble sort tracks the permutation parity directly.
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                neg = !neg;
            } else if v[j] == v[j + 1] {
                return None;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v.iter().fold(0u16, |m, &i| m | (1 << (i - 1))), neg))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign(self) -> i64 {
        match self {
            Orientation::Positive => 1,
            Orientation::Negative => -1,
        }
    }
}

#[derive(Clone, PartialEq)]
pub struct Form<S> {
    dim: usize,
    degree: usize,
    coeffs: Vec<S>,
}

impl<S: Scalar> Form<S> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!(dim <= MAX_DIM, "dimension {dim} exceeds {MAX_DIM}");
        Form { dim, degree, coeffs: vec![S::zero(); binom(dim, degree)] }
    }

    /// The constant 0-form `c`.
    pub fn constant(dim: usize, c: S) -> Self {
        Form { dim, degree: 0, coeffs: vec![c] }
    }

    /// `e^{i1} ∧ ... ∧ e^{ik}` with 1-based indices in any order.
    pub fn e(dim: usize, idx: &[usize]) -> Self {
        Self::from_terms(dim, idx.len(), &[(idx, S::one())])
    }

    pub fn from_terms(dim: usize, degree: usize, terms: &[(&[usize], S)]) -> Self {
        let mut f = Self::zero(dim, degree);
        for (idx, c) in terms {
            assert_eq!(idx.len(), degree, "term degree");
            assert!(idx.iter().all(|&i| i >= 1 && i <= dim), "index out of range");
            if let Some((m, neg)) = canonical(idx) {
                let p = mask_pos(dim, degree, m);
                let c = if neg { -c.clone() } else { c.clone() };
                f.coeffs[p] = f.coeffs[p].clone() + c;
            }
        }
        f
    }

    /// A 1-form from its components.
    pub fn one_form(v: &[S]) -> Self {
        assert!(v.len() <= MAX_DIM);
        Form { dim: v.len(), degree: 1, coeffs: v.to_vec() }
    }

    pub fn from_coeffs(dim: usize, degree: usize, coeffs: Vec<S>) -> Self {
        assert_eq!(coeffs.len(), binom(dim, degree), "coefficient count");
        Form { dim, degree, coeffs }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    /// Coefficient of `e^{idx}` (any order, sign-adjusted).
    pub fn get(&self, idx: &[usize]) -> S {
        assert_eq!(idx.len(), self.degree);
        match canonical(idx) {
            None => S::zero(),
            Some((m, neg)) => {
                let c = self.coeffs[mask_pos(self.dim, self.degree, m)].clone();
                if neg {
                    -c
                } else {
                    c
                }
            }
        }
    }

    pub fn coeff_mask(&self, mask: u16) -> &S {
        &self.coeffs[mask_pos(self.dim, self.degree, mask)]
    }

    /// Nonzero terms as (1-based indices, coefficient).
    pub fn terms(&self) -> Vec<(Vec<usize>, S)> {
        basis_masks(self.dim, self.degree)
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(&m, c)| (mask_indices(m), c.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_negligible(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.is_negligible(tol))
    }

    pub fn scale(&self, c: &S) -> Self {
        Form { dim: self.dim, degree: self.degree, coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect() }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Form<T> {
        Form { dim: self.dim, degree: self.degree, coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn to_f64(&self) -> Form<f64> {
        self.map(|x| x.to_f64())
    }

    /// Euclidean coefficient norm (metric independent, for reporting).
    pub fn coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.to_f64().powi(2)).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }

    fn check_same(&self, o: &Form<S>) {
        assert!(
            self.dim == o.dim && self.degree == o.degree,
            "form shape mismatch: ({}, {}) vs ({}, {})",
            self.dim,
            self.degree,
            o.dim,
            o.degree
        );
    }

    /// Exterior product.
    ///
    /// # Panics
    /// If the dimensions differ; see [`wedge`] for the checked version.
    pub fn wedge(&self, o: &Form<S>) -> Form<S> {
        assert_eq!(self.dim, o.dim, "wedge of forms in different dimensions");
        let n = self.dim;
        let k = self.degree + o.degree;
        if k > n {
            return Form { dim: n, degree: k, coeffs: Vec::new() };
        }
        let mut out = Self::zero(n, k);
        let bm = basis_masks(n, o.degree);
        for (&ma, ca) in basis_masks(n, self.degree).iter().zip(&self.coeffs) {
            if ca.is_zero() {
                continue;
            }
            for (&mb, cb) in bm.iter().zip(&o.coeffs) {
                if cb.is_zero() || ma & mb != 0 {
                    continue;
                }
                let p = mask_pos(n, k, ma | mb);
                let t = ca.clone() * cb.clone();
                out.coeffs[p] = if wedge_sign(ma, mb) { out.coeffs[p].clone() - t } else { out.coeffs[p].clone() + t };
            }
        }
        out
    }

    /// Interior product `v ⌟ self`. Contracting a 0-form gives the zero form.
    pub fn interior(&self, v: &[S]) -> Form<S> {
        assert_eq!(v.len(), self.dim, "interior product dimension");
        if self.degree == 0 {
            return Form { dim: self.dim, degree: 0, coeffs: vec![S::zero()] };
        }
        let n = self.dim;
        let mut out = Self::zero(n, self.degree - 1);
        for (&m, c) in basis_masks(n, self.degree).iter().zip(&self.coeffs) {
            if c.is_zero() {
                continue;
            }
            let mut rest = m;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if v[i].is_zero() {
                    continue;
                }
                let p = mask_pos(n, self.degree - 1, m & !(1 << i));
                let t = v[i].clone() * c.clone();
                let neg = (m & ((1u16 << i) - 1)).count_ones() % 2 == 1;
                out.coeffs[p] = if neg { out.coeffs[p].clone() - t } else { out.coeffs[p].clone() + t };
            }
        }
        out
    }

    /// Contraction with the i-th basis vector (1-based).
    pub fn contract(&self, i: usize) -> Form<S> {
        let mut v = vec![S::zero(); self.dim];
        v[i - 1] = S::one();
        self.interior(&v)
    }

    /// `A^* self`, where `(A^*α)(v, ...) = α(Av, ...)`.
    pub fn pullback_unchecked(&self, a: &Matrix<S>) -> Form<S> {
        let n = self.dim;
        let k = self.degree;
        if k == 0 {
            return self.clone();
        }
        let mut out = Self::zero(n, k);
        let targets = basis_masks(n, k);
        let target_idx: Vec<Vec<usize>> = targets.iter().map(|&m| mask_indices(m).iter().map(|i| i - 1).collect()).collect();
        for (&mi, c) in basis_masks(n, k).iter().zip(&self.coeffs) {
            if c.is_zero() {
                continue;
            }
            let rows: Vec<usize> = mask_indices(mi).iter().map(|i| i - 1).collect();
            for (p, cols) in target_idx.iter().enumerate() {
                let d = a.minor(&rows, cols).det();
                if !d.is_zero() {
                    out.coeffs[p] = out.coeffs[p].clone() + d * c.clone();
                }
            }
        }
        out
    }

    /// Restricts a form on R^n to the first `m` coordinates, dropping terms
    /// that involve later indices.
    pub fn truncate(&self, m: usize) -> Form<S> {
        let mut out = Self::zero(m, self.degree);
        if self.degree > m {
            return out;
        }
        let lim = (1u16 << m) - 1;
        for (&mask, c) in basis_masks(self.dim, self.degree).iter().zip(&self.coeffs) {
            if mask & !lim == 0 {
                out.coeffs[mask_pos(m, self.degree, mask)] = c.clone();
            }
        }
        out
    }

    /// Embeds a form on R^m into R^n via the first m coordinates.
    pub fn extend(&self, n: usize) -> Form<S> {
        assert!(n >= self.dim);
        let mut out = Self::zero(n, self.degree);
        for (&mask, c) in basis_masks(self.dim, self.degree).iter().zip(&self.coeffs) {
            out.coeffs[mask_pos(n, self.degree, mask)] = c.clone();
        }
        out
    }

    /// Applies `A` in every slot for a square matrix acting on vectors:
    /// the same as [`Form::pullback_unchecked`], named for endomorphisms like J.
    pub fn act(&self, a: &Matrix<S>) -> Form<S> {
        self.pullback_unchecked(a)
    }
}

/// Checked exterior product.
pub fn wedge<S: Scalar>(a: &Form<S>, b: &Form<S>) -> Result<Form<S>> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch(format!("{} vs {}", a.dim, b.dim)));
    }
    Ok(a.wedge(b))
}

/// Checked interior product.
pub fn interior<S: Scalar>(v: &[S], a: &Form<S>) -> Result<Form<S>> {
    if v.len() != a.dim {
        return Err(Error::DimensionMismatch(format!("vector {} vs form {}", v.len(), a.dim)));
    }
    Ok(a.interior(v))
}

/// Checked pullback by an invertible matrix.
pub fn pullback<S: Scalar>(a: &Matrix<S>, f: &Form<S>) -> Result<Form<S>> {
    if a.rows() != f.dim || a.cols() != f.dim {
        return Err(Error::DimensionMismatch(format!("{}x{} matrix on dimension {}", a.rows(), a.cols(), f.dim)));
    }
    if a.det().is_negligible(1e-14 * a.max_abs().powi(f.dim as i32)) {
        return Err(Error::SingularMatrix);
    }
    Ok(f.pullback_unchecked(a))
}

impl<S: Scalar> Add for &Form<S> {
    type Output = Form<S>;
    fn add(self, o: &Form<S>) -> Form<S> {
        self.check_same(o);
        Form {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<S: Scalar> Sub for &Form<S> {
    type Output = Form<S>;
    fn sub(self, o: &Form<S>) -> Form<S> {
        self.check_same(o);
        Form {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<S: Scalar> Add for Form<S> {
    type Output = Form<S>;
    fn add(self, o: Form<S>) -> Form<S> {
        &self + &o
    }
}

impl<S: Scalar> Sub for Form<S> {
    type Output = Form<S>;
    fn sub(self, o: Form<S>) -> Form<S> {
        &self - &o
    }
}

impl<S: Scalar> Neg for &Form<S> {
    type Output = Form<S>;
    fn neg(self) -> Form<S> {
        self.map(|x| -x.clone())
    }
}

impl<S: Scalar> Neg for Form<S> {
    type Output = Form<S>;
    fn neg(self) -> Form<S> {
        -&self
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for Form<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (idx, c)) in terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let s: String = idx.iter().map(|i| i.to_string()).collect();
            if idx.is_empty() {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c})e{s}")?;
            }
        }
        Ok(())
    }
}

impl<S: fmt::Debug> fmt::Debug for Form<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim;
        let k = self.degree;
        let mut m = f.debug_map();
        if k <= n {
            for (&mask, c) in tables()[n][k].masks.iter().zip(&self.coeffs) {
                let s = format!("{c:?}");
                if s != "0" && s != "0.0" && s != "Ratio { numer: 0, denom: 1 }" {
                    m.entry(&mask_indices(mask), c);
                }
            }
        }
        m.finish()
    }
}

/// Symmetric bilinear form on R^n.
#[derive(Clone, Debug, PartialEq)]
pub struct Metric<S> {
    g: Matrix<S>,
}

impl<S: Scalar> Metric<S> {
    pub fn new(g: Matrix<S>) -> Result<Self> {
        if g.rows() != g.cols() || g.rows() > MAX_DIM {
            return Err(Error::DimensionMismatch(format!("{}x{} metric", g.rows(), g.cols())));
        }
        if !g.is_symmetric(1e-12 * g.max_abs().max(1.0)) {
            return Err(Error::DimensionMismatch("metric matrix is not symmetric".into()));
        }
        Ok(Metric { g })
    }

    pub fn identity(n: usize) -> Self {
        Metric { g: Matrix::identity(n) }
    }

    pub fn dim(&self) -> usize {
        self.g.rows()
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.g
    }

    /// Leading principal minors on the exact backend; Cholesky pivots above a
    /// relative floor on float backends.
    pub fn is_positive_definite(&self) -> bool {
        let n = self.dim();
        if S::EXACT {
            return (1..=n).all(|k| {
                let idx: Vec<usize> = (0..k).collect();
                self.g.minor(&idx, &idx).det().is_positive()
            });
        }
        let floor = 1e-12 * self.g.max_abs();
        let mut l = vec![vec![0.0f64; n]; n];
        for i in 0..n {
            for j in 0..=i {
                let mut s = self.g[(i, j)].to_f64();
                for k in 0..j {
                    s -= l[i][k] * l[j][k];
                }
                if i == j {
                    if s <= floor {
                        return false;
                    }
                    l[i][i] = s.sqrt();
                } else {
                    l[i][j] = s / l[j][j];
                }
            }
        }
        true
    }

    pub fn inverse(&self) -> Result<Matrix<S>> {
        self.g.inverse().ok_or(Error::NotPositiveDefinite)
    }

    pub fn flat(&self, v: &[S]) -> Form<S> {
        Form::one_form(&self.g.mul_vec(v))
    }

    pub fn sharp(&self, gamma: &Form<S>) -> Result<Vec<S>> {
        if gamma.degree() != 1 || gamma.dim() != self.dim() {
            return Err(Error::DimensionMismatch("sharp expects a 1-form of the metric's dimension".into()));
        }
        if !self.is_positive_definite() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(self.inverse()?.mul_vec(gamma.coeffs()))
    }

    pub fn apply(&self, u: &[S], v: &[S]) -> S {
        u.iter().zip(self.g.mul_vec(v)).fold(S::zero(), |a, (x, y)| a + x.clone() * y)
    }

    /// `√det g` with sign `o`, the coefficient of the volume form.
    pub fn volume_coeff(&self, o: Orientation) -> Result<S> {
        if !self.is_positive_definite() {
            return Err(Error::NotPositiveDefinite);
        }
        let d = self.g.det();
        let r = d.sqrt().ok_or_else(|| Error::NotPerfectSquare(format!("det g = {:?}", d)))?;
        Ok(if o == Orientation::Positive { r } else { -r })
    }

    pub fn volume(&self, o: Orientation) -> Result<Form<S>> {
        let c = self.volume_coeff(o)?;
        let n = self.dim();
        Ok(Form::from_coeffs(n, n, vec![c]))
    }
}

/// Gram matrix of the induced inner product on Λ^k from the inverse metric.
pub fn gram<S: Scalar>(ginv: &Matrix<S>, k: usize) -> Matrix<S> {
    let n = ginv.rows();
    let idx: Vec<Vec<usize>> = basis_masks(n, k).iter().map(|&m| mask_indices(m).iter().map(|i| i - 1).collect()).collect();
    let mut out = Matrix::zeros(idx.len(), idx.len());
    for i in 0..idx.len() {
        for j in i..idx.len() {
            let d = ginv.minor(&idx[i], &idx[j]).det();
            out[(j, i)] = d.clone();
            out[(i, j)] = d;
        }
    }
    out
}

/// Precomputed Hodge star for one metric and volume coefficient.
#[derive(Clone, Debug)]
pub struct Hodge<S> {
    n: usize,
    grams: Vec<Matrix<S>>,
    vol: S,
}

impl<S: Scalar> Hodge<S> {
    /// `vol` is the signed coefficient of the volume form on `e^{1..n}`.
    pub fn from_parts(ginv: &Matrix<S>, vol: S) -> Self {
        let n = ginv.rows();
        Hodge { n, grams: (0..=n).map(|k| gram(ginv, k)).collect(), vol }
    }

    pub fn new(g: &Metric<S>, o: Orientation) -> Result<Self> {
        let vol = g.volume_coeff(o)?;
        Ok(Self::from_parts(&g.inverse()?, vol))
    }

    pub fn gram(&self, k: usize) -> &Matrix<S> {
        &self.grams[k]
    }

    pub fn vol_coeff(&self) -> &S {
        &self.vol
    }

    pub fn inner(&self, a: &Form<S>, b: &Form<S>) -> S {
        assert_eq!(a.degree(), b.degree());
        let gb = self.grams[a.degree()].mul_vec(b.coeffs());
        a.coeffs().iter().zip(gb).fold(S::zero(), |acc, (x, y)| acc + x.clone() * y)
    }

    pub fn norm_sq(&self, a: &Form<S>) -> S {
        self.inner(a, a)
    }

    /// Defined by `b ∧ ⋆a = ⟨b, a⟩ vol` for all `b`.
    pub fn star(&self, a: &Form<S>) -> Form<S> {
        assert_eq!(a.dim(), self.n, "hodge star dimension");
        let n = self.n;
        let k = a.degree();
        let ga = self.grams[k].mul_vec(a.coeffs());
        let full: u16 = ((1u32 << n) - 1) as u16;
        let mut out = Form::zero(n, n - k);
        for (p, &m) in basis_masks(n, k).iter().enumerate() {
            if ga[p].is_zero() {
                continue;
            }
            let c = m ^ full;
            let t = ga[p].clone() * self.vol.clone();
            let q = mask_pos(n, n - k, c);
            out.coeffs[q] = if wedge_sign(m, c) { -t } else { t };
        }
        out
    }
}

/// Hodge star of `a` for metric `g` and orientation `o`.
pub fn hodge<S: Scalar>(a: &Form<S>, g: &Metric<S>, o: Orientation) -> Result<Form<S>> {
    if a.dim() != g.dim() {
        return Err(Error::DimensionMismatch(format!("form {} vs metric {}", a.dim(), g.dim())));
    }
    Ok(Hodge::new(g, o)?.star(a))
}

/// Coefficients `c` with `target = Σ c_i span_i`, or `None` if `target` is
/// outside the span. Free coefficients are zero when the span is dependent.
pub fn express_in<S: Scalar>(target: &Form<S>, span: &[Form<S>], tol: f64) -> Option<Vec<S>> {
    let rows = target.coeffs().len();
    let m = Matrix::from_fn(rows, span.len(), |i, j| span[j].coeffs()[i].clone());
    m.solve(target.coeffs(), tol)
}

/// A k-form `ξ` with `ξ ∧ factor = target`, if one exists.
pub fn solve_wedge<S: Scalar>(target: &Form<S>, factor: &Form<S>, k: usize, tol: f64) -> Option<Form<S>> {
    let n = target.dim();
    let basis: Vec<Form<S>> =
        basis_masks(n, k).iter().map(|&m| Form::e(n, &mask_indices(m))).map(|b| b.wedge(factor)).collect();
    let c = express_in(target, &basis, tol)?;
    Some(Form::from_coeffs(n, k, c))
}

/// Top-degree coefficient of an n-form.
pub fn top<S: Scalar>(f: &Form<S>) -> S {
    assert_eq!(f.degree(), f.dim(), "top coefficient of a non-top form");
    f.coeffs()[0].clone()
}
