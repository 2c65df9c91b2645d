//! Seeded generators for rational test data.
//!
//! Every generator draws from a caller-supplied RNG so that suites are
//! reproducible from a single seed.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exterior::{binom, Form};
use crate::linalg::Matrix;
use num::Zero;

use crate::scalar::{q, Scalar, Q};
use crate::spin7::torsion::JetPoint;
use crate::spin7::Spin7Data;
use crate::su3::{pullback_su3, standard, SU3Structure};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A rational with numerator in `[-bound, bound]` and denominator in `1..=den`.
pub fn rational(rng: &mut TestRng, bound: i64, den: i64) -> Q {
    q(rng.gen_range(-bound..=bound), rng.gen_range(1..=den))
}

/// A strictly positive rational `n/d` with `n, d ∈ 1..=bound`.
pub fn positive_rational(rng: &mut TestRng, bound: i64) -> Q {
    q(rng.gen_range(1..=bound), rng.gen_range(1..=bound))
}

pub fn form(rng: &mut TestRng, n: usize, k: usize, bound: i64) -> Form<Q> {
    Form::from_coeffs(n, k, (0..binom(n, k)).map(|_| rational(rng, bound, 3)).collect())
}

pub fn vector(rng: &mut TestRng, n: usize, bound: i64) -> Vec<Q> {
    (0..n).map(|_| rational(rng, bound, 3)).collect()
}

pub fn form_f64(rng: &mut TestRng, n: usize, k: usize) -> Form<f64> {
    Form::from_coeffs(n, k, (0..binom(n, k)).map(|_| rng.gen_range(-1.0..1.0)).collect())
}

/// An integer matrix with positive determinant and entries in
/// `[-bound, bound]`.
pub fn gl_plus(rng: &mut TestRng, n: usize, bound: i64) -> Matrix<Q> {
    loop {
        let mut a = Matrix::from_fn(n, n, |_, _| q(rng.gen_range(-bound..=bound), 1));
        let d = a.det();
        if d.is_zero() {
            continue;
        }
        if !d.is_positive() {
            for j in 0..n {
                a[(0, j)] = -a[(0, j)].clone();
            }
        }
        return a;
    }
}

/// A strictly diagonally dominant matrix with positive diagonal: it lies in
/// GL⁺ and has condition number bounded by the dominance margin.
pub fn well_conditioned(rng: &mut TestRng, n: usize) -> Matrix<Q> {
    Matrix::from_fn(n, n, |i, j| if i == j { q(rng.gen_range(4..=6), 1) } else { q(rng.gen_range(-2..=2), 2) })
}

pub fn to_f64(a: &Matrix<Q>) -> Matrix<f64> {
    a.map(|x| x.to_f64())
}

/// Admissible Spin(7) data over a random GL⁺ pullback of the standard
/// structure, with `p = a⁴` and `q = b⁴` so that every root in the metric and
/// frame is rational.
pub fn spin7_data(rng: &mut TestRng) -> Spin7Data<Q> {
    let a = gl_plus(rng, 6, 2);
    let su3 = pullback_su3(&a, &standard()).expect("GL+ pullbacks of the standard structure are admissible");
    let pa = positive_rational(rng, 3);
    let qb = positive_rational(rng, 3);
    let p4 = |x: &Q| x.clone() * x.clone() * x.clone() * x.clone();
    Spin7Data::from_horizontal(su3, &form(rng, 6, 1, 3), &form(rng, 6, 1, 3), p4(&pa), p4(&qb), rational(rng, 4, 3))
        .expect("positive p and q")
}

/// A jet with every derivative drawn independently.
pub fn jet(rng: &mut TestRng, data: Spin7Data<Q>) -> JetPoint<Q> {
    JetPoint {
        data,
        d_omega: form(rng, 6, 3, 3),
        d_re: form(rng, 6, 4, 3),
        d_im: form(rng, 6, 4, 3),
        d_eta: form(rng, 6, 2, 3),
        d_theta: form(rng, 6, 2, 3),
        dp: form(rng, 6, 1, 3),
        dq: form(rng, 6, 1, 3),
        dr: form(rng, 6, 1, 3),
    }
}

/// A random element of `Λ²₈` for the structure `s`.
pub fn lambda28(rng: &mut TestRng, s: &SU3Structure<Q>) -> Form<Q> {
    s.lambda28_basis().iter().fold(Form::zero(6, 2), |acc, b| &acc + &b.scale(&rational(rng, 3, 2)))
}
