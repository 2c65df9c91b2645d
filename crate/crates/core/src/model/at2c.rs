//! The asymptotic model for T²-fibred conical Spin(7) metrics: a flat
//! T²-bundle over a Calabi–Yau cone with constant `p₀, q₀, r₀` and vertical
//! directions scaled by `ε`.
//!
//! Points are described by the cone radius alone: in the coframe
//! `(η∞, θ∞, dr, e¹, …, e⁵)` with `eⁱ` orthonormal on the link, the metric
//! depends on `r` only.

use crate::error::{Error, Result};
use crate::exterior::Metric;
use crate::linalg::Matrix;
use crate::spin7::vertical_coefficients;

#[derive(Clone, Debug, PartialEq)]
pub struct At2cModel {
    pub eps: f64,
    pub p0: f64,
    pub q0: f64,
    pub r0: f64,
}

impl At2cModel {
    pub fn new(eps: f64, p0: f64, q0: f64, r0: f64) -> Result<Self> {
        if !(p0 > 0.0 && q0 > 0.0) {
            return Err(Error::NonPositivePQ(format!("p0 = {p0}, q0 = {q0}")));
        }
        if !(eps > 0.0) || !r0.is_finite() {
            return Err(Error::IndefiniteMetric);
        }
        Ok(At2cModel { eps, p0, q0, r0 })
    }

    /// `(a, b, c, (p₀q₀)^{1/2})`, see [`vertical_coefficients`].
    pub fn coefficients(&self) -> (f64, f64, f64, f64) {
        vertical_coefficients(&self.p0, &self.q0, &self.r0).expect("float square roots of positive numbers")
    }
}

/// The metric at cone radius `r` in the coframe `(η∞, θ∞, dr, e¹, …, e⁵)`.
pub fn at2c_metric(m: &At2cModel, r: f64) -> Result<Metric<f64>> {
    if !(r > 0.0) {
        return Err(Error::IndefiniteMetric);
    }
    let (a, b, c, h) = m.coefficients();
    let e2 = m.eps * m.eps;
    let mut g = Matrix::zeros(8, 8);
    g[(0, 0)] = e2 * a;
    g[(1, 1)] = e2 * b;
    g[(0, 1)] = e2 * c;
    g[(1, 0)] = e2 * c;
    g[(2, 2)] = h;
    for i in 3..8 {
        g[(i, i)] = h * r * r;
    }
    let g = Metric::new(g).map_err(|_| Error::IndefiniteMetric)?;
    if !g.is_positive_definite() {
        return Err(Error::IndefiniteMetric);
    }
    Ok(g)
}

/// Volume density `√det g` at radius `r`, per unit volume of the torus
/// fibre and of the link.
pub fn volume_density(m: &At2cModel, r: f64) -> Result<f64> {
    let d = at2c_metric(m, r)?.matrix().det();
    if d <= 0.0 {
        return Err(Error::IndefiniteMetric);
    }
    Ok(d.sqrt())
}

/// Radius where the conical end starts; balls are measured from the apex
/// with the core `r < 1` excluded.
pub const INNER_RADIUS: f64 = 1.0;

/// Volume of the geodesic ball of radius `rho` around the apex, restricted
/// to the end `r ≥ 1`. Radial lines have length `(p₀q₀)^{1/4} r`.
pub fn ball_volume(m: &At2cModel, rho: f64, steps: usize) -> Result<f64> {
    let (_, _, _, h) = m.coefficients();
    let r_max = rho / h.sqrt();
    if r_max <= INNER_RADIUS {
        return Ok(0.0);
    }
    // Composite Simpson rule in the variable t = ln r.
    let n = steps.max(2) + steps % 2;
    let (t0, t1) = (INNER_RADIUS.ln(), r_max.ln());
    let dt = (t1 - t0) / n as f64;
    let mut acc = 0.0;
    for i in 0..=n {
        let t = t0 + i as f64 * dt;
        let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * volume_density(m, t.exp())? * t.exp();
    }
    Ok(acc * dt / 3.0)
}

/// Log-log slope of ball volume against radius for `samples` radii spread
/// geometrically over `[10, rho_max]`.
pub fn volume_growth(m: &At2cModel, rho_max: f64, samples: usize) -> Result<f64> {
    let samples = samples.max(2);
    let rho_min = 10.0;
    let rhos: Vec<f64> = (0..samples).map(|i| rho_min * (rho_max / rho_min).powf(i as f64 / (samples - 1) as f64)).collect();
    let vols = rhos.iter().map(|&r| ball_volume(m, r, 400)).collect::<Result<Vec<_>>>()?;
    Ok(super::grid::fitted_order(&rhos, &vols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn trivial_parameters_give_a_product_metric() {
        let m = At2cModel::new(1.0, 1.0, 1.0, 0.0).unwrap();
        let g = at2c_metric(&m, 3.0).unwrap();
        let expected = Matrix::diag(&[1.0, 1.0, 1.0, 9.0, 9.0, 9.0, 9.0, 9.0]);
        assert_eq!(g.matrix(), &expected);
    }

    #[test]
    fn vertical_block_matches_the_closed_formula() {
        // Independent evaluation of p^{1/2}q^{−3/2}, r²(pq)^{−3/2} + q^{1/2}p^{−3/2}, −r p^{−1/2}q^{−3/2}.
        let (eps, p, q, r) = (0.3, 2.0f64, 0.7f64, -1.3);
        let m = At2cModel::new(eps, p, q, r).unwrap();
        let g = at2c_metric(&m, 2.0).unwrap();
        let e2 = eps * eps;
        assert!((g.matrix()[(0, 0)] - e2 * p.sqrt() / q.powf(1.5)).abs() < 1e-14);
        assert!((g.matrix()[(1, 1)] - e2 * (r * r / (p * q).powf(1.5) + q.sqrt() / p.powf(1.5))).abs() < 1e-14);
        assert!((g.matrix()[(0, 1)] + e2 * r / (p.sqrt() * q.powf(1.5))).abs() < 1e-14);
        assert!((g.matrix()[(2, 2)] - (p * q).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn density_is_the_closed_form() {
        // The vertical block has determinant ε⁴/(pq) and the horizontal one
        // (pq)³ r¹⁰, so √det g = ε² pq r⁵.
        let m = At2cModel::new(0.5, 3.0, 0.25, 2.0).unwrap();
        for r in [1.0f64, 4.0, 30.0] {
            let expected = 0.25 * 0.75 * r.powi(5);
            assert!((volume_density(&m, r).unwrap() / expected - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn random_parameters_grow_like_r6() {
        let mut rng = crate::random::rng(77);
        for _ in 0..10 {
            let m = At2cModel::new(rng.gen_range(0.01..1.0), rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0), rng.gen_range(-5.0..5.0)).unwrap();
            let k = volume_growth(&m, 1000.0, 12).unwrap();
            assert!((k - 6.0).abs() <= 0.1, "exponent {k}");
        }
    }

    #[test]
    fn small_eps_converges_to_the_scaled_cone_metric() {
        let base = At2cModel::new(1.0, 2.0, 3.0, 0.5).unwrap();
        let limit = Matrix::from_fn(8, 8, |i, j| if i == j && i >= 2 { 6f64.sqrt() * if i == 2 { 1.0 } else { 4.0 } } else { 0.0 });
        let mut prev = f64::INFINITY;
        for eps in [1e-1, 1e-2, 1e-3] {
            let g = at2c_metric(&At2cModel { eps, ..base.clone() }, 2.0).unwrap();
            let dev = g.matrix().sub(&limit).max_abs();
            assert!(dev <= 10.0 * eps * eps && dev < prev);
            prev = dev;
        }
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(matches!(At2cModel::new(1.0, 0.0, 1.0, 0.0), Err(Error::NonPositivePQ(_))));
        assert!(matches!(At2cModel::new(0.0, 1.0, 1.0, 0.0), Err(Error::IndefiniteMetric)));
    }
}
