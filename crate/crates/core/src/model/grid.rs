//! Periodic finite-difference exterior calculus on flat tori.
//!
//! Derivatives use the central stencil `(u(x+h) − u(x−h)) / 2h`. An axis with
//! a single point carries fields that are constant along it, so the partial
//! derivative in that direction is exactly zero.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::Rng;

use crate::error::{Error, Result};
use crate::exterior::{basis_masks, binom, mask_pos, Form, Metric};

/// Box `[0, L)^n` with periodic identifications and per-axis point counts.
#[derive(Clone, Debug, PartialEq)]
pub struct GridChart {
    counts: Vec<usize>,
    period: f64,
    strides: Vec<usize>,
}

impl GridChart {
    /// `n` points along every axis.
    pub fn new(dim: usize, n: usize, period: f64) -> Result<Self> {
        Self::with_counts(vec![n; dim], period)
    }

    /// Axes with count 1 hold fields that are invariant along them; every
    /// other count must be even and at least 4.
    pub fn with_counts(counts: Vec<usize>, period: f64) -> Result<Self> {
        if counts.len() != 6 && counts.len() != 8 {
            return Err(Error::ChartMismatch(format!("chart dimension {} is neither 6 nor 8", counts.len())));
        }
        if let Some(c) = counts.iter().find(|&&c| c != 1 && (c < 4 || c % 2 != 0)) {
            return Err(Error::ChartMismatch(format!("axis count {c} must be 1 or an even number >= 4")));
        }
        if !(period > 0.0 && period.is_finite()) {
            return Err(Error::ChartMismatch(format!("period {period} must be positive")));
        }
        let mut strides = Vec::with_capacity(counts.len());
        let mut s = 1;
        for &c in &counts {
            strides.push(s);
            s *= c;
        }
        Ok(GridChart { counts, period, strides })
    }

    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Spacing along `axis` (0-based), `L / N_axis`.
    pub fn spacing(&self, axis: usize) -> f64 {
        self.period / self.counts[axis] as f64
    }

    /// Largest spacing over the axes that are actually resolved.
    pub fn h(&self) -> f64 {
        (0..self.dim()).filter(|&a| self.counts[a] > 1).map(|a| self.spacing(a)).fold(0.0, f64::max)
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn coords(&self, point: usize) -> Vec<f64> {
        (0..self.dim()).map(|a| ((point / self.strides[a]) % self.counts[a]) as f64 * self.spacing(a)).collect()
    }

    fn shift(&self, point: usize, axis: usize, forward: bool) -> usize {
        let n = self.counts[axis];
        let i = (point / self.strides[axis]) % n;
        let j = if forward { (i + 1) % n } else { (i + n - 1) % n };
        point + j * self.strides[axis] - i * self.strides[axis]
    }

    /// Volume of one grid cell; integrals treat single-point axes as having
    /// length `L`.
    pub fn cell_volume(&self) -> f64 {
        (0..self.dim()).map(|a| self.spacing(a)).product()
    }
}

/// A k-form sampled at every grid point, stored point-major.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    chart: GridChart,
    degree: usize,
    data: Vec<f64>,
}

impl GridField {
    pub fn zeros(chart: &GridChart, degree: usize) -> Self {
        let c = binom(chart.dim(), degree);
        GridField { chart: chart.clone(), degree, data: vec![0.0; c * chart.len()] }
    }

    pub fn from_fn(chart: &GridChart, degree: usize, f: impl Fn(&[f64]) -> Form<f64>) -> Self {
        let mut out = Self::zeros(chart, degree);
        for p in 0..chart.len() {
            out.set(p, &f(&chart.coords(p)));
        }
        out
    }

    pub fn constant(chart: &GridChart, form: &Form<f64>) -> Self {
        Self::from_fn(chart, form.degree(), |_| form.clone())
    }

    pub fn chart(&self) -> &GridChart {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> usize {
        binom(self.chart.dim(), self.degree)
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    fn slot(&self, point: usize) -> &[f64] {
        let c = self.components();
        &self.data[point * c..(point + 1) * c]
    }

    pub fn at(&self, point: usize) -> Form<f64> {
        Form::from_coeffs(self.chart.dim(), self.degree, self.slot(point).to_vec())
    }

    pub fn set(&mut self, point: usize, form: &Form<f64>) {
        assert_eq!((form.dim(), form.degree()), (self.chart.dim(), self.degree), "grid field slot shape");
        let c = self.components();
        self.data[point * c..(point + 1) * c].copy_from_slice(form.coeffs());
    }

    /// Applies a pointwise map that produces forms of degree `degree`.
    pub fn map(&self, degree: usize, f: impl Fn(&Form<f64>) -> Form<f64>) -> GridField {
        let mut out = Self::zeros(&self.chart, degree);
        for p in 0..self.chart.len() {
            out.set(p, &f(&self.at(p)));
        }
        out
    }

    /// Pointwise combination of two fields on the same chart.
    pub fn zip(&self, o: &GridField, degree: usize, f: impl Fn(&Form<f64>, &Form<f64>) -> Form<f64>) -> Result<GridField> {
        self.same_chart(o)?;
        let mut out = Self::zeros(&self.chart, degree);
        for p in 0..self.chart.len() {
            out.set(p, &f(&self.at(p), &o.at(p)));
        }
        Ok(out)
    }

    pub fn wedge(&self, o: &GridField) -> Result<GridField> {
        self.zip(o, self.degree + o.degree, |a, b| a.wedge(b))
    }

    pub fn add(&self, o: &GridField) -> Result<GridField> {
        self.same_shape(o)?;
        Ok(self.with_data(self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, o: &GridField) -> Result<GridField> {
        self.same_shape(o)?;
        Ok(self.with_data(self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect()))
    }

    pub fn scale(&self, c: f64) -> GridField {
        self.with_data(self.data.iter().map(|a| a * c).collect())
    }

    fn with_data(&self, data: Vec<f64>) -> GridField {
        GridField { chart: self.chart.clone(), degree: self.degree, data }
    }

    fn same_chart(&self, o: &GridField) -> Result<()> {
        if self.chart != o.chart {
            return Err(Error::ChartMismatch(format!("{:?} vs {:?}", self.chart.counts, o.chart.counts)));
        }
        Ok(())
    }

    fn same_shape(&self, o: &GridField) -> Result<()> {
        self.same_chart(o)?;
        if self.degree != o.degree {
            return Err(Error::ChartMismatch(format!("degree {} vs {}", self.degree, o.degree)));
        }
        Ok(())
    }

    /// Largest absolute coefficient, reduced in point order.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Discrete L² norm of the coefficient vector, `(Σ |c|² · cell)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        (self.data.iter().map(|v| v * v).sum::<f64>() * self.chart.cell_volume()).sqrt()
    }

    /// Discrete L² inner product using the pointwise metric on forms.
    pub fn inner(&self, o: &GridField, g: &Metric<f64>) -> Result<f64> {
        self.same_shape(o)?;
        let gram = crate::exterior::gram(&g.inverse()?, self.degree);
        let mut acc = 0.0;
        for p in 0..self.chart.len() {
            let gb = gram.mul_vec(o.slot(p));
            acc += self.slot(p).iter().zip(&gb).map(|(a, b)| a * b).sum::<f64>();
        }
        Ok(acc * self.chart.cell_volume())
    }

    /// True if the field is constant along `axis` (0-based) up to `tol`.
    pub fn is_invariant_along(&self, axis: usize, tol: f64) -> bool {
        (0..self.chart.len()).all(|p| {
            let q = self.chart.shift(p, axis, true);
            self.slot(p).iter().zip(self.slot(q)).all(|(a, b)| (a - b).abs() <= tol)
        })
    }

    /// CSV dump with one `point,component,value` row per stored coefficient.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("point,component,value\n");
        let c = self.components();
        for (i, v) in self.data.iter().enumerate() {
            writeln!(s, "{},{},{:e}", i / c, i % c, v).expect("writing to a string");
        }
        s
    }
}

/// Central-difference partial derivative along `axis` (0-based).
pub fn fd_partial(field: &GridField, axis: usize) -> GridField {
    let chart = &field.chart;
    let mut out = GridField::zeros(chart, field.degree);
    if chart.counts[axis] == 1 {
        return out;
    }
    let c = field.components();
    let inv = 1.0 / (2.0 * chart.spacing(axis));
    for p in 0..chart.len() {
        let (f, b) = (chart.shift(p, axis, true), chart.shift(p, axis, false));
        for i in 0..c {
            out.data[p * c + i] = (field.data[f * c + i] - field.data[b * c + i]) * inv;
        }
    }
    out
}

/// `d` with central differences: `Σ_a e^a ∧ D_a`.
pub fn fd_d(field: &GridField) -> GridField {
    let chart = &field.chart;
    let n = chart.dim();
    let k = field.degree;
    let mut out = GridField::zeros(chart, k + 1);
    if k >= n {
        return out;
    }
    let (ci, co) = (binom(n, k), binom(n, k + 1));
    let masks = basis_masks(n, k);
    for a in (0..n).filter(|&a| chart.counts[a] > 1) {
        let da = fd_partial(field, a);
        for (i, &m) in masks.iter().enumerate() {
            if m & (1 << a) != 0 {
                continue;
            }
            let j = mask_pos(n, k + 1, m | (1 << a));
            let neg = (m & ((1u16 << a) - 1)).count_ones() % 2 == 1;
            for p in 0..chart.len() {
                let v = da.data[p * ci + i];
                out.data[p * co + j] += if neg { -v } else { v };
            }
        }
    }
    out
}

/// Formal adjoint of [`fd_d`] for a constant metric:
/// `d*α = −Σ_j (g⁻¹e^j) ⌟ D_j α`.
pub fn fd_dstar(field: &GridField, g: &Metric<f64>) -> Result<GridField> {
    let chart = &field.chart;
    let n = chart.dim();
    if g.dim() != n {
        return Err(Error::ChartMismatch(format!("metric of dimension {} on a {}-dimensional chart", g.dim(), n)));
    }
    let k = field.degree;
    if k == 0 {
        return Ok(GridField::zeros(chart, 0));
    }
    let ginv = g.inverse()?;
    let mut out = GridField::zeros(chart, k - 1);
    for j in (0..n).filter(|&j| chart.counts[j] > 1) {
        let v = ginv.col(j);
        let dj = fd_partial(field, j);
        out = out.sub(&dj.map(k - 1, |f| f.interior(&v)))?;
    }
    Ok(out)
}

/// Discrete Hodge Laplacian `d d* + d* d`.
pub fn fd_laplacian(field: &GridField, g: &Metric<f64>) -> Result<GridField> {
    let a = fd_dstar(&fd_d(field), g)?;
    if field.degree == 0 {
        return Ok(a);
    }
    a.add(&fd_d(&fd_dstar(field, g)?))
}

/// Least-squares slope of `log err` against `log h`.
pub fn fitted_order(hs: &[f64], errs: &[f64]) -> f64 {
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Finite sum of plane waves `Σ c_m sin(2π k_m·x / L + φ_m)` with form
/// coefficients `c_m` and integer wave vectors `k_m`.
#[derive(Clone, Debug)]
pub struct PlaneWaves {
    dim: usize,
    degree: usize,
    period: f64,
    modes: Vec<(Form<f64>, Vec<i64>, f64)>,
}

impl PlaneWaves {
    /// Random modes with wave numbers in `[-2, 2]` along the resolved axes
    /// of `chart` and zero along its invariant axes.
    pub fn random(chart: &GridChart, degree: usize, modes: usize, rng: &mut crate::random::TestRng) -> Self {
        let n = chart.dim();
        let modes = (0..modes)
            .map(|_| {
                let k: Vec<i64> = (0..n).map(|a| if chart.counts()[a] > 1 { rng.gen_range(-2..=2) } else { 0 }).collect();
                (crate::random::form_f64(rng, n, degree), k, rng.gen_range(0.0..PI))
            })
            .collect();
        PlaneWaves { dim: n, degree, period: chart.period(), modes }
    }

    pub fn eval(&self, x: &[f64]) -> Form<f64> {
        self.modes.iter().fold(Form::zero(self.dim, self.degree), |acc, (c, k, ph)| {
            let t = k.iter().zip(x).map(|(&k, x)| k as f64 * x).sum::<f64>() * 2.0 * PI / self.period + ph;
            &acc + &c.scale(&t.sin())
        })
    }

    pub fn sample(&self, chart: &GridChart) -> GridField {
        GridField::from_fn(chart, self.degree, |x| self.eval(x))
    }

    /// Exact Hodge Laplacian for a constant metric, which acts on each
    /// coefficient as `−g^{ij}∂_i∂_j`.
    pub fn laplacian(&self, g: &Metric<f64>) -> Result<PlaneWaves> {
        let ginv = g.inverse()?;
        let w = 2.0 * PI / self.period;
        let modes = self
            .modes
            .iter()
            .map(|(c, k, ph)| {
                let kf: Vec<f64> = k.iter().map(|&k| k as f64 * w).collect();
                let s: f64 = (0..self.dim).flat_map(|i| (0..self.dim).map(move |j| (i, j))).map(|(i, j)| ginv[(i, j)] * kf[i] * kf[j]).sum();
                (c.scale(&s), k.clone(), *ph)
            })
            .collect();
        Ok(PlaneWaves { modes, ..self.clone() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;

    fn smooth(chart: &GridChart, degree: usize, seed: u64) -> GridField {
        PlaneWaves::random(chart, degree, 3, &mut random::rng(seed)).sample(chart)
    }

    #[test]
    fn chart_validation() {
        assert!(GridChart::new(6, 3, 1.0).is_err());
        assert!(GridChart::new(6, 6, 0.0).is_err());
        assert!(GridChart::new(5, 8, 1.0).is_err());
        assert!(GridChart::with_counts(vec![8, 1, 1, 4, 1, 1, 1, 1], 2.0).is_ok());
    }

    #[test]
    fn constant_field_has_zero_derivative() {
        let chart = GridChart::with_counts(vec![8, 8, 4, 1, 1, 1], 1.0).unwrap();
        let f = GridField::constant(&chart, &Form::e(6, &[2, 5]).scale(&3.0));
        assert_eq!(fd_d(&f).max_abs(), 0.0);
    }

    #[test]
    fn sine_derivative_converges_at_second_order() {
        let l = 2.0;
        let mut hs = Vec::new();
        let mut errs = Vec::new();
        for n in [16, 32, 64] {
            let chart = GridChart::with_counts(vec![n, 1, 1, 1, 1, 1], l).unwrap();
            let f = GridField::from_fn(&chart, 0, |x| Form::constant(6, (2.0 * PI * x[0] / l).sin()));
            let exact = GridField::from_fn(&chart, 1, |x| Form::e(6, &[1]).scale(&(2.0 * PI / l * (2.0 * PI * x[0] / l).cos())));
            hs.push(chart.h());
            errs.push(fd_d(&f).sub(&exact).unwrap().max_abs());
        }
        let order = fitted_order(&hs, &errs);
        assert!((order - 2.0).abs() < 0.1, "order {order}");
    }

    #[test]
    fn d_squared_vanishes_identically() {
        let chart = GridChart::with_counts(vec![8, 6, 4, 1, 4, 1], 1.0).unwrap();
        for k in 0..3 {
            let f = smooth(&chart, k, 3 + k as u64);
            assert!(fd_d(&fd_d(&f)).max_abs() < 1e-12 * f.max_abs() * 64.0);
        }
    }

    #[test]
    fn dstar_is_the_discrete_adjoint() {
        let chart = GridChart::with_counts(vec![8, 8, 1, 4, 1, 1], 1.5).unwrap();
        let mut rng = random::rng(9);
        let a = random::to_f64(&random::well_conditioned(&mut rng, 6));
        let g = Metric::new(a.transpose().mul(&a)).unwrap();
        for k in 0..3 {
            let a = smooth(&chart, k, 20 + k as u64);
            let b = smooth(&chart, k + 1, 30 + k as u64);
            let lhs = fd_d(&a).inner(&b, &g).unwrap();
            let rhs = a.inner(&fd_dstar(&b, &g).unwrap(), &g).unwrap();
            assert!((lhs - rhs).abs() < 1e-10 * (1.0 + lhs.abs()), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn chart_mismatch_is_reported() {
        let a = GridField::zeros(&GridChart::new(6, 4, 1.0).unwrap(), 1);
        let b = GridField::zeros(&GridChart::new(6, 4, 2.0).unwrap(), 1);
        assert!(matches!(a.add(&b), Err(Error::ChartMismatch(_))));
    }

    #[test]
    fn csv_dump_lists_every_coefficient() {
        let chart = GridChart::with_counts(vec![4, 1, 1, 1, 1, 1], 1.0).unwrap();
        let f = GridField::constant(&chart, &Form::e(6, &[1]));
        let csv = f.to_csv();
        assert_eq!(csv.lines().count(), 1 + 4 * 6);
        assert!(csv.lines().nth(1).unwrap().starts_with("0,0,1e0"));
    }
}
