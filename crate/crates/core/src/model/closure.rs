//! Discrete closure checks for T²-invariant Spin(7)-structures on
//! `T⁸ = T⁶ × T²`, with the circle directions as the last two axes.

use rand::Rng;

use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::spin7::torsion::{formal_dphi, residual_combination, torsion_residuals, JetPoint};
use crate::spin7::{assemble_phi, lift, Spin7Data};
use crate::su3::{pullback_su3, standard, SU3Structure};

use super::grid::{fd_d, GridChart, GridField, PlaneWaves};

/// Spin(7) data sampled on an 8-dimensional chart.
#[derive(Clone, Debug)]
pub struct Spin7GridData {
    chart: GridChart,
    data: Vec<Spin7Data<f64>>,
    fields: Vec<GridField>,
}

impl Spin7GridData {
    /// Samples `f` at every point. The fields must not vary along the two
    /// circle axes.
    pub fn from_fn(chart: &GridChart, f: impl Fn(&[f64]) -> Result<Spin7Data<f64>>) -> Result<Self> {
        if chart.dim() != 8 {
            return Err(Error::ChartMismatch(format!("Spin(7) data needs an 8-dimensional chart, got {}", chart.dim())));
        }
        let data = (0..chart.len()).map(|p| f(&chart.coords(p))).collect::<Result<Vec<_>>>()?;
        let field = |k: usize, g: &dyn Fn(&Spin7Data<f64>) -> Form<f64>| {
            let mut out = GridField::zeros(chart, k);
            for (p, d) in data.iter().enumerate() {
                out.set(p, &g(d));
            }
            out
        };
        let fields = vec![
            field(2, &|d| lift(&d.su3.omega)),
            field(3, &|d| lift(&d.su3.re_omega)),
            field(3, &|d| lift(&d.su3.im_omega)),
            field(1, &|d| d.eta.clone()),
            field(1, &|d| d.theta.clone()),
            field(0, &|d| Form::constant(8, d.p)),
            field(0, &|d| Form::constant(8, d.q)),
            field(0, &|d| Form::constant(8, d.r)),
        ];
        for f in &fields {
            let tol = 1e-14 * f.max_abs().max(1.0);
            if !(6..8).all(|axis| f.is_invariant_along(axis, tol)) {
                return Err(Error::NotInvariant);
            }
        }
        Ok(Spin7GridData { chart: chart.clone(), data, fields })
    }

    pub fn chart(&self) -> &GridChart {
        &self.chart
    }

    pub fn phi(&self) -> GridField {
        let mut out = GridField::zeros(&self.chart, 4);
        for (p, d) in self.data.iter().enumerate() {
            out.set(p, &assemble_phi(d));
        }
        out
    }

    /// Jets at every point from central differences of the individual fields.
    pub fn jets(&self) -> Vec<JetPoint<f64>> {
        let d: Vec<GridField> = self.fields.iter().map(fd_d).collect();
        self.data
            .iter()
            .enumerate()
            .map(|(p, data)| {
                let j = |i: usize| d[i].at(p).truncate(6);
                JetPoint {
                    data: data.clone(),
                    d_omega: j(0),
                    d_re: j(1),
                    d_im: j(2),
                    d_eta: j(3),
                    d_theta: j(4),
                    dp: j(5),
                    dq: j(6),
                    dr: j(7),
                }
            })
            .collect()
    }
}

/// Random smooth invariant data: the standard structure deformed by
/// `A(x) = I + amplitude·(plane waves)` plus plane-wave `η, θ, p, q, r`.
pub fn smooth_invariant_data(chart: &GridChart, amplitude: f64, seed: u64) -> Result<Spin7GridData> {
    let mut rng = crate::random::rng(seed);
    let base = GridChart::with_counts(chart.counts()[..6].to_vec(), chart.period())?;
    let mats: Vec<PlaneWaves> = (0..6).map(|_| PlaneWaves::random(&base, 1, 2, &mut rng)).collect();
    let eta = PlaneWaves::random(&base, 1, 2, &mut rng);
    let theta = PlaneWaves::random(&base, 1, 2, &mut rng);
    let pqr: Vec<PlaneWaves> = (0..3).map(|_| PlaneWaves::random(&base, 0, 2, &mut rng)).collect();
    let r0: f64 = rng.gen_range(-1.0..1.0);
    let std6 = standard::<f64>();
    Spin7GridData::from_fn(chart, |x| {
        let x6 = &x[..6];
        let rows: Vec<Vec<f64>> = (0..6)
            .map(|i| {
                let w = mats[i].eval(x6);
                (0..6).map(|j| if i == j { 1.0 } else { 0.0 } + amplitude * w.coeffs()[j]).collect()
            })
            .collect();
        let su3 = pullback_su3(&crate::linalg::Matrix::from_rows(rows), &std6)?;
        let s = |w: &PlaneWaves| amplitude * w.eval(x6).coeffs()[0];
        Spin7Data::from_horizontal(
            su3,
            &eta.eval(x6).scale(&amplitude),
            &theta.eval(x6).scale(&amplitude),
            1.0 + s(&pqr[0]),
            1.5 + s(&pqr[1]),
            r0 + s(&pqr[2]),
        )
    })
}

/// Outcome of [`grid_spin7_closure`]; every entry is a largest coefficient
/// over the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosureReport {
    /// `fd_d Φ` applied to the assembled 4-form.
    pub dphi: f64,
    /// `−η∧R_b + θ∧R_c + R_d + η∧θ∧R_a + pq ω∧R_a` from the discrete jets.
    pub combination: f64,
    /// Leibniz-rule `dΦ` from the same jets minus the combination.
    pub leibniz_defect: f64,
    /// `fd_d Φ` minus the combination; central differences do not obey the
    /// product rule, so this is only `O(h²)`.
    pub stencil_defect: f64,
}

pub fn grid_spin7_closure(d: &Spin7GridData) -> Result<ClosureReport> {
    let dphi = fd_d(&d.phi());
    let mut rep = ClosureReport { dphi: dphi.max_abs(), combination: 0.0, leibniz_defect: 0.0, stencil_defect: 0.0 };
    for (p, j) in d.jets().iter().enumerate() {
        let combo = residual_combination(&j.data, &torsion_residuals(j));
        rep.combination = rep.combination.max(combo.max_abs());
        rep.leibniz_defect = rep.leibniz_defect.max((&formal_dphi(j) - &combo).max_abs());
        rep.stencil_defect = rep.stencil_defect.max((&dphi.at(p) - &combo).max_abs());
    }
    Ok(rep)
}

/// Central-difference `d` of a form-valued function at `x`, with spacing
/// `h` along every axis.
pub fn stencil_d(f: &impl Fn(&[f64]) -> Form<f64>, x: &[f64], h: f64) -> Form<f64> {
    let n = x.len();
    let mut out: Option<Form<f64>> = None;
    for i in 0..n {
        let (mut xp, mut xm) = (x.to_vec(), x.to_vec());
        xp[i] += h;
        xm[i] -= h;
        let t = Form::e(n, &[i + 1]).wedge(&(&f(&xp) - &f(&xm)).scale(&(0.5 / h)));
        out = Some(match out {
            None => t,
            Some(acc) => &acc + &t,
        });
    }
    out.expect("nonempty coordinates")
}

const RANDOM_ATTEMPTS: usize = 32;

/// The first-order ansatz on a local trivialization over `T⁶`:
/// `θ₁ = ½ x⌟β` with constant `β ∈ Λ²₈`, so `dθ₁ = β`, and
/// `ρ = ¼ x⌟F` with `F = −p₀⁻¹β∧ω₀`, so `dρ = F`.
#[derive(Clone, Debug)]
pub struct FirstOrderAnsatz {
    pub p0: f64,
    pub su3: SU3Structure<f64>,
    pub beta: Form<f64>,
}

impl FirstOrderAnsatz {
    pub fn new(p0: f64, su3: SU3Structure<f64>, beta: Form<f64>) -> Result<Self> {
        if !(p0 > 0.0) {
            return Err(Error::DegenerateConstants(format!("p0 = {p0}")));
        }
        let split = su3.project2(&beta);
        if !(&split.b8 - &beta).is_negligible(1e-12 * beta.max_abs().max(1.0)) {
            return Err(Error::DecompositionInconsistent("β is not of type Λ²₈".into()));
        }
        Ok(FirstOrderAnsatz { p0, su3, beta })
    }

    /// A random constant structure and a random element of its `Λ²₈`,
    /// scaled to unit largest coefficient.
    /// Draws whose float projection misses `Λ²₈` by more than the membership
    /// tolerance (ill-conditioned pullbacks) are redrawn.
    pub fn random(p0: f64, seed: u64) -> Result<Self> {
        let mut rng = crate::random::rng(seed);
        let mut last = None;
        for _ in 0..RANDOM_ATTEMPTS {
            let a = crate::random::to_f64(&crate::random::gl_plus(&mut rng, 6, 2));
            let su3 = pullback_su3(&a, &standard())?;
            let beta = su3.lambda28_basis().iter().fold(Form::zero(6, 2), |acc, b| &acc + &b.scale(&rng.gen_range(-1.0..1.0)));
            let beta = beta.scale(&(1.0 / beta.max_abs()));
            match Self::new(p0, su3, beta) {
                Err(Error::DecompositionInconsistent(m)) => last = Some(Error::DecompositionInconsistent(m)),
                other => return other,
            }
        }
        Err(last.expect("at least one attempt"))
    }

    pub fn theta1(&self, x: &[f64]) -> Form<f64> {
        self.beta.interior(x).scale(&0.5)
    }

    pub fn rho(&self, x: &[f64]) -> Form<f64> {
        self.beta.wedge(&self.su3.omega).scale(&(-1.0 / self.p0)).interior(x).scale(&0.25)
    }

    /// Largest coefficient of `dρ + p₀⁻¹dθ₁∧ω₀` over `samples` grid points of
    /// `chart`, with both derivatives taken by the chart's central stencil.
    pub fn residual(&self, chart: &GridChart, samples: usize, seed: u64) -> Result<f64> {
        if chart.dim() != 6 || chart.counts().iter().any(|&c| c != chart.counts()[0]) {
            return Err(Error::ChartMismatch("the ansatz needs a uniform 6-dimensional chart".into()));
        }
        let h = chart.h();
        let mut rng = crate::random::rng(seed);
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let x = chart.coords(rng.gen_range(0..chart.len()));
            let d_rho = stencil_d(&|y| self.rho(y), &x, h);
            let d_theta = stencil_d(&|y| self.theta1(y), &x, h);
            let res = &d_rho + &d_theta.wedge(&self.su3.omega).scale(&(1.0 / self.p0));
            worst = worst.max(res.max_abs());
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::grid::fitted_order;

    fn chart(n: usize) -> GridChart {
        GridChart::with_counts(vec![n, n, 1, 1, 1, 1, 1, 1], 1.0).unwrap()
    }

    #[test]
    fn constant_standard_data_is_closed() {
        let d = Spin7GridData::from_fn(&chart(8), |_| Ok(Spin7Data::standard())).unwrap();
        let rep = grid_spin7_closure(&d).unwrap();
        assert!(rep.dphi <= 1e-13 && rep.combination <= 1e-13, "{rep:?}");
    }

    #[test]
    fn discrete_jets_reproduce_the_leibniz_decomposition() {
        let d = smooth_invariant_data(&chart(16), 0.2, 3).unwrap();
        let rep = grid_spin7_closure(&d).unwrap();
        assert!(rep.combination > 1e-2);
        assert!(rep.leibniz_defect <= 1e-12 * rep.combination, "{rep:?}");
    }

    #[test]
    fn stencil_defect_is_second_order() {
        let mut hs = Vec::new();
        let mut defects = Vec::new();
        for n in [16, 32, 64] {
            let rep = grid_spin7_closure(&smooth_invariant_data(&chart(n), 0.2, 4).unwrap()).unwrap();
            hs.push(1.0 / n as f64);
            defects.push(rep.stencil_defect);
        }
        let order = fitted_order(&hs, &defects);
        assert!((order - 2.0).abs() < 0.2, "order {order} from {defects:?}");
    }

    #[test]
    fn variation_along_a_circle_is_rejected() {
        let c = GridChart::with_counts(vec![4, 1, 1, 1, 1, 1, 4, 1], 1.0).unwrap();
        let res = Spin7GridData::from_fn(&c, |x| {
            let s = Spin7Data::standard();
            Spin7Data::from_horizontal(s.su3, &Form::zero(6, 1), &Form::zero(6, 1), 1.0 + 0.1 * x[6], 1.0, 0.0)
        });
        assert!(matches!(res, Err(Error::NotInvariant)));
    }

    #[test]
    fn first_order_ansatz_solves_the_equation() {
        let chart = GridChart::new(6, 32, 1.0).unwrap();
        for seed in 0..3 {
            let a = FirstOrderAnsatz::random(1.0 + seed as f64, seed).unwrap();
            assert!(a.residual(&chart, 200, seed).unwrap() <= 1e-12);
            let d_theta = stencil_d(&|y| a.theta1(y), &[0.3, 0.1, 0.7, 0.2, 0.9, 0.5], 1.0 / 32.0);
            assert!((&d_theta - &a.beta).max_abs() < 1e-13);
        }
    }

    #[test]
    fn ansatz_requires_a_lambda28_form() {
        let s = standard::<f64>();
        assert!(FirstOrderAnsatz::new(1.0, s.clone(), s.omega.clone()).is_err());
        assert!(FirstOrderAnsatz::new(1.0, s.clone(), Form::e(6, &[1, 2]) - Form::e(6, &[3, 4])).is_ok());
        assert!(FirstOrderAnsatz::new(0.0, s, Form::zero(6, 2)).is_err());
    }
}
