//! Exact solutions for constant coefficients and the Euclidean metric,
//! used as oracles for the general machinery.

use std::f64::consts::PI;

use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::dispersion::{radicals, rayleigh_derivatives, rayleigh_speed_fast};
use crate::error::{Error, Result};
use crate::grid::Grid2;
use crate::material::{EllipticPoint, MaterialPoint};
use crate::symbol::{dn_matrix, Symbol3};
use crate::synthesis::{separable_sum, SourceData};
use crate::C64;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Constant material with the Euclidean boundary metric. The DN symbol is
/// then an exact multiplier, homogeneous of degree one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FlatModel {
    pub material: MaterialPoint,
    pub c_r: f64,
}

/// Rayleigh scalars of a flat model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FlatScalars {
    pub c_r: f64,
    pub a: f64,
    pub b: f64,
    pub theta_bar: f64,
    /// `R'(c_R)`.
    pub r_prime: f64,
}

impl FlatModel {
    pub fn new(material: MaterialPoint) -> Result<Self> {
        material.validate()?;
        Ok(Self { material, c_r: rayleigh_speed_fast(&material)? })
    }

    pub fn scalars(&self) -> FlatScalars {
        let m = &self.material;
        let c = self.c_r;
        let (a, b, omab, x) = radicals(c, m.rho, m.lam, m.mu);
        let (_, r_prime, _) = rayleigh_derivatives(c, m);
        FlatScalars { c_r: c, a, b, theta_bar: 2.0 * omab - x, r_prime }
    }

    /// `(alpha, beta) = |xi| (a, b)` at `(tau, xi)`.
    pub fn decay_rates(&self, tau: f64, xi: [f64; 2]) -> Result<[f64; 2]> {
        let n = xi[0].hypot(xi[1]);
        let s = self.check(tau, n)?;
        let m = &self.material;
        let (a, b, _, _) = radicals(s, m.rho, m.lam, m.mu);
        Ok([n * a, n * b])
    }

    fn check(&self, tau: f64, n: f64) -> Result<f64> {
        let s = tau / n;
        if !(n > 0.0 && s >= 0.0 && s < self.material.cs()) {
            return Err(Error::OutsideEllipticInterior { reason: format!("tau/|xi| = {s} not in [0, c_s)") });
        }
        Ok(s)
    }
}

/// The DN multiplier `Lambda(tau, xi)` of a flat model.
pub fn flat_dn_multiplier(model: &FlatModel, tau: f64, xi: [f64; 2]) -> Result<Symbol3> {
    model.check(tau, xi[0].hypot(xi[1]))?;
    Ok(Symbol3 {
        entries: dn_matrix(&model.material, tau, xi),
        point: EllipticPoint::new(0.0, [0.0, 0.0], tau, xi),
    })
}

/// `sum_xi exp(i x.xi) Lambda(tau, xi) u^(xi) dxi` on the FFT grid
/// `x_j = j 2 pi / (n dxi)` attached to `xi_grid`. Returns that grid and
/// the samples.
pub fn apply_multiplier_fft(
    model: &FlatModel,
    tau: f64,
    xi_grid: &Grid2,
    u_hat: &[[C64; 3]],
) -> Result<(Grid2, Vec<[C64; 3]>)> {
    let [n0, n1] = xi_grid.n;
    let h = xi_grid.spacing();
    if n0 < 2 || n1 < 2 || u_hat.len() != xi_grid.len() {
        return Err(Error::InvalidInput("FFT application needs a full 2-D spectrum".into()));
    }
    let w = xi_grid.cell_weight();
    let mut comps = vec![vec![C64::new(0.0, 0.0); xi_grid.len()]; 3];
    for (k, xi) in xi_grid.nodes().enumerate() {
        if u_hat[k].iter().all(|z| z.norm() == 0.0) {
            continue;
        }
        let l = flat_dn_multiplier(model, tau, xi)?.entries;
        for r in 0..3 {
            comps[r][k] = (0..3).map(|c| l[(r, c)] * u_hat[k][c]).sum::<C64>() * w;
        }
    }
    let mut planner = FftPlanner::new();
    let f0 = planner.plan_fft_inverse(n0);
    let f1 = planner.plan_fft_inverse(n1);
    for comp in &mut comps {
        for row in comp.chunks_mut(n0) {
            f0.process(row);
        }
        let mut col = vec![C64::new(0.0, 0.0); n1];
        for i in 0..n0 {
            for j in 0..n1 {
                col[j] = comp[j * n0 + i];
            }
            f1.process(&mut col);
            for j in 0..n1 {
                comp[j * n0 + i] = col[j];
            }
        }
    }
    let x_grid = Grid2::new(
        [0.0, 0.0],
        [2.0 * PI / h[0] * (n0 - 1) as f64 / n0 as f64, 2.0 * PI / h[1] * (n1 - 1) as f64 / n1 as f64],
        [n0, n1],
    )?;
    let out = x_grid
        .nodes()
        .enumerate()
        .map(|(k, x)| {
            // shift from the grid origin xi_min
            let e = C64::from_polar(1.0, x[0] * xi_grid.min[0] + x[1] * xi_grid.min[1]);
            [comps[0][k] * e, comps[1][k] * e, comps[2][k] * e]
        })
        .collect();
    Ok((x_grid, out))
}

/// Same sum by direct quadrature at arbitrary points.
pub fn apply_multiplier_dense(
    model: &FlatModel,
    tau: f64,
    xi_grid: &Grid2,
    u_hat: &[[C64; 3]],
    points: &[[f64; 2]],
) -> Result<Vec<[C64; 3]>> {
    let w = xi_grid.cell_weight();
    let mut g = Vec::with_capacity(xi_grid.len());
    for (k, xi) in xi_grid.nodes().enumerate() {
        if u_hat[k].iter().all(|z| z.norm() == 0.0) {
            g.push([C64::new(0.0, 0.0); 3]);
            continue;
        }
        let l = flat_dn_multiplier(model, tau, xi)?.entries;
        let mut v = [C64::new(0.0, 0.0); 3];
        for r in 0..3 {
            v[r] = (0..3).map(|c| l[(r, c)] * u_hat[k][c]).sum::<C64>() * w;
        }
        g.push(v);
    }
    Ok(points
        .iter()
        .map(|x| {
            let mut acc = [C64::new(0.0, 0.0); 3];
            for (k, xi) in xi_grid.nodes().enumerate() {
                let e = C64::from_polar(1.0, x[0] * xi[0] + x[1] * xi[1]);
                for r in 0..3 {
                    acc[r] += g[k][r] * e;
                }
            }
            acc
        })
        .collect())
}

/// Scalar boundary source `g^(s, xi)` for the flat amplitude equation.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatSource {
    pub time_samples: Vec<f64>,
    pub ds: f64,
    pub g_hat: Vec<Vec<C64>>,
}

/// `h1(t, x) = sum_xi exp(i(t c_R |xi| + x.xi)) h^(xi) dxi
/// + sum_{s < t} sum_xi exp(i((t - s) c_R |xi| + x.xi)) g^(s, xi) dxi ds`.
pub fn flat_h1_spectrum(
    model: &FlatModel,
    t: f64,
    xi_grid: &Grid2,
    h_hat: &[C64],
    source: Option<&FlatSource>,
    x_grid: &Grid2,
) -> Result<Vec<C64>> {
    if h_hat.len() != xi_grid.len() {
        return Err(Error::InvalidInput("spectrum does not match its grid".into()));
    }
    let w = xi_grid.cell_weight();
    let c = model.c_r;
    let zero = C64::new(0.0, 0.0);
    let g: Vec<[C64; 3]> = xi_grid
        .nodes()
        .enumerate()
        .map(|(k, xi)| {
            let n = xi[0].hypot(xi[1]);
            let mut acc = h_hat[k] * C64::from_polar(w, t * c * n);
            if let Some(src) = source {
                for (is, &s) in src.time_samples.iter().enumerate() {
                    if s < t {
                        acc += src.g_hat[is][k] * C64::from_polar(w * src.ds, (t - s) * c * n);
                    }
                }
            }
            [acc, zero, zero]
        })
        .collect();
    Ok(separable_sum(xi_grid, &g, x_grid).into_iter().map(|v| v[0]).collect())
}

/// Leading term of the time-harmonic line source `A3 e^{ipt} delta(x1)`:
/// `(A3 e^{ipt}/R'(c_R)) (mu theta (e^{i p x1/c_R} - e^{-i p x1/c_R}), 0,
/// -i b rho c_R^2 (e^{i p x1/c_R} + e^{-i p x1/c_R}))`.
pub fn line_source_closed_form(t: f64, x1: f64, a3: f64, p: f64, model: &FlatModel) -> Result<[C64; 3]> {
    if !(p > 0.0) {
        return Err(Error::NonPositiveParameter { name: "p", value: p });
    }
    let s = model.scalars();
    let m = &model.material;
    let pre = C64::from_polar(a3 / s.r_prime, p * t);
    let (ep, em) = (C64::from_polar(1.0, p * x1 / s.c_r), C64::from_polar(1.0, -p * x1 / s.c_r));
    Ok([
        pre * m.mu * s.theta_bar * (ep - em),
        C64::new(0.0, 0.0),
        pre * (-I) * s.b * m.rho * s.c_r * s.c_r * (ep + em),
    ])
}

/// Time-harmonic line source `A3 exp(i p s) w(s) delta(x1)` with a Gaussian
/// window `w` (peak 1) centred at `duration / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LineSource {
    pub a3: f64,
    pub p: f64,
    /// Window standard deviation.
    pub sigma: f64,
    pub duration: f64,
    pub ds: f64,
    /// Covector line `|xi1| <= xi_max`, `xi2 = 0`, with spacing `dxi`.
    pub xi_max: f64,
    pub dxi: f64,
}

impl Default for LineSource {
    fn default() -> Self {
        Self { a3: 1.0, p: 10.0, sigma: 40.0, duration: 320.0, ds: 0.1, xi_max: 13.0, dxi: 5e-3 }
    }
}

impl LineSource {
    pub fn mid_window(&self) -> f64 {
        0.5 * self.duration
    }

    /// Spectra on a one-row covector grid (unit weight in `xi2`):
    /// `l3^(s, xi1) = A3 exp(i p s) w(s) / (2 pi)`.
    pub fn source_data(&self) -> Result<SourceData> {
        for (name, v) in [("p", self.p), ("sigma", self.sigma), ("duration", self.duration), ("ds", self.ds), ("xi_max", self.xi_max), ("dxi", self.dxi)] {
            if !(v > 0.0) {
                return Err(Error::NonPositiveParameter { name, value: v });
            }
        }
        let half = (self.xi_max / self.dxi).round() as usize;
        let xm = half as f64 * self.dxi;
        let xi_grid = Grid2::new([-xm, 0.0], [xm, 0.0], [2 * half + 1, 1])?;
        let ns = (self.duration / self.ds).floor() as usize;
        let time_samples: Vec<f64> = (1..=ns).map(|k| k as f64 * self.ds).collect();
        let s0 = self.mid_window();
        let l_hat = time_samples
            .iter()
            .map(|&s| {
                let w = (-(s - s0).powi(2) / (2.0 * self.sigma * self.sigma)).exp();
                let l3 = C64::from_polar(self.a3 * w / (2.0 * PI), self.p * s);
                vec![[C64::new(0.0, 0.0), C64::new(0.0, 0.0), l3]; xi_grid.len()]
            })
            .collect();
        Ok(SourceData {
            time_samples,
            ds: self.ds,
            t_end: self.duration,
            xi_grid,
            l_hat,
            q_hat: None,
            origin: [0.0, 0.0],
        })
    }
}

/// Regularized impulsive line source `A3 delta(t) delta(x1)`:
/// `f = (-A3 mu theta I1, 0, i A3 b rho c_R^2 I2) / R'(c_R)` with
/// `delta -> ` a Gaussian of width `eps` and `p.v. 1/y -> y/(y^2 + eps^2)`.
pub fn impulse_closed_form(t: f64, x1: f64, a3: f64, eps: f64, model: &FlatModel) -> Result<[C64; 3]> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveParameter { name: "t", value: t });
    }
    if !(eps > 0.0) {
        return Err(Error::NonPositiveParameter { name: "eps", value: eps });
    }
    let s = model.scalars();
    let m = &model.material;
    let delta = |y: f64| (-y * y / (2.0 * eps * eps)).exp() / (eps * (2.0 * PI).sqrt());
    let pv = |y: f64| y / (y * y + eps * eps);
    let (yp, ym) = (t * s.c_r + x1, t * s.c_r - x1);
    // int_0^inf e^{i k y} dk = pi delta(y) + i p.v. 1/y
    let i1 = C64::new(PI * (delta(yp) - delta(ym)), pv(yp) - pv(ym));
    let i2 = C64::new(PI * (delta(yp) + delta(ym)), pv(yp) + pv(ym));
    Ok([
        -a3 * m.mu * s.theta_bar * i1 / s.r_prime,
        C64::new(0.0, 0.0),
        I * a3 * s.b * m.rho * s.c_r * s.c_r * i2 / s.r_prime,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poisson() -> FlatModel {
        FlatModel::new(MaterialPoint::new(1.0, 1.0, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn multiplier_is_exactly_homogeneous() {
        let m = poisson();
        let (tau, xi) = (0.7, [0.4, -1.3]);
        let a = flat_dn_multiplier(&m, tau, xi).unwrap().entries;
        let b = flat_dn_multiplier(&m, 2.0 * tau, [2.0 * xi[0], 2.0 * xi[1]]).unwrap().entries;
        assert_eq!(b, a * C64::new(2.0, 0.0));
        assert!(flat_dn_multiplier(&m, 10.0, xi).is_err());
    }

    #[test]
    fn line_source_structure() {
        let m = poisson();
        let (p, a3) = (3.0, 1.0);
        let f0 = line_source_closed_form(0.4, 0.0, a3, p, &m).unwrap();
        assert!(f0[0].norm() < 1e-15);
        let z = line_source_closed_form(0.4, PI * m.c_r / (2.0 * p), a3, p, &m).unwrap();
        assert!(z[2].norm() < 1e-14);
        let x = 0.37;
        let f = line_source_closed_form(0.4, x, a3, p, &m).unwrap();
        let g = line_source_closed_form(0.4 + 2.0 * PI / p, x, a3, p, &m).unwrap();
        let r = line_source_closed_form(0.4, -x, a3, p, &m).unwrap();
        for k in 0..3 {
            assert!((f[k] - g[k]).norm() < 1e-13);
        }
        assert!((f[0] + r[0]).norm() < 1e-15 && (f[2] - r[2]).norm() < 1e-15);
    }

    #[test]
    fn impulse_peaks_at_the_wavefronts() {
        let m = poisson();
        let (t, eps) = (2.0, 0.01);
        let xs: Vec<f64> = (0..4001).map(|k| -3.0 + k as f64 * 1.5e-3).collect();
        let mag: Vec<f64> = xs.iter().map(|&x| impulse_closed_form(t, x, 1.0, eps, &m).unwrap()[2].norm()).collect();
        let best = |lo: f64, hi: f64| {
            xs.iter().zip(&mag).filter(|(x, _)| **x > lo && **x < hi).fold((0.0, 0.0), |b, (x, v)| if *v > b.1 { (*x, *v) } else { b })
        };
        let front = t * m.c_r;
        assert!((best(0.0, 3.0).0 - front).abs() < eps);
        assert!((best(-3.0, 0.0).0 + front).abs() < eps);
        assert!(xs.iter().all(|&x| impulse_closed_form(t, x, 1.0, eps, &m).unwrap()[1] == C64::new(0.0, 0.0)));
    }

    #[test]
    fn fft_application_matches_dense_quadrature() {
        let m = poisson();
        let kg = Grid2::new([2.0, -3.0], [8.0, 3.0], [32, 32]).unwrap();
        let u_hat: Vec<[C64; 3]> = kg
            .nodes()
            .map(|xi| {
                let e = (-((xi[0] - 5.0).powi(2) + xi[1].powi(2)) / 2.0).exp();
                [C64::new(e, 0.0), C64::new(0.0, 0.5 * e), C64::new(-e, e)]
            })
            .collect();
        let tau = 0.5 * m.c_r * 2.0;
        let (xg, fft) = apply_multiplier_fft(&m, tau, &kg, &u_hat).unwrap();
        let picks = [0usize, 5, 77, 500, 1023];
        let pts: Vec<[f64; 2]> = picks.iter().map(|&k| xg.node_at(k)).collect();
        let dense = apply_multiplier_dense(&m, tau, &kg, &u_hat, &pts).unwrap();
        for (i, &k) in picks.iter().enumerate() {
            for c in 0..3 {
                assert!((fft[k][c] - dense[i][c]).norm() < 1e-10 * (1.0 + dense[i][c].norm()));
            }
        }
    }
}
