use rayon::prelude::*;

use super::polarization::{mode_column, ModeColumn};
use super::{angle_near, cadd, BoundaryFieldGrid, WavePacketData};
use crate::error::{Error, Result};
use crate::grid::Grid2;
use crate::material::BoundaryMetric;
use crate::ray::{BankOptions, ChartBank, Medium, RayContext};
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CauchyOptions {
    /// Use ray charts even when closed forms are available.
    pub force_ray_charts: bool,
    /// Largest angular spacing of the chart bank.
    pub dtheta: f64,
    pub bank: BankOptions,
}

impl Default for CauchyOptions {
    fn default() -> Self {
        Self { force_ray_charts: false, dtheta: 0.05, bank: BankOptions::default() }
    }
}

/// `F(x) = sum_xi exp(i x.xi) G(xi)`, summed one axis at a time.
pub(crate) fn separable_sum(xi_grid: &Grid2, g: &[[C64; 3]], x_grid: &Grid2) -> Vec<[C64; 3]> {
    let [na, nb] = xi_grid.n;
    let [nx, ny] = x_grid.n;
    let xi1: Vec<f64> = (0..na).map(|a| xi_grid.node(a, 0)[0]).collect();
    let xi2: Vec<f64> = (0..nb).map(|b| xi_grid.node(0, b)[1]).collect();
    let x1: Vec<f64> = (0..nx).map(|i| x_grid.node(i, 0)[0]).collect();
    let x2: Vec<f64> = (0..ny).map(|j| x_grid.node(0, j)[1]).collect();
    let zero = [C64::new(0.0, 0.0); 3];
    // rows[j][a] = sum_b exp(i x2_j xi2_b) G[a, b]
    let rows: Vec<Vec<[C64; 3]>> = x2
        .par_iter()
        .map(|&y| {
            let e: Vec<C64> = xi2.iter().map(|&k| C64::from_polar(1.0, y * k)).collect();
            (0..na)
                .map(|a| {
                    let mut acc = zero;
                    for b in 0..nb {
                        cadd(&mut acc, g[xi_grid.index(a, b)], e[b]);
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let e1: Vec<Vec<C64>> = x1.iter().map(|&x| xi1.iter().map(|&k| C64::from_polar(1.0, x * k)).collect()).collect();
    let out: Vec<Vec<[C64; 3]>> = rows
        .par_iter()
        .map(|row| {
            e1.iter()
                .map(|e| {
                    let mut acc = zero;
                    for a in 0..na {
                        cadd(&mut acc, row[a], e[a]);
                    }
                    acc
                })
                .collect()
        })
        .collect();
    out.into_iter().flatten().collect()
}

/// Mode columns at every node, reusing the constant one when possible.
pub(crate) fn columns_on(medium: &Medium, grid: &Grid2) -> Result<Vec<ModeColumn>> {
    if medium.is_constant() {
        let c = mode_column(medium, grid.node_at(0))?;
        return Ok(vec![c; grid.len()]);
    }
    (0..grid.len()).into_par_iter().map(|k| mode_column(medium, grid.node_at(k))).collect()
}

/// Unit frame direction of `xi` at `x`.
#[inline]
pub(crate) fn frame_unit(g: &BoundaryMetric, x: [f64; 2], xi: [f64; 2]) -> [f64; 2] {
    let xt = g.frame_components(x, xi);
    let n = xt[0].hypot(xt[1]);
    [xt[0] / n, xt[1] / n]
}

/// Sum over covectors with phases, gradients and amplitudes read from a
/// chart bank at time `t`:
/// `f(x) = sum_xi col(x, grad phi) a0 exp(i phi) weight(xi) scale(x)`.
pub(crate) fn chart_sum(
    t: f64,
    xi_grid: &Grid2,
    weights: &[C64],
    x_grid: &Grid2,
    medium: &Medium,
    g: &BoundaryMetric,
    opts: &CauchyOptions,
    scale: Option<&[C64]>,
) -> Result<Vec<[C64; 3]>> {
    let support = super::support_of(weights.iter().map(|z| z.norm()));
    if support.is_empty() {
        return Ok(vec![[C64::new(0.0, 0.0); 3]; x_grid.len()]);
    }
    let mut mean = [0.0; 2];
    for &k in &support {
        let xi = xi_grid.node_at(k);
        let w = weights[k].norm();
        let n = xi[0].hypot(xi[1]);
        mean[0] += w * xi[0] / n;
        mean[1] += w * xi[1] / n;
    }
    let theta_c = mean[1].atan2(mean[0]);
    let angles: Vec<f64> = support.iter().map(|&k| angle_near(xi_grid.node_at(k), theta_c)).collect();
    let (mut lo, mut hi) = angles.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if hi - lo < 1e-6 {
        lo -= 1e-3;
        hi += 1e-3;
    }
    let n_theta = (((hi - lo) / opts.dtheta).ceil() as usize + 1).max(2);
    let bank = ChartBank::build(t, lo, hi, n_theta, x_grid, medium, g, &opts.bank)?;
    struct Node {
        theta: f64,
        k: f64,
        j0: usize,
        w: [f64; 4],
        weight: C64,
    }
    let nodes = support
        .iter()
        .zip(&angles)
        .map(|(&k, &theta)| {
            let xi = xi_grid.node_at(k);
            let (j0, w) = bank.weights(theta)?;
            Ok(Node { theta, k: xi[0].hypot(xi[1]), j0, w, weight: weights[k] })
        })
        .collect::<Result<Vec<_>>>()?;
    let cols = columns_on(medium, x_grid)?;
    Ok((0..x_grid.len())
        .into_par_iter()
        .map(|ix| {
            let x = x_grid.node_at(ix);
            let mut acc = [C64::new(0.0, 0.0); 3];
            for nd in &nodes {
                let (phi, grad, a0) = bank.sample(ix, nd.j0, &nd.w, nd.theta, x, nd.k);
                let u = frame_unit(g, x, grad);
                cadd(&mut acc, cols[ix].column(u), a0 * C64::from_polar(1.0, phi) * nd.weight);
            }
            if let Some(s) = scale {
                acc = acc.map(|z| z * s[ix]);
            }
            acc
        })
        .collect())
}

/// Leading-order solution with Cauchy datum `h`:
/// `f(t, x) = sum_xi P(t, x, xi) exp(i phi(t, x, xi)) h^(xi) dxi`.
pub fn cauchy_field(
    packet: &WavePacketData,
    t: f64,
    x_grid: &Grid2,
    medium: &Medium,
    g: &BoundaryMetric,
    opts: &CauchyOptions,
) -> Result<BoundaryFieldGrid> {
    packet.validate()?;
    x_grid.validate()?;
    if !(t >= 0.0) {
        return Err(Error::InvalidInput(format!("synthesis time {t} must be >= 0")));
    }
    let ctx = RayContext::new(medium, g)?;
    let dxi = packet.xi_grid.cell_weight();
    if ctx.is_flat() && !opts.force_ray_charts {
        let x0 = x_grid.node_at(0);
        let col = mode_column(medium, x0)?;
        let support = packet.support();
        let mut gx = vec![[C64::new(0.0, 0.0); 3]; packet.xi_grid.len()];
        for k in support {
            let xi = packet.xi_grid.node_at(k);
            let lam = col.speed * g.norm_unchecked(x0, xi);
            let w = C64::from_polar(dxi, t * lam) * packet.h_hat[k];
            gx[k] = col.column(frame_unit(g, x0, xi)).map(|z| z * w);
        }
        let f = separable_sum(&packet.xi_grid, &gx, x_grid);
        return Ok(BoundaryFieldGrid { t, x_grid: *x_grid, f });
    }
    let weights: Vec<C64> = packet.h_hat.iter().map(|h| h * dxi).collect();
    let f = chart_sum(t, &packet.xi_grid, &weights, x_grid, medium, g, opts, None)?;
    Ok(BoundaryFieldGrid { t, x_grid: *x_grid, f })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::{MaterialField, MaterialPoint};
    use crate::synthesis::GaussianWindow;

    fn flat() -> Medium {
        Medium::Rayleigh(MaterialField::constant(MaterialPoint::new(1.0, 1.0, 1.0).unwrap()).unwrap())
    }

    #[test]
    fn separable_sum_matches_direct_sum() {
        let xg = Grid2::new([-1.0, -0.5], [1.0, 0.5], [4, 3]).unwrap();
        let kg = Grid2::new([1.0, -2.0], [3.0, 2.0], [5, 6]).unwrap();
        let gv: Vec<[C64; 3]> = (0..kg.len())
            .map(|k| [C64::new(k as f64, 1.0), C64::new(0.5, -(k as f64)), C64::new(1.0, 0.0)])
            .collect();
        let f = separable_sum(&kg, &gv, &xg);
        for (ix, x) in xg.nodes().enumerate() {
            let mut acc = [C64::new(0.0, 0.0); 3];
            for (k, xi) in kg.nodes().enumerate() {
                cadd(&mut acc, gv[k], C64::from_polar(1.0, x[0] * xi[0] + x[1] * xi[1]));
            }
            for c in 0..3 {
                assert!((acc[c] - f[ix][c]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn chart_path_reproduces_the_flat_fast_path() {
        let w = GaussianWindow { center: [10.0, 3.0], width: 1.0, x_center: [0.0, 0.0] };
        let packet = WavePacketData::gaussian(w, 24).unwrap();
        let xg = Grid2::new([-1.5, -1.5], [1.5, 1.5], [9, 9]).unwrap();
        let g = BoundaryMetric::identity();
        let m = flat();
        let fast = cauchy_field(&packet, 0.7, &xg, &m, &g, &CauchyOptions::default()).unwrap();
        let opts = CauchyOptions { force_ray_charts: true, ..Default::default() };
        let slow = cauchy_field(&packet, 0.7, &xg, &m, &g, &opts).unwrap();
        let e = slow.relative_l2_error(&fast);
        assert!(e < 1e-10, "{e}");
        let doubled = cauchy_field(&packet.scaled(C64::new(2.0, 0.0)), 0.7, &xg, &m, &g, &Default::default()).unwrap();
        for (a, b) in doubled.f.iter().zip(&fast.f) {
            for k in 0..3 {
                assert_eq!(a[k], b[k] * 2.0);
            }
        }
    }
}
