//! Extension of boundary data into the solid as evanescent modes:
//! `u(x3) = U diag(e^{-alpha x3}, e^{-alpha x3}, e^{-beta x3}) U^{-1} f`,
//! with coefficients frozen at each boundary point.

use rayon::prelude::*;
use serde::Serialize;

use super::cauchy::separable_sum;
use super::polarization::mode_column;
use crate::error::{Error, Result};
use crate::grid::Grid2;
use crate::material::{BoundaryMetric, MaterialPoint};
use crate::ray::Medium;
use crate::symbol::{restriction_matrices, Mat3, Vec3};
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModeSample {
    pub x3: f64,
    /// Mode amplitudes `D(x3) U^{-1} f`.
    pub w: [[f64; 2]; 3],
    /// Displacement `U w`.
    pub u: [[f64; 2]; 3],
}

fn pack(v: &Vec3) -> [[f64; 2]; 3] {
    [[v[0].re, v[0].im], [v[1].re, v[1].im], [v[2].re, v[2].im]]
}

fn decay(ab: [f64; 2], depth: f64) -> [f64; 3] {
    [(-ab[0] * depth).exp(), (-ab[0] * depth).exp(), (-ab[1] * depth).exp()]
}

/// Depth profile of a single boundary mode `f exp(i x.xi)` at `tau` in a
/// constant medium (frame covector `xt`). Returns the samples and
/// `(alpha, beta)`.
pub fn evanescent_mode(
    m: &MaterialPoint,
    tau: f64,
    xt: [f64; 2],
    f: [C64; 3],
    depths: &[f64],
) -> Result<(Vec<ModeSample>, [f64; 2])> {
    let (u, ui, ab) = restriction_matrices(m, tau, xt)?;
    let fv = Vec3::new(f[0], f[1], f[2]);
    let w0 = ui * fv;
    let samples = depths
        .iter()
        .map(|&x3| {
            if x3 < 0.0 {
                return Err(Error::InvalidInput(format!("depth {x3} must be >= 0")));
            }
            let d = decay(ab, x3);
            let w = Vec3::new(w0[0] * d[0], w0[1] * d[1], w0[2] * d[2]);
            // U U^{-1} = I: the trace is reproduced verbatim
            let uu = if x3 == 0.0 { fv } else { u * w };
            Ok(ModeSample { x3, w: pack(&w), u: pack(&uu) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((samples, ab))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BulkSample {
    pub x3: f64,
    pub u: Vec<[C64; 3]>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BulkField {
    pub x_grid: Grid2,
    pub samples: Vec<BulkSample>,
    /// Smallest `min(alpha, beta) / |xi|_g` met, the decay floor.
    pub decay_floor: f64,
    /// Whether `alpha <= beta` held at every point used.
    pub ordered: bool,
}

/// Operator `U D(|x3|) U^{-1}` at one point, with the reflection
/// `R = diag(1, 1, -1)` on the lower side of an interface.
fn propagator(m: &MaterialPoint, tau: f64, xt: [f64; 2], depth: f64, reflect: bool) -> Result<(Mat3, [f64; 2])> {
    let (u, ui, ab) = restriction_matrices(m, tau, xt)?;
    let d = decay(ab, depth);
    let dm = Mat3::from_diagonal(&Vec3::new(C64::new(d[0], 0.0), C64::new(d[1], 0.0), C64::new(d[2], 0.0)));
    let mut p = u * dm * ui;
    if reflect {
        let r = Mat3::from_diagonal(&Vec3::new(C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(-1.0, 0.0)));
        p = r * p * r;
    }
    Ok((p, ab))
}

fn side_material(medium: &Medium, x: [f64; 2], x3: f64) -> (MaterialPoint, bool) {
    match medium {
        Medium::Rayleigh(f) => (f.point(x), false),
        Medium::Stoneley(p) => {
            let b = p.at(x);
            if x3 >= 0.0 {
                (b.plus, false)
            } else {
                (b.minus, true)
            }
        }
    }
}

/// Bulk displacement `u(x', x3) = sum_xi exp(i x'.xi) U D U^{-1} f^(xi) dxi`
/// for boundary spectra lying on the characteristic variety
/// (`tau = c(x')|xi|_g`). Surfaces need `x3 >= 0`; for interfaces negative
/// depths select the lower solid.
pub fn evanescent_profile(
    xi_grid: &Grid2,
    f_hat: &[[C64; 3]],
    x_grid: &Grid2,
    depths: &[f64],
    medium: &Medium,
    g: &BoundaryMetric,
) -> Result<BulkField> {
    if f_hat.len() != xi_grid.len() {
        return Err(Error::InvalidInput("boundary spectrum must match its covector grid".into()));
    }
    if matches!(medium, Medium::Rayleigh(_)) {
        if let Some(&d) = depths.iter().find(|&&d| d < 0.0) {
            return Err(Error::InvalidInput(format!("depth {d} must be >= 0 below a free surface")));
        }
    }
    let support = super::support_of(f_hat.iter().map(|v| v.iter().map(|z| z.norm()).sum::<f64>()));
    let dxi = xi_grid.cell_weight();
    let flat = medium.is_constant() && g.is_constant();
    let mut floor = f64::INFINITY;
    let mut ordered = true;
    let mut samples = Vec::with_capacity(depths.len());
    for &x3 in depths {
        let u = if x3 == 0.0 {
            let mut gx = vec![[C64::new(0.0, 0.0); 3]; xi_grid.len()];
            for &k in &support {
                gx[k] = f_hat[k].map(|z| z * dxi);
            }
            separable_sum(xi_grid, &gx, x_grid)
        } else if flat {
            let x0 = x_grid.node_at(0);
            let c = mode_column(medium, x0)?.speed;
            let (m, reflect) = side_material(medium, x0, x3);
            let mut gx = vec![[C64::new(0.0, 0.0); 3]; xi_grid.len()];
            for &k in &support {
                let xi = xi_grid.node_at(k);
                let xt = g.frame_components(x0, xi);
                let n = xt[0].hypot(xt[1]);
                let (p, ab) = propagator(&m, c * n, xt, x3.abs(), reflect)?;
                floor = floor.min(ab[0].min(ab[1]) / n);
                ordered &= ab[0] <= ab[1];
                let v = p * Vec3::new(f_hat[k][0], f_hat[k][1], f_hat[k][2]) * C64::new(dxi, 0.0);
                gx[k] = [v[0], v[1], v[2]];
            }
            separable_sum(xi_grid, &gx, x_grid)
        } else {
            let rows = (0..x_grid.len())
                .into_par_iter()
                .map(|ix| {
                    let x = x_grid.node_at(ix);
                    let c = mode_column(medium, x)?.speed;
                    let (m, reflect) = side_material(medium, x, x3);
                    let mut acc = Vec3::zeros();
                    let mut fl = f64::INFINITY;
                    let mut ord = true;
                    for &k in &support {
                        let xi = xi_grid.node_at(k);
                        let xt = g.frame_components(x, xi);
                        let n = xt[0].hypot(xt[1]);
                        let (p, ab) = propagator(&m, c * n, xt, x3.abs(), reflect)?;
                        fl = fl.min(ab[0].min(ab[1]) / n);
                        ord &= ab[0] <= ab[1];
                        let e = C64::from_polar(dxi, x[0] * xi[0] + x[1] * xi[1]);
                        acc += p * Vec3::new(f_hat[k][0], f_hat[k][1], f_hat[k][2]) * e;
                    }
                    Ok(([acc[0], acc[1], acc[2]], fl, ord))
                })
                .collect::<Result<Vec<_>>>()?;
            for r in &rows {
                floor = floor.min(r.1);
                ordered &= r.2;
            }
            rows.into_iter().map(|r| r.0).collect()
        };
        samples.push(BulkSample { x3, u });
    }
    Ok(BulkField { x_grid: *x_grid, samples, decay_floor: floor, ordered })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::rayleigh_speed_fast;

    #[test]
    fn single_mode_log_slopes() {
        let m = MaterialPoint::new(1.0, 1.0, 1.0).unwrap();
        let c = rayleigh_speed_fast(&m).unwrap();
        let xt = [3.0, 4.0];
        let f = [C64::new(0.2, 0.1), C64::new(-0.3, 0.0), C64::new(0.0, 1.0)];
        let depths: Vec<f64> = (0..6).map(|k| k as f64 * 0.1).collect();
        let (s, ab) = evanescent_mode(&m, 5.0 * c, xt, f, &depths).unwrap();
        assert!(ab[0] <= ab[1]);
        for k in 0..3 {
            assert_eq!(s[0].u[k], [f[k].re, f[k].im]);
        }
        let mag = |w: [f64; 2]| w[0].hypot(w[1]);
        for (comp, rate) in [(0, ab[0]), (1, ab[0]), (2, ab[1])] {
            let slope = (mag(s[5].w[comp]).ln() - mag(s[0].w[comp]).ln()) / 0.5;
            assert!((slope + rate).abs() < 1e-9, "{comp}: {slope} vs {rate}");
        }
    }
}
