use super::cauchy::{chart_sum, columns_on, frame_unit, separable_sum, CauchyOptions};
use super::polarization::mode_column;
use super::{BoundaryFieldGrid, SourceData, WavePacketData};
use crate::error::{Error, Result};
use crate::grid::Grid2;
use crate::material::{BoundaryMetric, MaterialPair};
use crate::ray::{Medium, RayContext};
use crate::symbol::dn_matrix;
use crate::C64;

pub type SourceOptions = CauchyOptions;

/// Scalar source amplitude `conj(w1) . v(s, xi)` for every time sample and
/// covector, with coefficients frozen at `src.origin`. For interfaces the
/// effective source is `q - Lambda+ l`.
fn projected(src: &SourceData, medium: &Medium, g: &BoundaryMetric) -> Result<(Vec<Vec<C64>>, f64)> {
    let o = src.origin;
    let col = mode_column(medium, o)?;
    let plus = match medium {
        Medium::Stoneley(p) => Some(p.at(o).plus),
        Medium::Rayleigh(_) => None,
    };
    let zero = [C64::new(0.0, 0.0); 3];
    let rows = src
        .l_hat
        .iter()
        .enumerate()
        .map(|(is, ls)| {
            ls.iter()
                .enumerate()
                .map(|(k, l)| {
                    let xi = src.xi_grid.node_at(k);
                    if xi == [0.0, 0.0] {
                        return C64::new(0.0, 0.0);
                    }
                    let u = frame_unit(g, o, xi);
                    let v = match &plus {
                        None => *l,
                        Some(m) => {
                            let xt = g.frame_components(o, xi);
                            let tau = col.speed * xt[0].hypot(xt[1]);
                            let lam = dn_matrix(m, tau, xt);
                            let q = src.q_hat.as_ref().map_or(zero, |q| q[is][k]);
                            let mut v = q;
                            for r in 0..3 {
                                for c in 0..3 {
                                    v[r] -= lam[(r, c)] * l[c];
                                }
                            }
                            v
                        }
                    };
                    col.project(u, v)
                })
                .collect()
        })
        .collect();
    Ok((rows, col.speed))
}

/// Large-time form of the source-driven solution (Heaviside factors
/// dropped):
/// `f(t, x) = sum_s sum_xi col(x) a0 exp(i phi(t - s, x, xi)) e0^{-1}(x)
/// conj(w1) . l^(s, xi) dxi ds`.
pub fn large_t_field(
    src: &SourceData,
    t: f64,
    x_grid: &Grid2,
    medium: &Medium,
    g: &BoundaryMetric,
    opts: &SourceOptions,
) -> Result<BoundaryFieldGrid> {
    src.validate()?;
    x_grid.validate()?;
    let ctx = RayContext::new(medium, g)?;
    let (proj, speed) = projected(src, medium, g)?;
    let dxi = src.xi_grid.cell_weight();
    let n_xi = src.xi_grid.len();
    if ctx.is_flat() && !opts.force_ray_charts {
        // phi(t - s) = phi(t) - s c |xi|_g: collapse the time sum first
        let x0 = x_grid.node_at(0);
        let col = mode_column(medium, x0)?;
        let mut gx = vec![[C64::new(0.0, 0.0); 3]; n_xi];
        for (k, gk) in gx.iter_mut().enumerate() {
            let xi = src.xi_grid.node_at(k);
            if xi == [0.0, 0.0] {
                continue;
            }
            let lam = speed * g.norm_unchecked(x0, xi);
            let mut acc = C64::new(0.0, 0.0);
            for (is, &s) in src.time_samples.iter().enumerate() {
                acc += proj[is][k] * C64::from_polar(1.0, -s * lam);
            }
            let w = acc * C64::from_polar(src.ds * dxi, t * lam) * col.e0_inv;
            *gk = col.column(frame_unit(g, x0, xi)).map(|z| z * w);
        }
        return Ok(BoundaryFieldGrid { t, x_grid: *x_grid, f: separable_sum(&src.xi_grid, &gx, x_grid) });
    }
    let e0_inv: Vec<C64> = columns_on(medium, x_grid)?.iter().map(|c| c.e0_inv).collect();
    let mut out = BoundaryFieldGrid::zeros(t, *x_grid);
    for (is, &s) in src.time_samples.iter().enumerate() {
        if proj[is].iter().all(|z| z.norm() == 0.0) {
            continue;
        }
        if s > t {
            return Err(Error::SourceNotExpired { t, t_end: s });
        }
        let weights: Vec<C64> = proj[is].iter().map(|z| z * (src.ds * dxi)).collect();
        let f = chart_sum(t - s, &src.xi_grid, &weights, x_grid, medium, g, opts, Some(&e0_inv))?;
        out.f = out.f.iter().zip(&f).map(|(a, b)| [a[0] + b[0], a[1] + b[1], a[2] + b[2]]).collect();
    }
    Ok(out)
}

/// Source-driven solution after the source has switched off (`t >= T`).
pub fn inhomogeneous_field(
    src: &SourceData,
    t: f64,
    x_grid: &Grid2,
    medium: &Medium,
    g: &BoundaryMetric,
    opts: &SourceOptions,
) -> Result<BoundaryFieldGrid> {
    if t < src.t_end {
        return Err(Error::SourceNotExpired { t, t_end: src.t_end });
    }
    large_t_field(src, t, x_grid, medium, g, opts)
}

pub enum StoneleyInput<'a> {
    Packet(&'a WavePacketData),
    Source(&'a SourceData),
}

/// Interface displacement on both sides; `f+ = l + f-`, and `l` has
/// switched off once the source has expired.
#[derive(Clone, Debug, PartialEq)]
pub struct StoneleyField {
    pub minus: BoundaryFieldGrid,
    pub plus: BoundaryFieldGrid,
}

pub fn stoneley_field(
    input: StoneleyInput<'_>,
    pair: &MaterialPair,
    t: f64,
    x_grid: &Grid2,
    g: &BoundaryMetric,
    opts: &SourceOptions,
) -> Result<StoneleyField> {
    let medium = Medium::Stoneley(pair.clone());
    let minus = match input {
        StoneleyInput::Packet(p) => super::cauchy_field(p, t, x_grid, &medium, g, opts)?,
        StoneleyInput::Source(s) => inhomogeneous_field(s, t, x_grid, &medium, g, opts)?,
    };
    Ok(StoneleyField { plus: minus.clone(), minus })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::{MaterialField, MaterialPoint};

    fn flat() -> Medium {
        Medium::Rayleigh(MaterialField::constant(MaterialPoint::new(1.0, 1.0, 1.0).unwrap()).unwrap())
    }

    fn source(amp: f64) -> SourceData {
        let grid = Grid2::new([-4.0, -4.0], [4.0, 4.0], [12, 12]).unwrap();
        let times: Vec<f64> = (1..=4).map(|k| k as f64 * 0.5).collect();
        let l_hat = times
            .iter()
            .map(|&s| {
                grid.nodes()
                    .map(|xi| {
                        let e = (-(xi[0] * xi[0] + xi[1] * xi[1]) / 4.0).exp() * amp;
                        [C64::new(0.0, e * s), C64::new(e, 0.0), C64::from_polar(e, s)]
                    })
                    .collect()
            })
            .collect();
        SourceData { time_samples: times, ds: 0.5, t_end: 2.0, xi_grid: grid, l_hat, q_hat: None, origin: [0.0, 0.0] }
    }

    #[test]
    fn source_fields_are_linear() {
        let xg = Grid2::new([-1.0, -1.0], [1.0, 1.0], [5, 5]).unwrap();
        let (m, g) = (flat(), BoundaryMetric::identity());
        let o = SourceOptions::default();
        let zero = inhomogeneous_field(&source(1.0).zero_like(), 3.0, &xg, &m, &g, &o).unwrap();
        assert_eq!(zero.max_abs(), 0.0);
        let (a, b) = (source(1.0), source(0.5));
        let fa = inhomogeneous_field(&a, 3.0, &xg, &m, &g, &o).unwrap();
        let fb = inhomogeneous_field(&b, 3.0, &xg, &m, &g, &o).unwrap();
        let fab = inhomogeneous_field(&a.add(&b).unwrap(), 3.0, &xg, &m, &g, &o).unwrap();
        assert!(fab.relative_l2_error(&fa.add(&fb)) < 1e-12);
        assert!(matches!(
            inhomogeneous_field(&a, 1.0, &xg, &m, &g, &o),
            Err(Error::SourceNotExpired { .. })
        ));
    }

    #[test]
    fn chart_path_matches_collapsed_time_sum() {
        let xg = Grid2::new([-1.0, -1.0], [1.0, 1.0], [4, 4]).unwrap();
        let (m, g) = (flat(), BoundaryMetric::identity());
        let src = source(1.0);
        let fast = large_t_field(&src, 2.5, &xg, &m, &g, &SourceOptions::default()).unwrap();
        let bank = crate::ray::BankOptions { seed_spacing: 0.5, ..Default::default() };
        let opts = SourceOptions { force_ray_charts: true, dtheta: 0.2, bank };
        let slow = large_t_field(&src, 2.5, &xg, &m, &g, &opts).unwrap();
        assert!(slow.relative_l2_error(&fast) < 1e-10, "{}", slow.relative_l2_error(&fast));
    }
}
