//! Polarization columns, motion ellipses and the retrograde test.

use serde::{Deserialize, Serialize};

use crate::dispersion::{radicals, rayleigh_derivatives, rayleigh_speed_fast, stoneley_entries, stoneley_m1_derivatives, stoneley_speed};
use crate::error::{Error, Result};
use crate::grid::Grid2;
use crate::material::{Bimaterial, BoundaryMetric, EllipticPoint, MaterialPoint};
use crate::ray::{phase_chart, ChartOptions, Medium, RayContext};
use crate::C64;

/// Tolerance (relative) for a point to count as lying on the
/// characteristic variety.
pub const ROOT_TOL: f64 = 1e-8;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// The mode's eigencolumn `(i h xi_hat, v) / k1` at the root, with the
/// inverse elliptic factor used by source-driven fields.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModeColumn {
    pub speed: f64,
    pub horiz: f64,
    pub vert: f64,
    pub k1: f64,
    pub e0_inv: C64,
}

impl ModeColumn {
    /// Column for the unit frame direction `u`.
    #[inline]
    pub fn column(&self, u: [f64; 2]) -> [C64; 3] {
        let h = self.horiz / self.k1;
        [C64::new(0.0, h * u[0]), C64::new(0.0, h * u[1]), C64::new(self.vert / self.k1, 0.0)]
    }

    /// `conj(column) . l`.
    #[inline]
    pub fn project(&self, u: [f64; 2], l: [C64; 3]) -> C64 {
        let h = self.horiz / self.k1;
        -I * h * (l[0] * u[0] + l[1] * u[1]) + l[2] * (self.vert / self.k1)
    }

    /// `|p3| / |p_h|` of the motion ellipse.
    pub fn axis_ratio(&self) -> f64 {
        (self.vert / self.horiz).abs()
    }
}

/// Rayleigh column: `h = mu theta_bar`, `v = b rho c_R^2`, normalized by
/// `k1 = hypot(h, v)`; `e0^{-1} = i (a + b) rho c_R^2 / R'(c_R)`.
pub fn rayleigh_column(m: &MaterialPoint) -> Result<ModeColumn> {
    let c = rayleigh_speed_fast(m)?;
    let (a, b, omab, x) = radicals(c, m.rho, m.lam, m.mu);
    let theta = 2.0 * omab - x;
    let horiz = m.mu * theta;
    let vert = b * m.rho * c * c;
    let (_, d1, _) = rayleigh_derivatives(c, m);
    Ok(ModeColumn { speed: c, horiz, vert, k1: horiz.hypot(vert), e0_inv: I * (a + b) * m.rho * c * c / d1 })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StoneleyZeta {
    pub zeta1: f64,
    pub zeta2: f64,
    pub kappa_plus: f64,
    pub kappa_minus: f64,
}

/// `zeta1 = 2(mu+ - mu-) - (kappa+ - kappa-)`, `zeta2 = b+ kappa+ + b- kappa-`
/// with `kappa = rho c^2 / (1 - a b)` on each side.
pub fn stoneley_zeta(pair: &Bimaterial, c: f64) -> StoneleyZeta {
    let side = |m: &MaterialPoint| {
        let (_, b, omab, _) = radicals(c, m.rho, m.lam, m.mu);
        (b, m.rho * c * c / omab)
    };
    let (bp, kp) = side(&pair.plus);
    let (bm, km) = side(&pair.minus);
    StoneleyZeta {
        zeta1: 2.0 * (pair.plus.mu - pair.minus.mu) - (kp - km),
        zeta2: bp * kp + bm * km,
        kappa_plus: kp,
        kappa_minus: km,
    }
}

/// Stoneley column `(i zeta1 xi_hat, zeta2) / k1`; `e0^{-1} = i / m1'(c_ST)`.
pub fn stoneley_column(pair: &Bimaterial) -> Result<ModeColumn> {
    let (c, _) = stoneley_speed(pair)?.require()?;
    Ok(stoneley_column_at(pair, c))
}

fn stoneley_column_at(pair: &Bimaterial, c: f64) -> ModeColumn {
    let p = [pair.plus.rho, pair.plus.lam, pair.plus.mu];
    let q = [pair.minus.rho, pair.minus.lam, pair.minus.mu];
    let (m11, _, z) = stoneley_entries(c, p, q);
    let (_, d1, _) = stoneley_m1_derivatives(c, pair);
    ModeColumn { speed: c, horiz: z, vert: m11, k1: z.hypot(m11), e0_inv: I / d1 }
}

/// Column of the medium's surface (or interface) mode at `x`.
pub fn mode_column(medium: &Medium, x: [f64; 2]) -> Result<ModeColumn> {
    match medium {
        Medium::Rayleigh(f) => rayleigh_column(&f.point(x)),
        Medium::Stoneley(p) => {
            let b = p.at(x);
            let c = medium.speed(x, None)?;
            Ok(stoneley_column_at(&b, c))
        }
    }
}

/// Propagation frame: horizontal direction `d = -xi_hat` and the upward
/// normal `(0, 0, -1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Frame {
    pub direction: [f64; 2],
    pub up: [f64; 3],
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PolarizationSample {
    pub t: f64,
    /// `|a0|` times the mode column.
    pub p: [[f64; 2]; 3],
    pub re_p: [f64; 3],
    pub im_p: [f64; 3],
    /// `phi + upsilon`.
    pub phase: f64,
    pub frame: Frame,
    pub horiz: f64,
    pub vert: f64,
    pub k1: f64,
    pub a0_abs: f64,
    /// Relative defect of `|Re P_h|^2/h^2 + (Re P_3)^2/v^2 = |a0|^2/k1^2`
    /// (worst of the real and imaginary parts).
    pub ellipsoid_residual: f64,
}

impl PolarizationSample {
    pub fn complex_p(&self) -> [C64; 3] {
        self.p.map(|z| C64::new(z[0], z[1]))
    }

    /// Displacement `Re` or `Im` of `P exp(i (phi + upsilon))`.
    pub fn displacement(&self, part: SeriesPart) -> [f64; 3] {
        let e = C64::from_polar(1.0, self.phase);
        self.complex_p().map(|z| match part {
            SeriesPart::Real => (z * e).re,
            SeriesPart::Imag => (z * e).im,
        })
    }

    /// Same sample with `P` replaced by its conjugate.
    pub fn conjugated(&self) -> Self {
        let p = self.p.map(|z| [z[0], -z[1]]);
        Self { p, im_p: self.im_p.map(|v| -v), ..*self }
    }
}

fn sample(t: f64, col: &ModeColumn, u: [f64; 2], a0: C64, phi: f64) -> PolarizationSample {
    let a = a0.norm();
    let c = col.column(u).map(|z| z * a);
    let re_p = c.map(|z| z.re);
    let im_p = c.map(|z| z.im);
    let target = a * a / (col.k1 * col.k1);
    let defect = |v: [f64; 3]| {
        let lhs = (v[0] * v[0] + v[1] * v[1]) / (col.horiz * col.horiz) + v[2] * v[2] / (col.vert * col.vert);
        if target > 0.0 {
            (lhs - target).abs() / target
        } else {
            lhs
        }
    };
    PolarizationSample {
        t,
        p: c.map(|z| [z.re, z.im]),
        re_p,
        im_p,
        phase: phi + a0.arg(),
        frame: Frame { direction: [-u[0], -u[1]], up: [0.0, 0.0, -1.0] },
        horiz: col.horiz,
        vert: col.vert,
        k1: col.k1,
        a0_abs: a,
        ellipsoid_residual: defect(re_p).max(defect(im_p)),
    }
}

fn unit_frame(g: &BoundaryMetric, x: [f64; 2], xi: [f64; 2]) -> Result<[f64; 2]> {
    let xt = g.frame_components(x, xi);
    let n = xt[0].hypot(xt[1]);
    if !(n > 0.0) {
        return Err(Error::InvalidInput("zero covector".into()));
    }
    Ok([xt[0] / n, xt[1] / n])
}

/// Polarization of the Rayleigh mode at a point of the characteristic
/// variety; `phi` is the phase carried along for time series.
pub fn rayleigh_polarization(
    pt: &EllipticPoint,
    a0: C64,
    phi: f64,
    medium: &crate::material::MaterialField,
    g: &BoundaryMetric,
) -> Result<PolarizationSample> {
    let col = rayleigh_column(&medium.point(pt.x))?;
    on_root(pt, &col, g)?;
    Ok(sample(pt.t, &col, unit_frame(g, pt.x, pt.xi)?, a0, phi))
}

pub fn stoneley_polarization(
    pt: &EllipticPoint,
    a0: C64,
    phi: f64,
    pair: &crate::material::MaterialPair,
    g: &BoundaryMetric,
) -> Result<PolarizationSample> {
    let col = stoneley_column(&pair.at(pt.x))?;
    on_root(pt, &col, g)?;
    Ok(sample(pt.t, &col, unit_frame(g, pt.x, pt.xi)?, a0, phi))
}

fn on_root(pt: &EllipticPoint, col: &ModeColumn, g: &BoundaryMetric) -> Result<()> {
    let s = pt.slowness(g)?;
    let gap = (s - col.speed).abs();
    if gap > ROOT_TOL * col.speed {
        return Err(Error::OffCharacteristic { gap });
    }
    Ok(())
}

/// Polarization samples at `x` for the wave launched with covector `xi0`,
/// at the given times. Phases and amplitudes come from ray charts (closed
/// forms for constant media).
pub fn polarization_series(
    medium: &Medium,
    g: &BoundaryMetric,
    x: [f64; 2],
    xi0: [f64; 2],
    times: &[f64],
    opts: &ChartOptions,
) -> Result<Vec<PolarizationSample>> {
    let ctx = RayContext::new(medium, g)?;
    let col = mode_column(medium, x)?;
    if ctx.is_flat() {
        let lam = col.speed * g.covector_norm(x, xi0)?;
        let u = unit_frame(g, x, xi0)?;
        return Ok(times
            .iter()
            .map(|&t| sample(t, &col, u, C64::new(1.0, 0.0), t * lam + x[0] * xi0[0] + x[1] * xi0[1]))
            .collect());
    }
    let target = Grid2::new(x, x, [1, 1])?;
    let opts = ChartOptions { refine: true, ..*opts };
    let gi = g.inverse(x);
    let n = g.norm_unchecked(x, xi0);
    let v = [(gi[0] * xi0[0] + gi[1] * xi0[1]) / n, (gi[1] * xi0[0] + gi[2] * xi0[1]) / n];
    times
        .iter()
        .map(|&t| {
            let c = ctx.reference_speed() * t;
            let r = 0.2 + 0.3 * c;
            let centre = [x[0] + c * v[0], x[1] + c * v[1]];
            let seeds = Grid2::new([centre[0] - r, centre[1] - r], [centre[0] + r, centre[1] + r], [7, 7])?;
            let chart = phase_chart(t, xi0, &seeds, &target, medium, g, &opts)?;
            let u = unit_frame(g, x, chart.grad[0])?;
            Ok(sample(t, &col, u, chart.a0[0], chart.phi[0]))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesPart {
    Real,
    Imag,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RetrogradeReport {
    pub part: SeriesPart,
    pub samples: usize,
    /// Smallest finite-difference `(phi + upsilon)_t` along the series.
    pub min_phase_rate: f64,
    pub phase_increasing: bool,
    pub semi_axes: [f64; 2],
    /// Index of maximal upward displacement.
    pub top_index: usize,
    /// Velocity along the propagation direction at the top of the orbit.
    pub top_velocity: f64,
    pub retrograde: bool,
    pub ellipsoid_residual: f64,
}

fn unwrap(ph: &[f64]) -> Vec<f64> {
    let tau = 2.0 * std::f64::consts::PI;
    let mut out = Vec::with_capacity(ph.len());
    let mut off = 0.0;
    for (k, &p) in ph.iter().enumerate() {
        if k > 0 {
            let prev = ph[k - 1];
            off -= tau * ((p - prev) / tau).round();
        }
        out.push(p + off);
    }
    out
}

/// Retrograde test on the motion traced by `Re` (or `Im`) of
/// `P exp(i(phi + upsilon))` over at least 16 samples of one period: at the
/// top of the orbit (maximal displacement along `-x3`) the velocity along
/// the propagation direction must be negative.
pub fn retrograde_check(series: &[PolarizationSample], part: SeriesPart) -> Result<RetrogradeReport> {
    let n = series.len();
    if n < 16 {
        return Err(Error::InvalidInput(format!("retrograde test needs >= 16 samples, got {n}")));
    }
    let d = series[0].frame.direction;
    // semi-axes of the ellipse spanned by Re P and Im P
    let (a, b) = (series[0].re_p, series[0].im_p);
    let dot = |x: [f64; 3], y: [f64; 3]| x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
    let (gaa, gab, gbb) = (dot(a, a), dot(a, b), dot(b, b));
    let tr = gaa + gbb;
    let disc = ((gaa - gbb).powi(2) + 4.0 * gab * gab).sqrt();
    let semi = [(0.5 * (tr + disc)).max(0.0).sqrt(), (0.5 * (tr - disc)).max(0.0).sqrt()];
    if semi[1] < 1e-12 {
        return Err(Error::DegenerateEllipse { axis: semi[1] });
    }
    let phases = unwrap(&series.iter().map(|s| s.phase).collect::<Vec<_>>());
    let mut min_rate = f64::INFINITY;
    for k in 1..n {
        let dt = series[k].t - series[k - 1].t;
        min_rate = min_rate.min((phases[k] - phases[k - 1]) / dt);
    }
    let disp: Vec<[f64; 3]> = series.iter().map(|s| s.displacement(part)).collect();
    let up: Vec<f64> = disp.iter().map(|u| -u[2]).collect();
    let horiz: Vec<f64> = disp.iter().map(|u| u[0] * d[0] + u[1] * d[1]).collect();
    let top = (0..n).fold(0, |best, k| if up[k] > up[best] { k } else { best });
    let (lo, hi) = (top.saturating_sub(1), (top + 1).min(n - 1));
    let velocity = (horiz[hi] - horiz[lo]) / (series[hi].t - series[lo].t);
    Ok(RetrogradeReport {
        part,
        samples: n,
        min_phase_rate: min_rate,
        phase_increasing: min_rate > 0.0,
        semi_axes: semi,
        top_index: top,
        top_velocity: velocity,
        retrograde: velocity < 0.0,
        ellipsoid_residual: series.iter().map(|s| s.ellipsoid_residual).fold(0.0, f64::max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::MaterialField;

    fn poisson() -> MaterialPoint {
        MaterialPoint::new(1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn poisson_axis_ratio() {
        let col = rayleigh_column(&poisson()).unwrap();
        assert!((col.axis_ratio() - 1.4679).abs() < 1e-3, "{}", col.axis_ratio());
    }

    #[test]
    fn column_is_unit_and_matches_the_diagonalization() {
        let m = poisson();
        let col = rayleigh_column(&m).unwrap();
        let xi = [0.6, 0.8];
        let pt = EllipticPoint::new(0.0, [0.0, 0.0], col.speed, xi);
        let f = MaterialField::constant(m).unwrap();
        let d = crate::symbol::diagonalize_dn(&pt, &f, &BoundaryMetric::identity()).unwrap();
        let w1 = d.first_column();
        let c = col.column(xi);
        for k in 0..3 {
            assert!((w1[k] - c[k]).norm() < 1e-9, "{k}: {} vs {}", w1[k], c[k]);
        }
        let e0 = crate::symbol::e0_rayleigh_on_root(&m, col.speed);
        assert!((e0 * col.e0_inv - 1.0).norm() < 1e-12);
    }

    #[test]
    fn polarization_along_e1_has_no_transverse_part() {
        let f = MaterialField::constant(poisson()).unwrap();
        let c = rayleigh_speed_fast(&poisson()).unwrap();
        let pt = EllipticPoint::new(0.0, [0.0, 0.0], 3.0 * c, [3.0, 0.0]);
        let p = rayleigh_polarization(&pt, C64::new(0.3, -0.4), 0.0, &f, &BoundaryMetric::identity()).unwrap();
        assert_eq!(p.p[1], [0.0, 0.0]);
        assert!(p.ellipsoid_residual < 1e-12);
        let off = EllipticPoint::new(0.0, [0.0, 0.0], 3.0 * c * 1.01, [3.0, 0.0]);
        assert!(matches!(
            rayleigh_polarization(&off, C64::new(1.0, 0.0), 0.0, &f, &BoundaryMetric::identity()),
            Err(Error::OffCharacteristic { .. })
        ));
    }

    #[test]
    fn equal_shear_moduli_reduce_zeta1() {
        let plus = MaterialPoint::new(1.0, 1.0, 1.0).unwrap();
        let minus = MaterialPoint::new(1.3, 1.0, 1.0).unwrap();
        let b = Bimaterial::new(plus, minus).unwrap();
        let z = stoneley_zeta(&b, 0.5);
        assert!((z.zeta1 + (z.kappa_plus - z.kappa_minus)).abs() < 1e-15);
    }

    #[test]
    fn flat_rayleigh_motion_is_retrograde() {
        let m = Medium::Rayleigh(MaterialField::constant(poisson()).unwrap());
        let g = BoundaryMetric::identity();
        let xi = [2.0, 1.0];
        let col = mode_column(&m, [0.0, 0.0]).unwrap();
        let period = 2.0 * std::f64::consts::PI / (col.speed * 5f64.sqrt());
        let times: Vec<f64> = (0..32).map(|k| k as f64 * period / 32.0).collect();
        let series = polarization_series(&m, &g, [0.3, 0.1], xi, &times, &ChartOptions::default()).unwrap();
        for part in [SeriesPart::Real, SeriesPart::Imag] {
            let r = retrograde_check(&series, part).unwrap();
            assert!(r.retrograde && r.phase_increasing, "{r:?}");
            let conj: Vec<_> = series.iter().map(|s| s.conjugated()).collect();
            assert!(!retrograde_check(&conj, part).unwrap().retrograde);
        }
    }
}
