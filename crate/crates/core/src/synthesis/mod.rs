//! Leading-order synthesis of surface and interface displacement fields.
//!
//! Fields are oscillatory sums over a covector grid,
//! `f(t, x) = sum_xi P(t, x, xi) exp(i phi(t, x, xi)) h(xi) dxi`,
//! with the phase and amplitude taken from ray charts (or closed forms
//! when coefficients and metric are constant). Fourier transforms use
//! `h(x) = int exp(i x.xi) h^(xi) dxi` and
//! `h^(xi) = (2 pi)^-2 int exp(-i y.xi) h(y) dy`.
//! Vector components live in the g-orthonormal boundary frame.

mod cauchy;
mod evanescent;
mod polarization;
mod source;
mod tracking;

pub use cauchy::{cauchy_field, CauchyOptions};
pub use evanescent::{evanescent_mode, evanescent_profile, BulkField, BulkSample, ModeSample};
pub use polarization::{
    mode_column, polarization_series, rayleigh_column, rayleigh_polarization, retrograde_check, stoneley_column,
    stoneley_polarization, stoneley_zeta, Frame, ModeColumn, PolarizationSample, RetrogradeReport, SeriesPart,
    StoneleyZeta,
};
pub use source::{inhomogeneous_field, large_t_field, stoneley_field, SourceOptions, StoneleyField, StoneleyInput};
pub use tracking::{packet_centroid, track_packet, PacketTrack};
pub(crate) use cauchy::separable_sum;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid2;
use crate::C64;

/// Entries with `|h| <= SUPPORT_TOL * max|h|` are skipped.
pub const SUPPORT_TOL: f64 = 1e-12;

/// Gaussian envelope of a wave packet.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianWindow {
    /// Central covector.
    pub center: [f64; 2],
    /// Standard deviation in covector space.
    pub width: f64,
    /// Spatial centre of the packet at `t = 0`.
    #[serde(default)]
    pub x_center: [f64; 2],
}

/// Spectrum of the Cauchy datum on a covector grid.
#[derive(Clone, Debug, PartialEq)]
pub struct WavePacketData {
    pub xi_grid: Grid2,
    pub h_hat: Vec<C64>,
    pub window: Option<GaussianWindow>,
}

impl WavePacketData {
    pub fn new(xi_grid: Grid2, h_hat: Vec<C64>) -> Result<Self> {
        let p = Self { xi_grid, h_hat, window: None };
        p.validate()?;
        Ok(p)
    }

    /// `h^(xi) = exp(-|xi - xi_c|^2 / (2 w^2)) exp(-i x_c . xi)` on an
    /// `n x n` grid spanning `xi_c +- 7 w`.
    pub fn gaussian(window: GaussianWindow, n: usize) -> Result<Self> {
        if !(window.width > 0.0) {
            return Err(Error::NonPositiveParameter { name: "width", value: window.width });
        }
        let [c1, c2] = window.center;
        let r = 7.0 * window.width;
        let grid = Grid2::new([c1 - r, c2 - r], [c1 + r, c2 + r], [n, n])?;
        let w2 = window.width * window.width;
        let h_hat = grid
            .nodes()
            .map(|xi| {
                let d2 = (xi[0] - c1).powi(2) + (xi[1] - c2).powi(2);
                let ph = -(window.x_center[0] * xi[0] + window.x_center[1] * xi[1]);
                C64::from_polar((-d2 / (2.0 * w2)).exp(), ph)
            })
            .collect();
        let p = Self { xi_grid: grid, h_hat, window: Some(window) };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        self.xi_grid.validate()?;
        if self.h_hat.len() != self.xi_grid.len() {
            return Err(Error::InvalidInput(format!(
                "spectrum has {} samples for {} grid nodes",
                self.h_hat.len(),
                self.xi_grid.len()
            )));
        }
        let max = self.h_hat.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for (k, xi) in self.xi_grid.nodes().enumerate() {
            if xi[0].hypot(xi[1]) < 1e-12 && self.h_hat[k].norm() > SUPPORT_TOL * max {
                return Err(Error::InvalidInput("spectrum support contains xi = 0".into()));
            }
        }
        Ok(())
    }

    pub fn scaled(&self, k: C64) -> Self {
        Self { h_hat: self.h_hat.iter().map(|z| z * k).collect(), ..self.clone() }
    }

    /// Indices of the nodes carrying the spectrum.
    pub fn support(&self) -> Vec<usize> {
        support_of(self.h_hat.iter().map(|z| z.norm()))
    }
}

pub(crate) fn support_of(mags: impl Iterator<Item = f64> + Clone) -> Vec<usize> {
    let max = mags.clone().fold(0.0, f64::max);
    mags.enumerate().filter(|&(_, m)| m > SUPPORT_TOL * max && m > 0.0).map(|(k, _)| k).collect()
}

/// Boundary source `l(s, x)` (and, for interfaces, a traction jump `q`),
/// given by its spectra at time samples `s`.
#[derive(Clone, Debug, PartialEq)]
pub struct SourceData {
    pub time_samples: Vec<f64>,
    /// Quadrature weight of each time sample.
    pub ds: f64,
    /// End of the time support.
    pub t_end: f64,
    pub xi_grid: Grid2,
    /// `l_hat[s][xi]`.
    pub l_hat: Vec<Vec<[C64; 3]>>,
    /// Traction jump spectra (interface problems only).
    pub q_hat: Option<Vec<Vec<[C64; 3]>>>,
    /// Point whose coefficients freeze the source projection in variable
    /// media.
    pub origin: [f64; 2],
}

impl SourceData {
    pub fn validate(&self) -> Result<()> {
        self.xi_grid.validate()?;
        if self.l_hat.len() != self.time_samples.len() {
            return Err(Error::InvalidInput("one source spectrum per time sample is required".into()));
        }
        if self.l_hat.iter().any(|l| l.len() != self.xi_grid.len()) {
            return Err(Error::InvalidInput("source spectra must match the covector grid".into()));
        }
        if let Some(q) = &self.q_hat {
            if q.len() != self.time_samples.len() || q.iter().any(|l| l.len() != self.xi_grid.len()) {
                return Err(Error::InvalidInput("traction spectra must match the source layout".into()));
            }
        }
        if let Some(&s) = self.time_samples.iter().find(|&&s| !(s > 0.0 && s <= self.t_end)) {
            return Err(Error::InvalidInput(format!("source time {s} outside (0, {}]", self.t_end)));
        }
        if !(self.ds > 0.0) {
            return Err(Error::NonPositiveParameter { name: "ds", value: self.ds });
        }
        Ok(())
    }

    pub fn zero_like(&self) -> Self {
        let z = [C64::new(0.0, 0.0); 3];
        Self {
            l_hat: self.l_hat.iter().map(|v| vec![z; v.len()]).collect(),
            q_hat: self.q_hat.as_ref().map(|q| q.iter().map(|v| vec![z; v.len()]).collect()),
            ..self.clone()
        }
    }

    /// Sum of two sources on the same grids.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.time_samples != other.time_samples || self.xi_grid != other.xi_grid {
            return Err(Error::InvalidInput("sources live on different grids".into()));
        }
        let add = |a: &Vec<Vec<[C64; 3]>>, b: &Vec<Vec<[C64; 3]>>| {
            a.iter()
                .zip(b)
                .map(|(u, v)| u.iter().zip(v).map(|(p, q)| [p[0] + q[0], p[1] + q[1], p[2] + q[2]]).collect())
                .collect::<Vec<Vec<_>>>()
        };
        let q_hat = match (&self.q_hat, &other.q_hat) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (Some(a), Some(b)) => Some(add(a, b)),
        };
        Ok(Self { l_hat: add(&self.l_hat, &other.l_hat), q_hat, ..self.clone() })
    }
}

/// Sampled boundary displacement (leading order).
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryFieldGrid {
    pub t: f64,
    pub x_grid: Grid2,
    pub f: Vec<[C64; 3]>,
}

impl BoundaryFieldGrid {
    pub fn zeros(t: f64, x_grid: Grid2) -> Self {
        Self { t, x_grid, f: vec![[C64::new(0.0, 0.0); 3]; x_grid.len()] }
    }

    pub fn l2_norm(&self) -> f64 {
        self.f.iter().flat_map(|v| v.iter()).map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.f.iter().flat_map(|v| v.iter()).map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `||self - other|| / ||other||` in the discrete L2 norm.
    pub fn relative_l2_error(&self, other: &Self) -> f64 {
        let mut num = 0.0;
        for (a, b) in self.f.iter().zip(&other.f) {
            for k in 0..3 {
                num += (a[k] - b[k]).norm_sqr();
            }
        }
        num.sqrt() / other.l2_norm()
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = self.f.iter().zip(&other.f).map(|(a, b)| [a[0] + b[0], a[1] + b[1], a[2] + b[2]]).collect();
        Self { f, ..self.clone() }
    }
}

#[inline]
pub(crate) fn cadd(acc: &mut [C64; 3], v: [C64; 3], w: C64) {
    for k in 0..3 {
        acc[k] += v[k] * w;
    }
}

/// `theta_c + wrap(atan2(xi) - theta_c)`, keeping angles on one branch.
pub(crate) fn angle_near(xi: [f64; 2], theta_c: f64) -> f64 {
    let th = xi[1].atan2(xi[0]);
    let mut d = th - theta_c;
    while d > std::f64::consts::PI {
        d -= 2.0 * std::f64::consts::PI;
    }
    while d < -std::f64::consts::PI {
        d += 2.0 * std::f64::consts::PI;
    }
    theta_c + d
}
