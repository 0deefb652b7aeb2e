//! Bicharacteristics of `tau - c(x)|xi|_g`, Jacobi fields, the phase Hessian
//! and the leading transport amplitude; phase charts built from ray fans.
//!
//! With `lambda(x, xi) = c(x)|xi|_g` the rays solve
//! `x' = -lambda_xi`, `xi' = +lambda_x`, which keeps `lambda` constant and,
//! by Euler's identity, keeps the phase `x0 . xi0` constant along the ray.

use std::cell::Cell;

use nalgebra::Matrix2;
use rayon::prelude::*;
use serde::Serialize;

use crate::dispersion::{rayleigh_generic, rayleigh_speed_fast, stoneley_m1_generic, stoneley_speed, stoneley_speed_near};
use crate::error::{Error, Result};
use crate::grid::Grid2;
use crate::jet::{implicit_root, Jet, Real};
use crate::material::{BoundaryMetric, EllipticPoint, MaterialField, MaterialPair, WorkingBox};
use crate::symbol::{r0_for, R0Model};
use crate::C64;

/// Relative drift of `c|xi|_g` tolerated before a step is rejected.
pub const DRIFT_TOL: f64 = 1e-6;
/// `|det J|` below which a caustic is declared.
pub const CAUSTIC_DET: f64 = 1e-6;

/// The medium whose surface (or interface) speed drives the rays.
#[derive(Clone, Debug, PartialEq)]
pub enum Medium {
    Rayleigh(MaterialField),
    Stoneley(MaterialPair),
}

impl Medium {
    pub fn working_box(&self) -> WorkingBox {
        match self {
            Medium::Rayleigh(m) => *m.working_box(),
            Medium::Stoneley(p) => p.working_box(),
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Medium::Rayleigh(m) => m.is_constant(),
            Medium::Stoneley(p) => p.is_constant(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Medium::Rayleigh(_) => "rayleigh",
            Medium::Stoneley(_) => "stoneley",
        }
    }

    pub fn r0_model(&self) -> R0Model<'_> {
        match self {
            Medium::Rayleigh(m) => R0Model::Rayleigh(m),
            Medium::Stoneley(p) => R0Model::Stoneley(p),
        }
    }

    /// Surface-wave speed at `x`; `guess` seeds the Stoneley refinement.
    pub fn speed(&self, x: [f64; 2], guess: Option<f64>) -> Result<f64> {
        match self {
            Medium::Rayleigh(m) => rayleigh_speed_fast(&m.point(x)),
            Medium::Stoneley(p) => {
                let b = p.at(x);
                match guess {
                    Some(c) => stoneley_speed_near(&b, c),
                    None => stoneley_speed(&b)?.require().map(|(c, _)| c),
                }
            }
        }
    }

    /// Value, gradient and Hessian of the speed at `x`, by implicit
    /// differentiation of the secular function at the known root `c`.
    pub fn speed_jet(&self, x: [f64; 2], c: f64) -> Jet<2> {
        let s = Jet::<3>::var(c, 0);
        let lift = |j: [Jet<2>; 3]| j.map(|v| v.embed::<3>([1, 2]));
        let g = match self {
            Medium::Rayleigh(m) => {
                let [rho, lam, mu] = lift(m.jets(x));
                rayleigh_generic(s, rho, lam, mu)
            }
            Medium::Stoneley(p) => stoneley_m1_generic(s, lift(p.plus.jets(x)), lift(p.minus.jets(x))),
        };
        implicit_root::<3, 2>(&g, c)
    }
}

/// Shared, read-only data for tracing many rays in one medium.
pub struct RayContext<'a> {
    pub medium: &'a Medium,
    pub g: &'a BoundaryMetric,
    constant_speed: Option<f64>,
    constant_inverse: Option<[f64; 3]>,
    reference_speed: f64,
    bx: WorkingBox,
}

impl<'a> RayContext<'a> {
    pub fn new(medium: &'a Medium, g: &'a BoundaryMetric) -> Result<Self> {
        let bx = medium.working_box();
        let center = [0.5 * (bx.min[0] + bx.max[0]), 0.5 * (bx.min[1] + bx.max[1])];
        let reference_speed = medium.speed(center, None)?;
        let constant_speed = medium.is_constant().then_some(reference_speed);
        let constant_inverse = g.is_constant().then(|| g.inverse(center));
        Ok(Self { medium, g, constant_speed, constant_inverse, reference_speed, bx })
    }

    /// Constant coefficients and metric: straight rays, `a0 = 1`.
    pub fn is_flat(&self) -> bool {
        self.constant_speed.is_some() && self.g.is_constant()
    }

    pub fn reference_speed(&self) -> f64 {
        self.reference_speed
    }

    pub fn working_box(&self) -> &WorkingBox {
        &self.bx
    }

    pub fn speed(&self, x: [f64; 2], guess: Option<f64>) -> Result<f64> {
        match self.constant_speed {
            Some(c) => Ok(c),
            None => self.medium.speed(x, guess.or(Some(self.reference_speed))),
        }
    }

    /// `lambda = c(x)|xi|_g` as a jet over `(x1, x2, xi1, xi2)`.
    pub fn lambda_jet(&self, x: [f64; 2], xi: [f64; 2], guess: &Cell<f64>) -> Result<Jet<4>> {
        if let (Some(c), Some(gi)) = (self.constant_speed, self.constant_inverse) {
            // straight rays: only the xi-block is non-zero
            let v = [gi[0] * xi[0] + gi[1] * xi[1], gi[1] * xi[0] + gi[2] * xi[1]];
            let n = (xi[0] * v[0] + xi[1] * v[1]).sqrt();
            let mut l = Jet::<4>::constant(c * n);
            l.g[2] = c * v[0] / n;
            l.g[3] = c * v[1] / n;
            let gm = [[gi[0], gi[1]], [gi[1], gi[2]]];
            for i in 0..2 {
                for j in 0..2 {
                    l.h[2 + i][2 + j] = c * (gm[i][j] - v[i] * v[j] / (n * n)) / n;
                }
            }
            return Ok(l);
        }
        let c: Jet<4> = match self.constant_speed {
            Some(c) => Jet::constant(c),
            None => {
                let c = self.medium.speed(x, Some(guess.get()))?;
                guess.set(c);
                self.medium.speed_jet(x, c).embed([0, 1])
            }
        };
        let gi = self.g.inverse_jets(x).map(|v| v.embed::<4>([0, 1]));
        let (k1, k2) = (Jet::<4>::var(xi[0], 2), Jet::<4>::var(xi[1], 3));
        let q = gi[0] * k1 * k1 + gi[1] * k1 * k2 * 2.0 + gi[2] * k2 * k2;
        Ok(c * q.sqrt())
    }

    fn new_guess(&self) -> Cell<f64> {
        Cell::new(self.reference_speed)
    }
}

/// One sample along a ray. `jac` and `hess` are present once the Jacobi
/// fields have been integrated; `log_amp` is `int gamma` once transport ran.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RayState {
    pub t: f64,
    pub x: [f64; 2],
    pub xi: [f64; 2],
    pub phase: f64,
    pub jac: Option<[[f64; 2]; 2]>,
    pub hess: Option<[[f64; 2]; 2]>,
    pub log_amp: C64,
    /// `c(x)|xi|_g` at this sample.
    pub lambda: f64,
}

impl RayState {
    pub fn det_jac(&self) -> Option<f64> {
        self.jac.map(|j| j[0][0] * j[1][1] - j[0][1] * j[1][0])
    }

    pub fn a0(&self) -> C64 {
        (-self.log_amp).exp()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Caustic {
    pub t: f64,
    pub det_jac: f64,
}

/// A ray with Jacobi fields; stops at the first caustic.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DynamicRay {
    pub states: Vec<RayState>,
    pub caustic: Option<Caustic>,
}

impl DynamicRay {
    pub fn require_regular(&self) -> Result<()> {
        match self.caustic {
            Some(c) => Err(Error::CausticEncountered { t: c.t, det_jac: c.det_jac }),
            None => Ok(()),
        }
    }

    pub fn last(&self) -> &RayState {
        self.states.last().expect("rays have at least one state")
    }
}

type State = [f64; 13];

fn mat(y: &State, off: usize) -> Matrix2<f64> {
    Matrix2::new(y[off], y[off + 1], y[off + 2], y[off + 3])
}

fn arr(m: &Matrix2<f64>) -> [[f64; 2]; 2] {
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
}

/// Right-hand side of the ray system; the Jacobi block is skipped when
/// `dynamic` is false.
fn rhs(l: &Jet<4>, y: &State, dynamic: bool) -> State {
    let mut d = [0.0; 13];
    let (lx, lxi) = ([l.g[0], l.g[1]], [l.g[2], l.g[3]]);
    d[0] = -lxi[0];
    d[1] = -lxi[1];
    d[2] = lx[0];
    d[3] = lx[1];
    d[4] = l.v - (y[2] * lxi[0] + y[3] * lxi[1]);
    if dynamic {
        let h = |i: usize, j: usize| l.h[i][j];
        let l_xix = Matrix2::new(h(2, 0), h(2, 1), h(3, 0), h(3, 1));
        let l_xixi = Matrix2::new(h(2, 2), h(2, 3), h(3, 2), h(3, 3));
        let l_xx = Matrix2::new(h(0, 0), h(0, 1), h(1, 0), h(1, 1));
        let l_xxi = Matrix2::new(h(0, 2), h(0, 3), h(1, 2), h(1, 3));
        let (j, k) = (mat(y, 5), mat(y, 9));
        let dj = -l_xix * j - l_xixi * k;
        let dk = l_xx * j + l_xxi * k;
        d[5..9].copy_from_slice(&[dj[(0, 0)], dj[(0, 1)], dj[(1, 0)], dj[(1, 1)]]);
        d[9..13].copy_from_slice(&[dk[(0, 0)], dk[(0, 1)], dk[(1, 0)], dk[(1, 1)]]);
    }
    d
}

fn axpy(y: &State, h: f64, k: &State) -> State {
    let mut out = *y;
    for i in 0..13 {
        out[i] += h * k[i];
    }
    out
}

fn state_of(y: &State, t: f64, lambda: f64, dynamic: bool) -> RayState {
    let (jac, hess) = if dynamic {
        let j = mat(y, 5);
        let k = mat(y, 9);
        let hess = j.try_inverse().map(|ji| {
            let h = k * ji;
            // symmetric in exact arithmetic
            let s = 0.5 * (h + h.transpose());
            arr(&s)
        });
        (Some(arr(&j)), hess)
    } else {
        (None, None)
    };
    RayState { t, x: [y[0], y[1]], xi: [y[2], y[3]], phase: y[4], jac, hess, log_amp: C64::new(0.0, 0.0), lambda }
}

fn step_count(t_end: f64, dt: f64) -> Result<usize> {
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidInput(format!("ray end time {t_end} must be finite and >= 0")));
    }
    if t_end == 0.0 {
        return Ok(0);
    }
    if !(dt > 0.0) || dt > t_end / 100.0 * (1.0 + 1e-12) {
        return Err(Error::InvalidInput(format!("dt = {dt} must lie in (0, T/100] for T = {t_end}")));
    }
    Ok((t_end / dt - 1e-9).ceil() as usize)
}

/// Classical RK4 on the ray (and optionally Jacobi) system.
fn integrate(ctx: &RayContext<'_>, x0: [f64; 2], xi0: [f64; 2], t_end: f64, dt: f64, dynamic: bool) -> Result<DynamicRay> {
    ctx.g.check_at(x0)?;
    if !ctx.bx.contains(x0) {
        return Err(Error::OutsideWorkingBox { x: x0 });
    }
    if xi0 == [0.0, 0.0] {
        return Err(Error::InvalidInput("initial covector must be non-zero".into()));
    }
    let n = step_count(t_end, dt)?;
    let h = if n > 0 { t_end / n as f64 } else { 0.0 };
    let guess = ctx.new_guess();
    let eval = |y: &State, t: f64| -> Result<(f64, State)> {
        let x = [y[0], y[1]];
        if !ctx.bx.contains(x) || !y.iter().all(|v| v.is_finite()) {
            return Err(Error::LeftWorkingBox { t });
        }
        let l = ctx.lambda_jet(x, [y[2], y[3]], &guess)?;
        Ok((l.v, rhs(&l, y, dynamic)))
    };
    let mut y: State = [0.0; 13];
    y[..4].copy_from_slice(&[x0[0], x0[1], xi0[0], xi0[1]]);
    y[4] = x0[0] * xi0[0] + x0[1] * xi0[1];
    y[5] = 1.0;
    y[8] = 1.0;
    let mut states = Vec::with_capacity(n + 1);
    let (lam0, mut k1) = eval(&y, 0.0)?;
    states.push(state_of(&y, 0.0, lam0, dynamic));
    let mut det_prev: f64 = 1.0;
    for i in 0..n {
        let t = i as f64 * h;
        let (_, k2) = eval(&axpy(&y, 0.5 * h, &k1), t)?;
        let (_, k3) = eval(&axpy(&y, 0.5 * h, &k2), t)?;
        let (_, k4) = eval(&axpy(&y, h, &k3), t)?;
        for j in 0..13 {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        let t_next = if i + 1 == n { t_end } else { (i + 1) as f64 * h };
        let (lam, k) = eval(&y, t_next)?;
        k1 = k;
        let drift = (lam - lam0).abs() / lam0;
        if drift > DRIFT_TOL {
            return Err(Error::StepTooLarge { drift });
        }
        if dynamic {
            let det = y[5] * y[8] - y[6] * y[7];
            if det.abs() < CAUSTIC_DET || det.signum() != det_prev.signum() {
                return Ok(DynamicRay { states, caustic: Some(Caustic { t: t_next, det_jac: det }) });
            }
            det_prev = det;
        }
        states.push(state_of(&y, t_next, lam, dynamic));
    }
    Ok(DynamicRay { states, caustic: None })
}

/// Trace the bicharacteristic from `(x0, xi0)` up to `t_end` with RK4 steps
/// of at most `dt` (which must not exceed `t_end / 100`).
pub fn trace_ray(
    x0: [f64; 2],
    xi0: [f64; 2],
    t_end: f64,
    dt: f64,
    medium: &Medium,
    g: &BoundaryMetric,
) -> Result<Vec<RayState>> {
    let ctx = RayContext::new(medium, g)?;
    integrate(&ctx, x0, xi0, t_end, dt, false).map(|r| r.states)
}

/// Ray plus Jacobi fields `J = dx/dx0`, `K = dxi/dx0` from `J(0) = I`,
/// `K(0) = 0`; the phase Hessian is `K J^{-1}`.
pub fn trace_dynamic(x0: [f64; 2], xi0: [f64; 2], t_end: f64, dt: f64, ctx: &RayContext<'_>) -> Result<DynamicRay> {
    integrate(ctx, x0, xi0, t_end, dt, true)
}

/// Fill in `jac` and `hess` for a traced ray by integrating the linearized
/// flow on the same time grid. Stops at the first caustic, keeping the
/// regular part.
pub fn dynamic_ray(ray: &[RayState], medium: &Medium, g: &BoundaryMetric) -> Result<DynamicRay> {
    let first = ray.first().ok_or_else(|| Error::InvalidInput("empty ray".into()))?;
    let last = ray.last().expect("non-empty");
    let ctx = RayContext::new(medium, g)?;
    if ray.len() < 2 {
        return integrate(&ctx, first.x, first.xi, 0.0, 1.0, true);
    }
    let dt = ray[1].t - ray[0].t;
    let t_end = last.t - first.t;
    let mut out = integrate(&ctx, first.x, first.xi, t_end, dt * (1.0 + 1e-12), true)?;
    for s in &mut out.states {
        s.t += first.t;
    }
    Ok(out)
}

/// Accumulated transport quantities at one ray sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TransportLog {
    pub t: f64,
    /// Local `gamma` at the sample.
    pub gamma: C64,
    pub gamma1_int: f64,
    pub gamma2_int: f64,
    pub a0: C64,
    pub upsilon: f64,
}

/// Cumulative integral of uniformly spaced samples with cubic Lagrange
/// weights on each interval.
pub fn cumulative_integral(f: &[C64], h: f64) -> Vec<C64> {
    let n = f.len();
    let mut out = vec![C64::new(0.0, 0.0); n];
    for i in 0..n.saturating_sub(1) {
        let piece = if n < 4 {
            (f[i] + f[i + 1]) * 0.5
        } else if i == 0 {
            (f[0] * 9.0 + f[1] * 19.0 - f[2] * 5.0 + f[3]) / 24.0
        } else if i + 2 >= n {
            (f[i - 2] - f[i - 1] * 5.0 + f[i] * 19.0 + f[i + 1] * 9.0) / 24.0
        } else {
            (-f[i - 1] + f[i] * 13.0 + f[i + 1] * 13.0 - f[i + 2]) / 24.0
        };
        out[i + 1] = out[i] + piece * h;
    }
    out
}

/// Lagrange interpolation through the (up to) four nodes nearest `t`.
fn lagrange_at(ts: &[f64], vs: &[C64], t: f64) -> C64 {
    let n = ts.len();
    if n == 1 {
        return vs[0];
    }
    let k = match ts.iter().position(|&s| s >= t) {
        Some(0) => 0,
        Some(k) => k - 1,
        None => n - 2,
    };
    let lo = k.saturating_sub(1).min(n.saturating_sub(4));
    let hi = (lo + 4).min(n);
    let mut acc = C64::new(0.0, 0.0);
    for i in lo..hi {
        let mut w = 1.0;
        for j in lo..hi {
            if j != i {
                w *= (t - ts[j]) / (ts[i] - ts[j]);
            }
        }
        acc += vs[i] * w;
    }
    acc
}

/// `-1/2 tr(lambda_xixi Hess phi)`, the curvature part of `gamma`.
fn gamma_geometric(ctx: &RayContext<'_>, s: &RayState, guess: &Cell<f64>) -> Result<f64> {
    let h = s.hess.ok_or_else(|| Error::InvalidInput("transport needs the phase Hessian".into()))?;
    let l = ctx.lambda_jet(s.x, s.xi, guess)?;
    let mut tr = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            tr += l.h[2 + i][2 + j] * h[j][i];
        }
    }
    Ok(-0.5 * tr)
}

/// Number of samples between `r0` evaluations when none is requested.
fn default_stride(n: usize) -> usize {
    (n / 24).max(1)
}

/// Integrate `a0' = -gamma a0` along a dynamic ray, with
/// `gamma = -1/2 tr(lambda_xixi Hess phi) + r0` (no subprincipal term of
/// `lambda`). `r0` is evaluated every `r0_stride` samples and interpolated.
/// Writes `int gamma` into each state's `log_amp`.
pub fn transport_amplitude(
    ray: &mut DynamicRay,
    medium: &Medium,
    g: &BoundaryMetric,
    r0_stride: Option<usize>,
) -> Result<Vec<TransportLog>> {
    ray.require_regular()?;
    let ctx = RayContext::new(medium, g)?;
    transport_in(ray, &ctx, r0_stride)
}

pub(crate) fn transport_in(ray: &mut DynamicRay, ctx: &RayContext<'_>, r0_stride: Option<usize>) -> Result<Vec<TransportLog>> {
    let n = ray.states.len();
    let zero = C64::new(0.0, 0.0);
    if ctx.is_flat() {
        return Ok(ray
            .states
            .iter_mut()
            .map(|s| {
                s.log_amp = zero;
                TransportLog { t: s.t, gamma: zero, gamma1_int: 0.0, gamma2_int: 0.0, a0: C64::new(1.0, 0.0), upsilon: 0.0 }
            })
            .collect());
    }
    let guess = ctx.new_guess();
    let geo = ray.states.iter().map(|s| gamma_geometric(ctx, s, &guess)).collect::<Result<Vec<_>>>()?;
    let stride = r0_stride.unwrap_or_else(|| default_stride(n)).max(1);
    let mut idx: Vec<usize> = (0..n).step_by(stride).collect();
    if *idx.last().unwrap() != n - 1 {
        idx.push(n - 1);
    }
    let model = ctx.medium.r0_model();
    let r0_nodes = idx
        .iter()
        .map(|&i| {
            let s = &ray.states[i];
            let pt = EllipticPoint::new(s.t, s.x, s.lambda, s.xi);
            r0_for(model, &pt, ctx.g).map(|r| r.value)
        })
        .collect::<Result<Vec<_>>>()?;
    let node_t: Vec<f64> = idx.iter().map(|&i| ray.states[i].t).collect();
    let gamma: Vec<C64> = ray
        .states
        .iter()
        .zip(&geo)
        .map(|(s, &gg)| C64::new(gg, 0.0) + lagrange_at(&node_t, &r0_nodes, s.t))
        .collect();
    let h = if n > 1 { ray.states[1].t - ray.states[0].t } else { 0.0 };
    let int = cumulative_integral(&gamma, h);
    Ok(ray
        .states
        .iter_mut()
        .zip(gamma.iter().zip(&int))
        .map(|(s, (&gm, &ig))| {
            s.log_amp = ig;
            TransportLog {
                t: s.t,
                gamma: gm,
                gamma1_int: ig.re,
                gamma2_int: ig.im,
                a0: (-ig.re).exp() * C64::from_polar(1.0, -ig.im),
                upsilon: -ig.im,
            }
        })
        .collect())
}

/// Ray endpoint data deposited into a chart.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RayEndpoint {
    pub x0: [f64; 2],
    pub x: [f64; 2],
    pub phase: f64,
    pub xi: [f64; 2],
    pub hess: [[f64; 2]; 2],
    pub det_jac: f64,
    pub a0: C64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
enum Fate {
    Arrived(RayEndpoint),
    Lost,
    Caustic,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChartOptions {
    /// Upper bound on the RK4 step; reduced to `t/100` when larger.
    pub dt: f64,
    /// Integrate the transport equation for `a0`.
    pub transport: bool,
    pub r0_stride: Option<usize>,
    /// Return charts with caustic-flagged samples instead of failing.
    pub allow_caustics: bool,
    /// Replace interpolated values by the ray shot exactly to each target
    /// node (Newton on the seed using the Jacobi field).
    pub refine: bool,
}

impl Default for ChartOptions {
    fn default() -> Self {
        Self { dt: 1e-2, transport: true, r0_stride: None, allow_caustics: false, refine: false }
    }
}

/// Phase `phi(t, x, xi0)` solving `phi_t = c|grad phi|_g`, `phi(0) = x . xi0`,
/// on a regular chart.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseChart {
    pub t: f64,
    pub xi0: [f64; 2],
    pub grid: Grid2,
    pub phi: Vec<f64>,
    pub grad: Vec<[f64; 2]>,
    pub a0: Vec<C64>,
    pub caustic: Vec<bool>,
    pub seeds: Grid2,
    pub endpoints: Vec<Option<RayEndpoint>>,
}

/// Newton on the seed so that the ray lands on `x` at time `t`.
fn shoot(
    ctx: &RayContext<'_>,
    x: [f64; 2],
    guess: [f64; 2],
    t: f64,
    xi0: [f64; 2],
    opts: &ChartOptions,
) -> Result<Fate> {
    let dt = opts.dt.min(t / 100.0);
    let mut x0 = guess;
    for _ in 0..12 {
        let mut ray = match integrate(ctx, x0, xi0, t, dt, true) {
            Ok(r) => r,
            Err(Error::LeftWorkingBox { .. } | Error::OutsideWorkingBox { .. }) => return Ok(Fate::Lost),
            Err(e) => return Err(e),
        };
        if ray.caustic.is_some() {
            return Ok(Fate::Caustic);
        }
        let s = *ray.last();
        let r = [s.x[0] - x[0], s.x[1] - x[1]];
        let j = s.jac.expect("dynamic ray");
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        let step = [(j[1][1] * r[0] - j[0][1] * r[1]) / det, (j[0][0] * r[1] - j[1][0] * r[0]) / det];
        if r[0].hypot(r[1]) < 1e-13 * (1.0 + x[0].hypot(x[1])) {
            let a0 = if opts.transport {
                transport_in(&mut ray, ctx, opts.r0_stride)?.last().expect("non-empty").a0
            } else {
                C64::new(1.0, 0.0)
            };
            return Ok(Fate::Arrived(RayEndpoint {
                x0,
                x: s.x,
                phase: x0[0] * xi0[0] + x0[1] * xi0[1],
                xi: s.xi,
                hess: s.hess.expect("dynamic ray"),
                det_jac: det,
                a0,
            }));
        }
        x0 = [x0[0] - step[0], x0[1] - step[1]];
    }
    Err(Error::InterpolationGap { x })
}

fn trace_fan(t: f64, xi0: [f64; 2], seeds: &Grid2, ctx: &RayContext<'_>, opts: &ChartOptions) -> Result<Vec<Fate>> {
    let dt = opts.dt.min(t / 100.0);
    (0..seeds.len())
        .into_par_iter()
        .map(|k| {
            let x0 = seeds.node_at(k);
            if !ctx.bx.contains(x0) {
                return Ok(Fate::Lost);
            }
            if t == 0.0 {
                let phase = x0[0] * xi0[0] + x0[1] * xi0[1];
                return Ok(Fate::Arrived(RayEndpoint {
                    x0,
                    x: x0,
                    phase,
                    xi: xi0,
                    hess: [[0.0; 2]; 2],
                    det_jac: 1.0,
                    a0: C64::new(1.0, 0.0),
                }));
            }
            let mut ray = match integrate(ctx, x0, xi0, t, dt, true) {
                Ok(r) => r,
                Err(Error::LeftWorkingBox { .. }) => return Ok(Fate::Lost),
                Err(e) => return Err(e),
            };
            if ray.caustic.is_some() {
                return Ok(Fate::Caustic);
            }
            let a0 = if opts.transport {
                let logs = transport_in(&mut ray, ctx, opts.r0_stride)?;
                logs.last().expect("non-empty").a0
            } else {
                C64::new(1.0, 0.0)
            };
            let s = ray.last();
            Ok(Fate::Arrived(RayEndpoint {
                x0,
                x: s.x,
                phase: x0[0] * xi0[0] + x0[1] * xi0[1],
                xi: s.xi,
                hess: s.hess.expect("dynamic ray"),
                det_jac: s.det_jac().expect("dynamic ray"),
                a0,
            }))
        })
        .collect()
}

/// Inverse of the bilinear map of a quadrilateral, by Newton from its centre.
fn bilinear_inverse(p: [[f64; 2]; 4], x: [f64; 2]) -> Option<(f64, f64)> {
    // corners ordered (0,0), (1,0), (0,1), (1,1)
    let a = [p[1][0] - p[0][0], p[1][1] - p[0][1]];
    let b = [p[2][0] - p[0][0], p[2][1] - p[0][1]];
    let c = [p[3][0] - p[1][0] - p[2][0] + p[0][0], p[3][1] - p[1][1] - p[2][1] + p[0][1]];
    let (mut u, mut v) = (0.5, 0.5);
    for _ in 0..30 {
        let r = [
            p[0][0] + u * a[0] + v * b[0] + u * v * c[0] - x[0],
            p[0][1] + u * a[1] + v * b[1] + u * v * c[1] - x[1],
        ];
        let j = [[a[0] + v * c[0], b[0] + u * c[0]], [a[1] + v * c[1], b[1] + u * c[1]]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-300 {
            return None;
        }
        let du = (r[0] * j[1][1] - r[1] * j[0][1]) / det;
        let dv = (j[0][0] * r[1] - j[1][0] * r[0]) / det;
        u -= du;
        v -= dv;
        if du.abs() + dv.abs() < 1e-15 {
            break;
        }
    }
    (u.is_finite() && v.is_finite()).then_some((u, v))
}

enum Located {
    Cell { i: usize, j: usize, u: f64, v: f64 },
    Caustic,
    Gap,
}

fn locate(fates: &[Fate], seeds: &Grid2, shift: [f64; 2], x: [f64; 2]) -> Located {
    let [n0, n1] = seeds.n;
    if n0 < 2 || n1 < 2 {
        return Located::Gap;
    }
    let h = seeds.spacing();
    let guess = [x[0] - shift[0], x[1] - shift[1]];
    let clampi = |v: f64, n: usize| (v.floor().max(0.0) as usize).min(n - 2);
    let mut i = clampi((guess[0] - seeds.min[0]) / h[0], n0);
    let mut j = clampi((guess[1] - seeds.min[1]) / h[1], n1);
    const TOL: f64 = 1e-10;
    for _ in 0..4 * (n0 + n1) {
        let ids = [seeds.index(i, j), seeds.index(i + 1, j), seeds.index(i, j + 1), seeds.index(i + 1, j + 1)];
        let mut corners = [[0.0; 2]; 4];
        for (c, &k) in corners.iter_mut().zip(&ids) {
            match fates[k] {
                Fate::Arrived(e) => *c = e.x,
                Fate::Caustic => return Located::Caustic,
                Fate::Lost => return Located::Gap,
            }
        }
        let Some((u, v)) = bilinear_inverse(corners, x) else { return Located::Caustic };
        let mut moved = false;
        if u < -TOL {
            if i == 0 {
                return Located::Gap;
            }
            i -= 1;
            moved = true;
        } else if u > 1.0 + TOL {
            if i + 2 >= n0 {
                return Located::Gap;
            }
            i += 1;
            moved = true;
        }
        if v < -TOL {
            if j == 0 {
                return Located::Gap;
            }
            j -= 1;
            moved = true;
        } else if v > 1.0 + TOL {
            if j + 2 >= n1 {
                return Located::Gap;
            }
            j += 1;
            moved = true;
        }
        if !moved {
            return Located::Cell { i, j, u: u.clamp(0.0, 1.0), v: v.clamp(0.0, 1.0) };
        }
    }
    Located::Gap
}

/// Blend of the second-order Taylor expansions from the four cell corners.
fn blend(ends: [&RayEndpoint; 4], w: [f64; 4], x: [f64; 2]) -> (f64, [f64; 2], C64) {
    let mut phi = 0.0;
    let mut grad = [0.0; 2];
    let mut a0 = C64::new(0.0, 0.0);
    for (e, &wk) in ends.iter().zip(&w) {
        let d = [x[0] - e.x[0], x[1] - e.x[1]];
        let hd = [e.hess[0][0] * d[0] + e.hess[0][1] * d[1], e.hess[1][0] * d[0] + e.hess[1][1] * d[1]];
        phi += wk * (e.phase + e.xi[0] * d[0] + e.xi[1] * d[1] + 0.5 * (d[0] * hd[0] + d[1] * hd[1]));
        grad[0] += wk * (e.xi[0] + hd[0]);
        grad[1] += wk * (e.xi[1] + hd[1]);
        a0 += e.a0 * wk;
    }
    (phi, grad, a0)
}

/// Trace one ray per seed to time `t` and interpolate `(phi, grad phi, a0)`
/// onto `target`.
pub fn phase_chart(
    t: f64,
    xi0: [f64; 2],
    seeds: &Grid2,
    target: &Grid2,
    medium: &Medium,
    g: &BoundaryMetric,
    opts: &ChartOptions,
) -> Result<PhaseChart> {
    let ctx = RayContext::new(medium, g)?;
    phase_chart_in(t, xi0, seeds, target, &ctx, opts)
}

pub(crate) fn phase_chart_in(
    t: f64,
    xi0: [f64; 2],
    seeds: &Grid2,
    target: &Grid2,
    ctx: &RayContext<'_>,
    opts: &ChartOptions,
) -> Result<PhaseChart> {
    seeds.validate()?;
    target.validate()?;
    let fates = trace_fan(t, xi0, seeds, ctx, opts)?;
    let mut shift = [0.0; 2];
    let mut count = 0usize;
    for f in &fates {
        if let Fate::Arrived(e) = f {
            shift[0] += e.x[0] - e.x0[0];
            shift[1] += e.x[1] - e.x0[1];
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::InterpolationGap { x: target.node_at(0) });
    }
    shift = [shift[0] / count as f64, shift[1] / count as f64];
    let samples: Vec<(f64, [f64; 2], C64, bool)> = (0..target.len())
        .into_par_iter()
        .map(|k| {
            let x = target.node_at(k);
            match locate(&fates, seeds, shift, x) {
                Located::Gap => Err(Error::InterpolationGap { x }),
                Located::Caustic => Ok((f64::NAN, [f64::NAN; 2], C64::new(f64::NAN, f64::NAN), true)),
                Located::Cell { i, j, u, v } if opts.refine && t > 0.0 => {
                    let p0 = seeds.node(i, j);
                    let h = seeds.spacing();
                    let guess = [p0[0] + u * h[0], p0[1] + v * h[1]];
                    match shoot(ctx, x, guess, t, xi0, opts)? {
                        Fate::Arrived(e) => Ok((e.phase, e.xi, e.a0, false)),
                        Fate::Caustic => Ok((f64::NAN, [f64::NAN; 2], C64::new(f64::NAN, f64::NAN), true)),
                        Fate::Lost => Err(Error::InterpolationGap { x }),
                    }
                }
                Located::Cell { i, j, u, v } => {
                    let get = |a: usize, b: usize| match &fates[seeds.index(a, b)] {
                        Fate::Arrived(e) => e,
                        _ => unreachable!("located cells have arrived corners"),
                    };
                    let ends = [get(i, j), get(i + 1, j), get(i, j + 1), get(i + 1, j + 1)];
                    let w = [(1.0 - u) * (1.0 - v), u * (1.0 - v), (1.0 - u) * v, u * v];
                    let (phi, grad, a0) = blend(ends, w, x);
                    Ok((phi, grad, a0, false))
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    if !opts.allow_caustics {
        if let Some(k) = samples.iter().position(|s| s.3) {
            let det = fates
                .iter()
                .filter_map(|f| match f {
                    Fate::Arrived(e) => Some(e.det_jac),
                    _ => None,
                })
                .fold(f64::INFINITY, f64::min);
            let _ = k;
            return Err(Error::CausticEncountered { t, det_jac: det.min(CAUSTIC_DET) });
        }
    }
    let endpoints = fates
        .iter()
        .map(|f| match f {
            Fate::Arrived(e) => Some(*e),
            _ => None,
        })
        .collect();
    Ok(PhaseChart {
        t,
        xi0,
        grid: *target,
        phi: samples.iter().map(|s| s.0).collect(),
        grad: samples.iter().map(|s| s.1).collect(),
        a0: samples.iter().map(|s| s.2).collect(),
        caustic: samples.iter().map(|s| s.3).collect(),
        seeds: *seeds,
        endpoints,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EikonalResidual {
    pub max: f64,
    pub mean: f64,
    pub delta: f64,
}

/// `|phi_t - c|grad phi|_g|` on the chart, with `phi_t` from charts at
/// `t +- delta`.
pub fn eikonal_residual(
    t: f64,
    delta: f64,
    xi0: [f64; 2],
    seeds: &Grid2,
    target: &Grid2,
    medium: &Medium,
    g: &BoundaryMetric,
    opts: &ChartOptions,
) -> Result<EikonalResidual> {
    if !(delta > 0.0 && delta < t) {
        return Err(Error::InvalidInput(format!("need 0 < delta < t, got delta = {delta}, t = {t}")));
    }
    let ctx = RayContext::new(medium, g)?;
    let o = ChartOptions { transport: false, ..*opts };
    let cm = phase_chart_in(t - delta, xi0, seeds, target, &ctx, &o)?;
    let cp = phase_chart_in(t + delta, xi0, seeds, target, &ctx, &o)?;
    let c0 = phase_chart_in(t, xi0, seeds, target, &ctx, &o)?;
    let mut max: f64 = 0.0;
    let mut sum = 0.0;
    for k in 0..target.len() {
        let x = target.node_at(k);
        let phi_t = (cp.phi[k] - cm.phi[k]) / (2.0 * delta);
        let lam = ctx.speed(x, None)? * g.norm_unchecked(x, c0.grad[k]);
        let r = (phi_t - lam).abs();
        max = max.max(r);
        sum += r;
    }
    Ok(EikonalResidual { max, mean: sum / target.len() as f64, delta })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BankOptions {
    pub chart: ChartOptions,
    /// Seed spacing of each fan.
    pub seed_spacing: f64,
}

impl Default for BankOptions {
    fn default() -> Self {
        Self { chart: ChartOptions::default(), seed_spacing: 0.2 }
    }
}

/// Phase charts for unit covectors at uniformly spaced angles. By
/// homogeneity `phi(t, x, k xi_hat) = k phi(t, x, xi_hat)` and `a0` is of
/// degree zero, so one chart per direction serves every frequency.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartBank {
    pub t: f64,
    pub grid: Grid2,
    pub theta0: f64,
    pub dtheta: f64,
    /// `phi - x . xi_hat`, per angle then grid node.
    psi: Vec<Vec<f64>>,
    /// `grad phi - xi_hat`.
    dgrad: Vec<Vec<[f64; 2]>>,
    a0: Vec<Vec<C64>>,
}

impl ChartBank {
    /// Charts at `n_theta` angles spanning `[theta_min, theta_max]`, widened by
    /// two guard angles on each side for the cubic angular interpolation.
    pub fn build(
        t: f64,
        theta_min: f64,
        theta_max: f64,
        n_theta: usize,
        target: &Grid2,
        medium: &Medium,
        g: &BoundaryMetric,
        opts: &BankOptions,
    ) -> Result<Self> {
        if n_theta < 2 || !(theta_max > theta_min) {
            return Err(Error::InvalidInput("chart bank needs at least two increasing angles".into()));
        }
        let ctx = RayContext::new(medium, g)?;
        let dtheta = (theta_max - theta_min) / (n_theta - 1) as f64;
        let theta0 = theta_min - 2.0 * dtheta;
        let total = n_theta + 4;
        let bx = ctx.working_box();
        let center = [0.5 * (target.min[0] + target.max[0]), 0.5 * (target.min[1] + target.max[1])];
        let c = ctx.reference_speed();
        let gi = g.inverse(center);
        let mut psi = Vec::with_capacity(total);
        let mut dgrad = Vec::with_capacity(total);
        let mut a0 = Vec::with_capacity(total);
        for jth in 0..total {
            let th = theta0 + jth as f64 * dtheta;
            let u = [th.cos(), th.sin()];
            let n = g.norm_unchecked(center, u);
            // rays move along -c g^{-1} xi / |xi|_g; seeds sit upstream
            let v = [c * t * (gi[0] * u[0] + gi[1] * u[1]) / n, c * t * (gi[1] * u[0] + gi[2] * u[1]) / n];
            let margin = 0.25 * c * t + 2.0 * opts.seed_spacing;
            let lo = [
                (target.min[0].min(target.min[0] + v[0]) - margin).max(bx.min[0]),
                (target.min[1].min(target.min[1] + v[1]) - margin).max(bx.min[1]),
            ];
            let hi = [
                (target.max[0].max(target.max[0] + v[0]) + margin).min(bx.max[0]),
                (target.max[1].max(target.max[1] + v[1]) + margin).min(bx.max[1]),
            ];
            let mut seeds = Grid2::with_spacing(lo, hi, opts.seed_spacing)?;
            seeds.max = [seeds.max[0].min(bx.max[0]), seeds.max[1].min(bx.max[1])];
            let chart = phase_chart_in(t, u, &seeds, target, &ctx, &opts.chart)?;
            psi.push(
                (0..target.len())
                    .map(|k| {
                        let x = target.node_at(k);
                        chart.phi[k] - (x[0] * u[0] + x[1] * u[1])
                    })
                    .collect(),
            );
            dgrad.push(chart.grad.iter().map(|gr| [gr[0] - u[0], gr[1] - u[1]]).collect());
            a0.push(chart.a0);
        }
        Ok(Self { t, grid: *target, theta0, dtheta, psi, dgrad, a0 })
    }

    pub fn n_theta(&self) -> usize {
        self.psi.len()
    }

    /// First angle index and cubic Lagrange weights for angle `theta`.
    pub fn weights(&self, theta: f64) -> Result<(usize, [f64; 4])> {
        let r = (theta - self.theta0) / self.dtheta;
        let n = self.n_theta();
        if !(r >= 1.0 - 1e-9 && r <= (n - 2) as f64 + 1e-9) {
            return Err(Error::InvalidInput(format!("angle {theta} outside the chart bank")));
        }
        let j = (r.floor() as usize).clamp(1, n - 3);
        let s = r - j as f64; // nodes at -1, 0, 1, 2
        let w = [
            -s * (s - 1.0) * (s - 2.0) / 6.0,
            (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
            -(s + 1.0) * s * (s - 2.0) / 2.0,
            (s + 1.0) * s * (s - 1.0) / 6.0,
        ];
        Ok((j - 1, w))
    }

    /// `(phi, grad phi, a0)` at grid node `k` for covector `k_mag (cos, sin)`
    /// of angle `theta` whose weights are `(j0, w)`.
    #[inline]
    pub fn sample(&self, k: usize, j0: usize, w: &[f64; 4], theta: f64, x: [f64; 2], k_mag: f64) -> (f64, [f64; 2], C64) {
        let mut psi = 0.0;
        let mut dg = [0.0; 2];
        let mut a0 = C64::new(0.0, 0.0);
        for m in 0..4 {
            let jm = j0 + m;
            psi += w[m] * self.psi[jm][k];
            dg[0] += w[m] * self.dgrad[jm][k][0];
            dg[1] += w[m] * self.dgrad[jm][k][1];
            a0 += self.a0[jm][k] * w[m];
        }
        let u = [theta.cos(), theta.sin()];
        let phi = k_mag * (psi + x[0] * u[0] + x[1] * u[1]);
        (phi, [k_mag * (u[0] + dg[0]), k_mag * (u[1] + dg[1])], a0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::{MaterialBump, MaterialPoint, Param};

    fn poisson() -> MaterialPoint {
        MaterialPoint::new(1.0, 1.0, 1.0).unwrap()
    }

    fn flat() -> Medium {
        Medium::Rayleigh(MaterialField::constant(poisson()).unwrap())
    }

    fn bump() -> Medium {
        let b = MaterialBump::new(Param::Mu, 0.3, [0.3, 0.2], 0.8);
        Medium::Rayleigh(MaterialField::new(poisson(), vec![b], WorkingBox::default()).unwrap())
    }

    #[test]
    fn flat_rays_are_straight() {
        let g = BoundaryMetric::identity();
        let c = rayleigh_speed_fast(&poisson()).unwrap();
        let ray = trace_ray([0.5, -0.2], [3.0, 4.0], 1.0, 1e-2, &flat(), &g).unwrap();
        let end = ray.last().unwrap();
        assert!((end.x[0] - (0.5 - c * 0.6)).abs() < 1e-12);
        assert!((end.x[1] - (-0.2 - c * 0.8)).abs() < 1e-12);
        assert_eq!(end.xi, [3.0, 4.0]);
        assert!((end.phase - (1.5 - 0.8)).abs() < 1e-12);
    }

    #[test]
    fn bump_ray_conserves_lambda_and_phase() {
        let g = BoundaryMetric::identity();
        let ray = trace_ray([0.0, 0.0], [1.0, 0.5], 1.0, 1e-3, &bump(), &g).unwrap();
        let l0 = ray[0].lambda;
        for s in &ray {
            assert!((s.lambda - l0).abs() / l0 < 1e-8, "drift {}", (s.lambda - l0).abs() / l0);
            assert!((s.phase - ray[0].phase).abs() < 1e-8);
        }
    }

    #[test]
    fn speed_jet_matches_finite_differences() {
        let m = bump();
        let x = [0.1, -0.3];
        let c = m.speed(x, None).unwrap();
        let j = m.speed_jet(x, c);
        let h = 1e-5;
        let cp = m.speed([x[0] + h, x[1]], None).unwrap();
        let cm = m.speed([x[0] - h, x[1]], None).unwrap();
        assert!((j.g[0] - (cp - cm) / (2.0 * h)).abs() < 1e-8);
        assert!((j.h[0][0] - (cp - 2.0 * c + cm) / (h * h)).abs() < 1e-4);
    }

    #[test]
    fn dynamic_flat_is_trivial() {
        let g = BoundaryMetric::identity();
        let m = flat();
        let ray = trace_ray([0.0, 0.0], [1.0, 1.0], 0.5, 5e-3, &m, &g).unwrap();
        let mut d = dynamic_ray(&ray, &m, &g).unwrap();
        for s in &d.states {
            assert_eq!(s.hess.unwrap(), [[0.0; 2]; 2]);
            assert_eq!(s.jac.unwrap(), [[1.0, 0.0], [0.0, 1.0]]);
        }
        let logs = transport_amplitude(&mut d, &m, &g, None).unwrap();
        assert!(logs.iter().all(|l| l.a0 == C64::new(1.0, 0.0)));
    }

    #[test]
    fn cumulative_integral_is_exact_for_cubics() {
        let h = 0.1;
        let f: Vec<C64> = (0..11).map(|i| C64::new((i as f64 * h).powi(3), 0.0)).collect();
        let int = cumulative_integral(&f, h);
        for (i, v) in int.iter().enumerate() {
            assert!((v.re - (i as f64 * h).powi(4) / 4.0).abs() < 1e-14);
        }
    }

    #[test]
    fn transport_split_is_consistent() {
        let g = BoundaryMetric::identity();
        let m = bump();
        let ctx = RayContext::new(&m, &g).unwrap();
        let mut d = trace_dynamic([0.0, 0.0], [2.0, 1.0], 0.4, 4e-3, &ctx).unwrap();
        let logs = transport_amplitude(&mut d, &m, &g, Some(10)).unwrap();
        assert_eq!(logs[0].a0, C64::new(1.0, 0.0));
        for l in &logs {
            assert!((l.a0.norm() - (-l.gamma1_int).exp()).abs() < 1e-12);
            assert!((l.upsilon + l.gamma2_int).abs() < 1e-15);
        }
        // the bump focuses or defocuses: a0 departs from 1
        assert!((logs.last().unwrap().a0 - 1.0).norm() > 1e-6);
    }

    fn lens() -> Medium {
        let b = MaterialBump::new(Param::Rho, 1.5, [0.0, 0.0], 0.7);
        Medium::Rayleigh(MaterialField::new(poisson(), vec![b], WorkingBox::default()).unwrap())
    }

    #[test]
    fn jacobi_fields_match_finite_differences() {
        let g = BoundaryMetric::identity();
        let m = bump();
        let ctx = RayContext::new(&m, &g).unwrap();
        let (x0, xi0, t) = ([-0.5, 0.1], [1.0, -0.4], 0.8);
        let d = trace_dynamic(x0, xi0, t, 2e-3, &ctx).unwrap();
        let s = d.last();
        let h = 1e-5;
        for i in 0..2 {
            let mut p = x0;
            let mut q = x0;
            p[i] += h;
            q[i] -= h;
            let rp = trace_dynamic(p, xi0, t, 2e-3, &ctx).unwrap();
            let rm = trace_dynamic(q, xi0, t, 2e-3, &ctx).unwrap();
            let (a, b) = (rp.last(), rm.last());
            let jac = s.jac.unwrap();
            for r in 0..2 {
                assert!((jac[r][i] - (a.x[r] - b.x[r]) / (2.0 * h)).abs() < 1e-7);
            }
        }
        // grad phi = xi along the fan; Hess phi = d xi / d x
        let hs = s.hess.unwrap();
        assert!((hs[0][1] - hs[1][0]).abs() < 1e-12);
    }

    #[test]
    fn rays_are_homogeneous_in_xi() {
        let g = BoundaryMetric::constant(1.2, 0.1, 0.9).unwrap();
        let m = bump();
        let a = trace_ray([0.0, 0.4], [0.6, 0.8], 0.5, 5e-3, &m, &g).unwrap();
        let b = trace_ray([0.0, 0.4], [3.0, 4.0], 0.5, 5e-3, &m, &g).unwrap();
        let (a, b) = (a.last().unwrap(), b.last().unwrap());
        for k in 0..2 {
            assert!((a.x[k] - b.x[k]).abs() < 1e-12);
            assert!((5.0 * a.xi[k] - b.xi[k]).abs() < 1e-11);
        }
        assert!((5.0 * a.phase - b.phase).abs() < 1e-11);
    }

    #[test]
    fn rk4_is_fourth_order() {
        let g = BoundaryMetric::identity();
        let b = MaterialBump::new(Param::Mu, 0.5, [0.0, 0.0], 0.3);
        let m = Medium::Rayleigh(MaterialField::new(poisson(), vec![b], WorkingBox::default()).unwrap());
        let end = |dt: f64| *trace_ray([-1.0, 0.1], [-1.0, 0.2], 2.0, dt, &m, &g).unwrap().last().unwrap();
        let r = end(1e-3);
        let err = |e: RayState| (e.x[0] - r.x[0]).hypot(e.x[1] - r.x[1]);
        let (e1, e2) = (err(end(2e-2)), err(end(1e-2)));
        let ratio = e1 / e2;
        assert!(ratio > 12.0 && ratio < 20.0, "ratio {ratio} ({e1}, {e2})");
    }

    #[test]
    fn dt_must_resolve_the_interval() {
        let g = BoundaryMetric::identity();
        let e = trace_ray([0.0, 0.0], [1.0, 0.0], 1.0, 0.02, &flat(), &g).unwrap_err();
        assert!(matches!(e, Error::InvalidInput(_)));
    }

    #[test]
    fn leaving_the_box_is_reported() {
        let g = BoundaryMetric::identity();
        let e = trace_ray([-9.9, 0.0], [1.0, 0.0], 1.0, 1e-2, &flat(), &g).unwrap_err();
        assert!(matches!(e, Error::LeftWorkingBox { .. }));
    }

    #[test]
    fn slow_lens_focuses_into_a_caustic() {
        let g = BoundaryMetric::identity();
        let m = lens();
        let ray = trace_ray([-3.0, 0.25], [-1.0, 0.0], 9.0, 1e-2, &m, &g).unwrap();
        let d = dynamic_ray(&ray, &m, &g).unwrap();
        let c = d.caustic.expect("caustic");
        assert!(c.t > 1.0 && c.t < 9.0);
        assert!(d.require_regular().is_err());
        assert!(d.states.iter().all(|s| s.det_jac().unwrap() > 0.0));
    }

    #[test]
    fn flat_chart_is_a_plane_wave() {
        let g = BoundaryMetric::identity();
        let m = flat();
        let c = rayleigh_speed_fast(&poisson()).unwrap();
        let xi0 = [0.8, -0.6];
        let target = Grid2::new([-1.0, -1.0], [1.0, 1.0], [7, 7]).unwrap();
        let seeds = Grid2::with_spacing([-2.0, -2.5], [2.5, 2.0], 0.25).unwrap();
        let chart = phase_chart(1.0, xi0, &seeds, &target, &m, &g, &ChartOptions::default()).unwrap();
        for (k, x) in target.nodes().enumerate() {
            let exact = x[0] * xi0[0] + x[1] * xi0[1] + c;
            assert!((chart.phi[k] - exact).abs() < 1e-12, "{} vs {exact}", chart.phi[k]);
            assert!((chart.grad[k][0] - xi0[0]).abs() < 1e-14);
            assert_eq!(chart.a0[k], C64::new(1.0, 0.0));
        }
    }

    #[test]
    fn bump_chart_solves_the_eikonal_equation() {
        let g = BoundaryMetric::identity();
        let m = bump();
        let target = Grid2::new([-0.5, -0.5], [0.5, 0.5], [5, 5]).unwrap();
        let seeds = Grid2::with_spacing([-1.8, -0.9], [-0.2, 0.9], 0.1).unwrap();
        let opts = ChartOptions { dt: 2e-3, transport: false, refine: true, ..Default::default() };
        let r = eikonal_residual(1.0, 1e-4, [-1.0, 0.0], &seeds, &target, &m, &g, &opts).unwrap();
        eprintln!("eikonal residual {}", r.max);
        assert!(r.max < 1e-5, "residual {}", r.max);
    }
}
