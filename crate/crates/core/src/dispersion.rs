//! Rayleigh and Stoneley secular functions and characteristic speeds.
//!
//! Everything here is evaluated at normalized `|xi|_g = 1`; homogeneity
//! restores general covectors. `a` uses the shear speed and `b` the
//! compressional speed, so `a <= b`.

use nalgebra::Matrix2;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::{Jet, Real};
use crate::material::{Bimaterial, MaterialPoint};
use crate::C64;

/// Relative distance kept from the endpoints of `(0, c_s)` when bracketing.
pub const BRACKET_EPS: f64 = 1e-6;
pub const RAYLEIGH_SCAN: usize = 1024;
pub const STONELEY_SCAN: usize = 2048;
const BISECT_TOL: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DispersionKernels {
    pub s: f64,
    pub a: f64,
    pub b: f64,
    pub theta_bar: f64,
}

impl DispersionKernels {
    /// `alpha = a |xi|_g`.
    pub fn alpha(&self, norm: f64) -> f64 {
        self.a * norm
    }

    /// `beta = b |xi|_g`.
    pub fn beta(&self, norm: f64) -> f64 {
        self.b * norm
    }
}

/// `1 - a b` without cancellation, from `x = s^2/c_s^2`, `y = s^2/c_p^2`.
#[inline]
pub(crate) fn one_minus_ab<T: Real>(x: T, y: T, a: T, b: T) -> T {
    (x + y - x * y) / (a * b + 1.0)
}

/// `(a, b, 1 - ab, x)` for slowness `s` in the medium `(rho, lam, mu)`.
#[inline]
pub(crate) fn radicals<T: Real>(s: T, rho: T, lam: T, mu: T) -> (T, T, T, T) {
    let rs2 = rho * s * s;
    let x = rs2 / mu;
    let y = rs2 / (lam + mu * 2.0);
    let a = (T::cst(1.0) - x).sqrt();
    let b = (T::cst(1.0) - y).sqrt();
    (a, b, one_minus_ab(x, y, a, b), x)
}

pub(crate) fn check_range(s: f64, limit: f64, allow_zero: bool) -> Result<()> {
    let low_ok = if allow_zero { s >= 0.0 } else { s > 0.0 };
    if !(low_ok && s < limit) {
        return Err(Error::OutsideEllipticRange { s, limit });
    }
    Ok(())
}

pub fn kernels(s: f64, m: &MaterialPoint) -> Result<DispersionKernels> {
    m.validate()?;
    check_range(s, m.cs(), false)?;
    let (a, b, d, x) = radicals(s, m.rho, m.lam, m.mu);
    Ok(DispersionKernels { s, a, b, theta_bar: 2.0 * d - x })
}

/// `R(s) = 4 mu^2 a b - (rho s^2 - 2 mu)^2` for any scalar type.
#[inline]
pub fn rayleigh_generic<T: Real>(s: T, rho: T, lam: T, mu: T) -> T {
    let (a, b, _, _) = radicals(s, rho, lam, mu);
    let q = rho * s * s - mu * 2.0;
    mu * mu * a * b * 4.0 - q * q
}

pub fn rayleigh_residual(s: f64, m: &MaterialPoint) -> Result<f64> {
    m.validate()?;
    check_range(s, m.cs(), true)?;
    Ok(rayleigh_generic(s, m.rho, m.lam, m.mu))
}

/// `(R, R', R'')` at `s`.
pub fn rayleigh_derivatives(s: f64, m: &MaterialPoint) -> (f64, f64, f64) {
    let j = rayleigh_generic(
        Jet::<1>::var(s, 0),
        Jet::constant(m.rho),
        Jet::constant(m.lam),
        Jet::constant(m.mu),
    );
    (j.v, j.g[0], j.h[0][0])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RayleighRoot {
    pub c_r: f64,
    /// `R'(c_R)`, negative.
    pub slope: f64,
}

/// Number of sign changes of `f` over `n` uniform samples of `[lo, hi]`,
/// plus the bracket of the last one.
fn scan_sign_changes(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> (usize, Option<(f64, f64)>) {
    let mut count = 0;
    let mut bracket = None;
    let mut s_prev = lo;
    let mut f_prev = f(lo);
    for i in 1..n {
        let s = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        let v = f(s);
        if (f_prev > 0.0 && v <= 0.0) || (f_prev < 0.0 && v >= 0.0) {
            if !(v == 0.0 && i + 1 < n) || f_prev != 0.0 {
                count += 1;
                bracket = Some((s_prev, s));
            }
        }
        s_prev = s;
        f_prev = v;
    }
    (count, bracket)
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    while hi - lo > BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Newton polish that only accepts steps staying inside `[lo, hi]` and
/// reducing the residual.
fn polish(f: impl Fn(f64) -> (f64, f64), mut s: f64, lo: f64, hi: f64) -> f64 {
    for _ in 0..3 {
        let (v, d) = f(s);
        if v == 0.0 || d == 0.0 {
            break;
        }
        let next = s - v / d;
        if !(next > lo && next < hi) || f(next).0.abs() >= v.abs() {
            break;
        }
        s = next;
    }
    s
}

/// Rayleigh speed by a 1024-sample sign scan, bisection and Newton polish.
pub fn rayleigh_speed(m: &MaterialPoint) -> Result<RayleighRoot> {
    m.validate()?;
    let cs = m.cs();
    let (lo, hi) = (BRACKET_EPS * cs, cs * (1.0 - BRACKET_EPS));
    let r = |s: f64| rayleigh_generic(s, m.rho, m.lam, m.mu);
    let (count, bracket) = scan_sign_changes(r, lo, hi, RAYLEIGH_SCAN);
    if count != 1 {
        return Err(Error::RootCountMismatch { found: count });
    }
    let (a, b) = bracket.expect("one sign change");
    let s = bisect(r, a, b);
    let s = polish(
        |s| {
            let (v, d, _) = rayleigh_derivatives(s, m);
            (v, d)
        },
        s,
        a - BISECT_TOL,
        b + BISECT_TOL,
    );
    let (_, slope, _) = rayleigh_derivatives(s, m);
    Ok(RayleighRoot { c_r: s, slope })
}

/// Fast Rayleigh speed for inner loops: safeguarded Newton from the
/// Viktorov estimate, falling back to the full scan.
pub fn rayleigh_speed_fast(m: &MaterialPoint) -> Result<f64> {
    let cs = m.cs();
    let nu = m.lam / (2.0 * (m.lam + m.mu));
    let mut s = cs * (0.862 + 1.14 * nu) / (1.0 + nu);
    for _ in 0..30 {
        let (v, d, _) = rayleigh_derivatives(s, m);
        let step = v / d;
        let next = s - step;
        if !(next > 0.5 * s && next < cs) {
            break;
        }
        s = next;
        if step.abs() <= 1e-15 * cs {
            return Ok(s);
        }
    }
    Ok(rayleigh_speed(m)?.c_r)
}

/// Normalized interface block entries `(M11, M22, z)` with `M12 = -i z`.
#[inline]
pub fn stoneley_entries<T: Real>(s: T, plus: [T; 3], minus: [T; 3]) -> (T, T, T) {
    let side = |p: [T; 3]| {
        let (a, b, d, _) = radicals(s, p[0], p[1], p[2]);
        let kappa = p[0] * s * s / d;
        (a, b, kappa)
    };
    let (ap, bp, kp) = side(plus);
    let (am, bm, km) = side(minus);
    let m11 = bp * kp + bm * km;
    let m22 = ap * kp + am * km;
    let z = (plus[2] - minus[2]) * 2.0 - (kp - km);
    (m11, m22, z)
}

/// Smaller eigenvalue of the normalized interface block.
#[inline]
pub fn stoneley_m1_generic<T: Real>(s: T, plus: [T; 3], minus: [T; 3]) -> T {
    let (m11, m22, z) = stoneley_entries(s, plus, minus);
    let diff = m11 - m22;
    let root = (diff * diff + z * z * 4.0).sqrt();
    let m2 = (m11 + m22 + root) / 2.0;
    (m11 * m22 - z * z) / m2
}

/// `S(s)` of the interface secular equation.
#[inline]
pub fn stoneley_s_generic<T: Real>(s: T, plus: [T; 3], minus: [T; 3]) -> T {
    let (ap, bp, dp, _) = radicals(s, plus[0], plus[1], plus[2]);
    let (am, bm, dm, _) = radicals(s, minus[0], minus[1], minus[2]);
    let (rp, rm) = (plus[0], minus[0]);
    let dmu = plus[2] - minus[2];
    let drho = rp - rm;
    let s2 = s * s;
    ((rp * am + rm * ap) * (rp * bm + rm * bp) - drho * drho) * s2 * s2
        - dmu * dmu * dp * dm * 4.0
        + dmu * (rp * dm - rm * dp) * s2 * 4.0
}

fn arr(m: &MaterialPoint) -> [f64; 3] {
    [m.rho, m.lam, m.mu]
}

fn jet_arr(m: &MaterialPoint) -> [Jet<1>; 3] {
    [Jet::constant(m.rho), Jet::constant(m.lam), Jet::constant(m.mu)]
}

#[derive(Clone, Debug, PartialEq)]
pub struct StoneleyMatrices {
    pub s: f64,
    pub n_plus: Matrix2<C64>,
    pub n_minus: Matrix2<C64>,
    pub m: Matrix2<C64>,
    pub m1: f64,
    pub m2: f64,
    pub varrho: f64,
    /// `(1 - a+ b+, 1 - a- b-)`.
    pub denominators: (f64, f64),
}

impl StoneleyMatrices {
    pub fn det(&self) -> f64 {
        (self.m[(0, 0)] * self.m[(1, 1)] - self.m[(0, 1)] * self.m[(1, 0)]).re
    }

    /// Determinant of `(1 - a+ b+)(1 - a- b-) M`, i.e. `M` with its
    /// denominators cleared; equals `(1 - a+ b+)(1 - a- b-) S(s)`.
    pub fn det_cleared(&self) -> f64 {
        let k = self.denominators.0 * self.denominators.1;
        k * k * self.det()
    }
}

fn n_matrix(s: f64, m: &MaterialPoint) -> (Matrix2<C64>, f64) {
    let (a, b, d, _) = radicals(s, m.rho, m.lam, m.mu);
    let kappa = m.rho * s * s / d;
    let off = 2.0 * m.mu - kappa;
    (
        Matrix2::new(
            C64::new(b * kappa, 0.0),
            C64::new(0.0, -off),
            C64::new(0.0, off),
            C64::new(a * kappa, 0.0),
        ),
        d,
    )
}

/// `N+`, `N-`, `M = N+ + N-^T` and its eigenvalues at normalized `|xi|_g = 1`.
pub fn stoneley_matrices(s: f64, pair: &Bimaterial) -> Result<StoneleyMatrices> {
    pair.plus.validate()?;
    pair.minus.validate()?;
    check_range(s, pair.cs_min(), false)?;
    let (n_plus, dp) = n_matrix(s, &pair.plus);
    let (n_minus, dm) = n_matrix(s, &pair.minus);
    let m = n_plus + n_minus.transpose();
    let (m11, m22, z) = stoneley_entries(s, arr(&pair.plus), arr(&pair.minus));
    let varrho = (m11 - m22) * (m11 - m22) + 4.0 * z * z;
    let m2 = 0.5 * (m11 + m22 + varrho.sqrt());
    let m1 = (m11 * m22 - z * z) / m2;
    Ok(StoneleyMatrices { s, n_plus, n_minus, m, m1, m2, varrho, denominators: (dp, dm) })
}

/// [`stoneley_matrices`] for a pair of fields evaluated at `x`.
pub fn stoneley_matrix(s: f64, pair: &crate::material::MaterialPair, x: [f64; 2]) -> Result<StoneleyMatrices> {
    pair.working_box().check(x)?;
    stoneley_matrices(s, &pair.at(x))
}

pub fn stoneley_residual(s: f64, pair: &Bimaterial) -> Result<f64> {
    pair.plus.validate()?;
    pair.minus.validate()?;
    check_range(s, pair.cs_min(), false)?;
    Ok(stoneley_s_generic(s, arr(&pair.plus), arr(&pair.minus)))
}

/// `(m1, m1', m1'')` at `s`.
pub fn stoneley_m1_derivatives(s: f64, pair: &Bimaterial) -> (f64, f64, f64) {
    let j = stoneley_m1_generic(Jet::<1>::var(s, 0), jet_arr(&pair.plus), jet_arr(&pair.minus));
    (j.v, j.g[0], j.h[0][0])
}

pub fn stoneley_m1(s: f64, pair: &Bimaterial) -> f64 {
    stoneley_m1_generic(s, arr(&pair.plus), arr(&pair.minus))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StoneleyRoot {
    pub exists: bool,
    pub c_st: Option<f64>,
    /// `m1'(c_ST)`, negative.
    pub slope: Option<f64>,
}

impl StoneleyRoot {
    pub fn require(&self) -> Result<(f64, f64)> {
        match (self.c_st, self.slope) {
            (Some(c), Some(d)) if self.exists => Ok((c, d)),
            _ => Err(Error::NoStoneleyRoot),
        }
    }
}

/// Stoneley speed by a 2048-sample scan of `m1`, bisection and Newton polish.
pub fn stoneley_speed(pair: &Bimaterial) -> Result<StoneleyRoot> {
    pair.plus.validate()?;
    pair.minus.validate()?;
    let cmin = pair.cs_min();
    let (lo, hi) = (BRACKET_EPS * cmin, cmin * (1.0 - BRACKET_EPS));
    let f = |s: f64| stoneley_m1(s, pair);
    let (count, bracket) = scan_sign_changes(f, lo, hi, STONELEY_SCAN);
    match count {
        0 => Ok(StoneleyRoot { exists: false, c_st: None, slope: None }),
        1 => {
            let (a, b) = bracket.expect("one sign change");
            let s = bisect(f, a, b);
            let s = polish(
                |s| {
                    let (v, d, _) = stoneley_m1_derivatives(s, pair);
                    (v, d)
                },
                s,
                a - BISECT_TOL,
                b + BISECT_TOL,
            );
            let (_, slope, _) = stoneley_m1_derivatives(s, pair);
            Ok(StoneleyRoot { exists: true, c_st: Some(s), slope: Some(slope) })
        }
        n => Err(Error::RootCountMismatch { found: n }),
    }
}

/// Newton refinement of a Stoneley root from a nearby guess, with a full
/// scan as fallback.
pub fn stoneley_speed_near(pair: &Bimaterial, guess: f64) -> Result<f64> {
    let cmin = pair.cs_min();
    let mut s = guess.min(cmin * (1.0 - 1e-9));
    for _ in 0..30 {
        let (v, d, _) = stoneley_m1_derivatives(s, pair);
        let step = v / d;
        let next = s - step;
        if !(next > 0.0 && next < cmin) || !step.is_finite() {
            break;
        }
        s = next;
        if step.abs() <= 1e-15 * cmin {
            return Ok(s);
        }
    }
    stoneley_speed(pair)?.require().map(|(c, _)| c)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DefinitenessItem {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DefinitenessReport {
    pub items: Vec<DefinitenessItem>,
    /// Largest relative mismatch between the printed closed forms for
    /// `det N'(iota)`, `tr N'(iota)` and finite differences (informational).
    pub closed_form_mismatch: f64,
}

impl DefinitenessReport {
    pub fn all_passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }
}

/// `c = 2 mu (2 mu + lam) / (3 mu + lam)`, the `s -> 0` limit of `rho s^2 / (1 - ab)`.
pub fn small_slowness_limit(m: &MaterialPoint) -> f64 {
    2.0 * m.mu * (2.0 * m.mu + m.lam) / (3.0 * m.mu + m.lam)
}

/// Structural checks behind the uniqueness of the Stoneley root:
/// (a) positive-definite limits, (b) decreasing eigenvalues and the sign of
/// the derivative matrix, (c) positive traces.
pub fn definiteness_report(pair: &Bimaterial, grid: &[f64]) -> DefinitenessReport {
    let mut items = Vec::new();
    let cmin = pair.cs_min();
    for (label, m) in [("plus", &pair.plus), ("minus", &pair.minus)] {
        let c = small_slowness_limit(m);
        let bounds = 4.0 * m.mu / 3.0 < c && c < 2.0 * m.mu;
        let tr0 = 2.0 * c;
        let det0 = 4.0 * m.mu * (c - m.mu);
        let s_small = 1e-4 * m.cs();
        let (_, _, d, _) = radicals(s_small, m.rho, m.lam, m.mu);
        let limit_err = ((m.rho * s_small * s_small / d) - c).abs() / c;
        items.push(DefinitenessItem {
            name: format!("a_limit_{label}"),
            passed: bounds && tr0 > 0.0 && det0 > 0.0 && limit_err < 1e-6,
            detail: format!("c = {c:.12}, tr = {tr0:.6e}, det = {det0:.6e}, limit error = {limit_err:.3e}"),
        });
    }
    let in_range: Vec<f64> = grid.iter().copied().filter(|&s| s > 0.0 && s < cmin).collect();
    let h = 1e-6 * cmin;
    let (mut m1_ok, mut m2_ok, mut worst1, mut worst2) = (true, true, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &s in &in_range {
        let (s_lo, s_hi) = ((s - h).max(0.5 * h), (s + h).min(cmin * (1.0 - 1e-12)));
        let (Ok(lo), Ok(hi)) = (stoneley_matrices(s_lo, pair), stoneley_matrices(s_hi, pair)) else {
            continue;
        };
        let d1 = (hi.m1 - lo.m1) / (s_hi - s_lo);
        let d2 = (hi.m2 - lo.m2) / (s_hi - s_lo);
        worst1 = worst1.max(d1);
        worst2 = worst2.max(d2);
        m1_ok &= d1 < 0.0;
        m2_ok &= d2 < 0.0;
    }
    items.push(DefinitenessItem {
        name: "b_m1_decreasing".into(),
        passed: m1_ok,
        detail: format!("max dm1/ds = {worst1:.6e} over {} samples", in_range.len()),
    });
    items.push(DefinitenessItem {
        name: "b_m2_decreasing".into(),
        passed: m2_ok,
        detail: format!("max dm2/ds = {worst2:.6e} over {} samples", in_range.len()),
    });
    let mut mismatch: f64 = 0.0;
    for (label, m) in [("plus", &pair.plus), ("minus", &pair.minus)] {
        let (mut ok, mut min_det, mut max_tr) = (true, f64::INFINITY, f64::NEG_INFINITY);
        for &s in &in_range {
            let iota = s * s;
            let (a, b, d, _) = radicals(s, m.rho, m.lam, m.mu);
            let det_cf = m.rho * m.rho / (d * d) / (2.0 * a * b) * (a - b) * (a - b);
            let tr_cf = -m.rho * (a + b) / (2.0 * a * b * d * d) * ((a - b) * (a - b) + (a * b + 1.0).powi(2));
            ok &= det_cf > 0.0 && tr_cf < 0.0;
            min_det = min_det.min(det_cf);
            max_tr = max_tr.max(tr_cf);
            let hi_ = 1e-6 * iota.max(1e-8);
            if iota + hi_ < m.cs() * m.cs() && iota > hi_ {
                let np = n_matrix((iota + hi_).sqrt(), m).0;
                let nm = n_matrix((iota - hi_).sqrt(), m).0;
                let dn = (np - nm) / C64::new(2.0 * hi_, 0.0);
                let det_fd = (dn[(0, 0)] * dn[(1, 1)] - dn[(0, 1)] * dn[(1, 0)]).re;
                let tr_fd = (dn[(0, 0)] + dn[(1, 1)]).re;
                ok &= det_fd > 0.0 && tr_fd < 0.0;
                mismatch = mismatch
                    .max((det_fd - det_cf).abs() / det_fd.abs())
                    .max((tr_fd - tr_cf).abs() / tr_fd.abs());
            }
        }
        items.push(DefinitenessItem {
            name: format!("b_derivative_negative_definite_{label}"),
            passed: ok,
            detail: format!("min det N' = {min_det:.6e}, max tr N' = {max_tr:.6e}"),
        });
    }
    for (label, m) in [("plus", &pair.plus), ("minus", &pair.minus)] {
        let mut min_tr = f64::INFINITY;
        for &s in &in_range {
            let (n, _) = n_matrix(s, m);
            min_tr = min_tr.min((n[(0, 0)] + n[(1, 1)]).re);
        }
        items.push(DefinitenessItem {
            name: format!("c_trace_positive_{label}"),
            passed: in_range.is_empty() || min_tr > 0.0,
            detail: format!("min tr N = {min_tr:.6e}"),
        });
    }
    DefinitenessReport { items, closed_form_mismatch: mismatch }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poisson() -> MaterialPoint {
        MaterialPoint::new(1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn kernel_values() {
        let k = kernels(0.5, &poisson()).unwrap();
        assert!((k.a - 0.75f64.sqrt()).abs() < 1e-15);
        assert!((k.b - (11.0f64 / 12.0).sqrt()).abs() < 1e-15);
        assert!((k.theta_bar - 0.091688).abs() < 1e-6);
        assert!(matches!(kernels(1.0, &poisson()), Err(Error::OutsideEllipticRange { .. })));
        let k = kernels(1e-9, &poisson()).unwrap();
        assert!(k.theta_bar.abs() < 1e-15 && (k.a - 1.0).abs() < 1e-15);
    }

    #[test]
    fn residual_values() {
        let m = poisson();
        assert_eq!(rayleigh_residual(0.0, &m).unwrap(), 0.0);
        assert!((rayleigh_residual(0.5, &m).unwrap() - 0.254124).abs() < 2e-6);
        assert!((rayleigh_residual(1.0 - 1e-14, &m).unwrap() + 1.0).abs() < 1e-6);
    }

    #[test]
    fn poisson_rayleigh_speed() {
        let r = rayleigh_speed(&poisson()).unwrap();
        assert!((r.c_r - 0.919402).abs() < 1e-6);
        assert!(r.slope < 0.0);
        let scaled = rayleigh_speed(&poisson().scaled(3.7)).unwrap();
        assert!((scaled.c_r - r.c_r).abs() < 1e-13);
        let fast = rayleigh_speed_fast(&poisson()).unwrap();
        assert!((fast - r.c_r).abs() < 1e-14);
    }

    #[test]
    fn identical_sides() {
        let p = poisson();
        let pair = Bimaterial::new(p, p).unwrap();
        let sm = stoneley_matrices(0.5, &pair).unwrap();
        assert!((sm.det_cleared() - 0.006050271).abs() < 1e-9);
        let s = stoneley_residual(0.5, &pair).unwrap();
        assert!((s - 0.207289).abs() < 1e-6);
        let (dp, dm) = sm.denominators;
        assert!((sm.det_cleared() - dp * dm * s).abs() < 1e-14);
        assert!((sm.m1 + sm.m2 - (sm.m[(0, 0)] + sm.m[(1, 1)]).re).abs() < 1e-14);
        assert_eq!(sm.m[(1, 0)], sm.m[(0, 1)].conj());
        assert!(!stoneley_speed(&pair).unwrap().exists);
    }

    #[test]
    fn definiteness_poisson() {
        let p = poisson();
        assert!((small_slowness_limit(&p) - 1.5).abs() < 1e-15);
        let pair = Bimaterial::new(p, p).unwrap();
        let grid: Vec<f64> = (1..=64).map(|i| i as f64 / 65.0).collect();
        let rep = definiteness_report(&pair, &grid);
        assert!(rep.all_passed(), "{rep:?}");
        let empty = definiteness_report(&pair, &[]);
        assert!(empty.all_passed());
    }
}
