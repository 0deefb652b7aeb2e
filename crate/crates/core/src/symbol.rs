//! Principal symbols of the Dirichlet-to-Neumann map, their diagonalization,
//! the elliptic factor `e0` and the zeroth-order transport symbol `r0`.
//!
//! Covectors enter through their components in a g-orthonormal frame, so
//! every closed form below is the Euclidean one with `|xi|` replaced by
//! `|xi|_g`.

use nalgebra::{Matrix3, Vector3};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::dispersion::{
    radicals, rayleigh_derivatives, rayleigh_generic, rayleigh_speed_fast, stoneley_entries,
    stoneley_m1, stoneley_m1_derivatives, stoneley_speed, stoneley_speed_near,
};
use crate::error::{Error, Result};
use crate::material::{BoundaryMetric, EllipticPoint, MaterialField, MaterialPair, MaterialPoint};
use crate::C64;

pub type Mat3 = Matrix3<C64>;
pub type Vec3 = Vector3<C64>;

/// Relative window around the root inside which `e0` switches to its
/// Taylor form.
pub const E0_SWITCH: f64 = 1e-6;
/// Relative half-width of the tube around the characteristic variety where
/// `r0` is evaluated.
pub const R0_TUBE: f64 = 0.05;
/// Tube in which the three eigenvalues are required to be distinct.
const DISTINCT_TUBE: f64 = 0.1;
const MIN_DENOMINATOR: f64 = 1e-12;

const I: C64 = C64 { re: 0.0, im: 1.0 };

#[inline]
fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

#[inline]
fn im(x: f64) -> C64 {
    C64::new(0.0, x)
}

#[inline]
fn sgn(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

pub fn complex_rows(m: &Mat3) -> Vec<Vec<[f64; 2]>> {
    (0..3).map(|i| (0..3).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

/// A 3x3 complex symbol value together with the point it was evaluated at.
#[derive(Clone, Debug, PartialEq)]
pub struct Symbol3 {
    pub entries: Mat3,
    pub point: EllipticPoint,
}

impl Symbol3 {
    /// `max |S - S*|`.
    pub fn hermitian_defect(&self) -> f64 {
        (self.entries - self.entries.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Serialize for Symbol3 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Symbol3", 2)?;
        st.serialize_field("point", &self.point)?;
        st.serialize_field("entries", &complex_rows(&self.entries))?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalizationResult {
    /// Unitary diagonalizer; its first column is the polarization of the
    /// surface mode.
    pub w: Mat3,
    pub k1: f64,
    pub k2: f64,
    /// Eigenvalues `(m~1, m~2, m~3)` of the symbol.
    pub eigenvalues: [f64; 3],
    pub e0: Option<C64>,
}

impl DiagonalizationResult {
    /// `||W* W - I||_F`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.w.adjoint() * self.w - Mat3::identity()).norm()
    }

    /// `||W* S W - diag(m~)||_F / ||S||_F`.
    pub fn diagonal_residual(&self, symbol: &Mat3) -> f64 {
        let d = Mat3::from_diagonal(&Vec3::new(
            re(self.eigenvalues[0]),
            re(self.eigenvalues[1]),
            re(self.eigenvalues[2]),
        ));
        (self.w.adjoint() * symbol * self.w - d).norm() / symbol.norm()
    }

    pub fn first_column(&self) -> Vec3 {
        self.w.column(0).into_owned()
    }
}

impl Serialize for DiagonalizationResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("DiagonalizationResult", 5)?;
        st.serialize_field("w", &complex_rows(&self.w))?;
        st.serialize_field("k1", &self.k1)?;
        st.serialize_field("k2", &self.k2)?;
        st.serialize_field("eigenvalues", &self.eigenvalues)?;
        st.serialize_field("e0", &self.e0.map(|z| [z.re, z.im]))?;
        st.end()
    }
}

/// Scalars of one elastic side at `(tau, |xi|_g)`.
#[derive(Clone, Copy, Debug)]
struct Side {
    n: f64,
    tau: f64,
    rho: f64,
    lam: f64,
    mu: f64,
    alpha: f64,
    beta: f64,
    theta: f64,
    /// `|xi|_g^2 - alpha beta`.
    d: f64,
}

impl Side {
    fn new(m: &MaterialPoint, n: f64, tau: f64) -> Self {
        let s = tau / n;
        let (a, b, omab, x) = radicals(s, m.rho, m.lam, m.mu);
        Self {
            n,
            tau,
            rho: m.rho,
            lam: m.lam,
            mu: m.mu,
            alpha: n * a,
            beta: n * b,
            theta: n * n * (2.0 * omab - x),
            d: n * n * omab,
        }
    }

    fn check(&self) -> Result<()> {
        if !(self.d > MIN_DENOMINATOR * self.n * self.n) {
            return Err(Error::OutsideEllipticInterior {
                reason: format!("|xi|^2 - alpha beta = {:e} collapses", self.d),
            });
        }
        Ok(())
    }

    fn rt2(&self) -> f64 {
        self.rho * self.tau * self.tau
    }

    /// `N1`, with its real entries multiplied by `sign`.
    fn n1(&self, xt: [f64; 2], sign: f64) -> Mat3 {
        let [x1, x2] = xt;
        let (mu, th, dab) = (self.mu, self.theta, self.alpha - self.beta);
        let br = self.beta * self.rt2();
        let off = re(-sign * mu * x1 * x2 * dab);
        Mat3::new(
            re(sign * (mu * dab * x2 * x2 + br)),
            off,
            im(-mu * x1 * th),
            off,
            re(sign * (mu * dab * x1 * x1 + br)),
            im(-mu * x2 * th),
            im(mu * th * x1),
            im(mu * th * x2),
            re(sign * self.alpha * self.rt2()),
        )
    }

    fn symbol(&self, xt: [f64; 2], sign: f64) -> Mat3 {
        self.n1(xt, sign) / re(self.d)
    }
}

fn v0(xt: [f64; 2], n: f64) -> Mat3 {
    let (u1, u2) = (xt[0] / n, xt[1] / n);
    Mat3::new(re(u1), re(0.0), re(-u2), re(u2), re(0.0), re(u1), re(0.0), re(1.0), re(0.0))
}

/// Pointwise data shared by the one-sided operations.
struct Local {
    m: MaterialPoint,
    xt: [f64; 2],
    n: f64,
    s: f64,
}

fn local(pt: &EllipticPoint, field: &MaterialField, g: &BoundaryMetric) -> Result<Local> {
    field.working_box().check(pt.x)?;
    g.check_at(pt.x)?;
    let m = field.point(pt.x);
    m.validate()?;
    let s = pt.check_elliptic(m.cs(), g)?;
    let xt = g.frame_components(pt.x, pt.xi);
    let n = (xt[0] * xt[0] + xt[1] * xt[1]).sqrt();
    Ok(Local { m, xt, n, s })
}

/// Principal symbol of the DN map, `N1 / (|xi|_g^2 - alpha beta)`.
pub fn dn_symbol(pt: &EllipticPoint, m: &MaterialField, g: &BoundaryMetric) -> Result<Symbol3> {
    let l = local(pt, m, g)?;
    let side = Side::new(&l.m, l.n, pt.tau);
    side.check()?;
    Ok(Symbol3 { entries: side.symbol(l.xt, 1.0), point: *pt })
}

/// Same symbol for an explicit material point and frame covector, without
/// range checks.
pub fn dn_matrix(m: &MaterialPoint, tau: f64, xt: [f64; 2]) -> Mat3 {
    let n = (xt[0] * xt[0] + xt[1] * xt[1]).sqrt();
    Side::new(m, n, tau).symbol(xt, 1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryRestriction {
    pub u_out: Symbol3,
    pub u_out_inv: Symbol3,
    pub m_out: Symbol3,
}

fn restriction_pair(sd: &Side, xt: [f64; 2]) -> (Mat3, Mat3) {
    let [x1, x2] = xt;
    let (a, b) = (sd.alpha, sd.beta);
    let u = Mat3::new(
        re(0.0),
        im(-a),
        re(x1),
        im(a),
        re(0.0),
        re(x2),
        re(-x2),
        re(x1),
        im(b),
    );
    let ab = a * b;
    let u_inv = Mat3::new(
        re(-x1 * x2),
        re(x1 * x1 - ab),
        im(-a * x2),
        re(-(x2 * x2 - ab)),
        re(x1 * x2),
        im(a * x1),
        im(a * x1),
        im(a * x2),
        re(-a * a),
    ) * (-I / re(a * sd.d));
    (u, u_inv)
}

/// `U_out` and its inverse for a frozen material: columns one and two decay
/// like `exp(-alpha x3)`, column three like `exp(-beta x3)`. Also returns
/// `(alpha, beta)`.
pub fn restriction_matrices(m: &MaterialPoint, tau: f64, xt: [f64; 2]) -> Result<(Mat3, Mat3, [f64; 2])> {
    let n = (xt[0] * xt[0] + xt[1] * xt[1]).sqrt();
    if !(n > 0.0) {
        return Err(Error::InvalidInput("zero covector".into()));
    }
    check_range_rel(tau / n, m.cs())?;
    let sd = Side::new(m, n, tau);
    sd.check()?;
    let (u, ui) = restriction_pair(&sd, xt);
    Ok((u, ui, [sd.alpha, sd.beta]))
}

fn check_range_rel(s: f64, cs: f64) -> Result<()> {
    if !(s >= 0.0 && s < cs) {
        return Err(Error::OutsideEllipticRange { s, limit: cs });
    }
    Ok(())
}

/// Principal symbols of the boundary restriction `U_out`, its parametrix and
/// of the Neumann restriction `M_out`; `M_out U_out^{-1}` is the DN symbol.
pub fn boundary_restriction_symbols(
    pt: &EllipticPoint,
    m: &MaterialField,
    g: &BoundaryMetric,
) -> Result<BoundaryRestriction> {
    let l = local(pt, m, g)?;
    let sd = Side::new(&l.m, l.n, pt.tau);
    sd.check()?;
    let [x1, x2] = l.xt;
    let (a, b, mu) = (sd.alpha, sd.beta, sd.mu);
    let (u, u_inv) = restriction_pair(&sd, l.xt);
    let m_out = Mat3::new(
        re(-mu * x1 * x2),
        re(mu * (x1 * x1 + a * a)),
        im(2.0 * mu * b * x1),
        re(-mu * (x2 * x2 + a * a)),
        re(mu * x1 * x2),
        im(2.0 * mu * b * x2),
        im(-2.0 * mu * a * x2),
        im(2.0 * mu * a * x1),
        re(-2.0 * mu * l.n * l.n + sd.rt2()),
    ) * (-I);
    let wrap = |entries| Symbol3 { entries, point: *pt };
    Ok(BoundaryRestriction { u_out: wrap(u), u_out_inv: wrap(u_inv), m_out: wrap(m_out) })
}

/// First column of `W` and the eigen-data of the 2x2 block.
struct RayleighEigen {
    w1: Vec3,
    w2: Vec3,
    k1: f64,
    k2: f64,
    m: [f64; 3],
}

fn rayleigh_eigen(sd: &Side, xt: [f64; 2]) -> RayleighEigen {
    let rt2 = sd.rt2();
    let q = sd.n * sd.mu * sd.theta;
    let varrho = (sd.alpha - sd.beta).powi(2) * rt2 * rt2 + 4.0 * q * q;
    let root = varrho.sqrt();
    let m2 = 0.5 * ((sd.alpha + sd.beta) * rt2 + root);
    // m1 m2 = (|xi|^2 - alpha beta) R(tau, xi), free of the cancellation
    // in alpha beta rho^2 tau^4 - |xi|^2 mu^2 theta^2 near the root.
    let n4 = sd.n.powi(4);
    let m1 = sd.d * n4 * rayleigh_generic(sd.tau / sd.n, sd.rho, sd.lam, sd.mu) / m2;
    let m3 = sd.mu * sd.alpha * sd.d;
    // beta rho tau^2 - m1, a sum of non-negative terms.
    let p1 = 0.5 * ((sd.beta - sd.alpha) * rt2 + root);
    let k1 = p1.hypot(q);
    let k2 = if p1 > 0.0 { q.abs() * k1 / p1 } else { k1 };
    let u = [xt[0] / sd.n, xt[1] / sd.n];
    let w1 = Vec3::new(im(q * u[0] / k1), im(q * u[1] / k1), re(p1 / k1));
    // (i q, -q^2/p1)/k2 rewritten without cancellation.
    let sq = sgn(q);
    let w2 = Vec3::new(im(sq * p1 * u[0] / k1), im(sq * p1 * u[1] / k1), re(-sq * q / k1));
    RayleighEigen { w1, w2, k1, k2, m: [m1, m2, m3] }
}

fn assemble_w(xt: [f64; 2], n: f64, w1: Vec3, w2: Vec3) -> Mat3 {
    let mut w = Mat3::zeros();
    w.set_column(0, &w1);
    w.set_column(1, &w2);
    w.set_column(2, &v0(xt, n).column(2));
    w
}

/// Exact diagonalization `W = V0 V1` of the DN symbol.
pub fn diagonalize_dn(pt: &EllipticPoint, m: &MaterialField, g: &BoundaryMetric) -> Result<DiagonalizationResult> {
    let l = local(pt, m, g)?;
    let sd = Side::new(&l.m, l.n, pt.tau);
    sd.check()?;
    let e = rayleigh_eigen(&sd, l.xt);
    let eig = [e.m[0] / sd.d, e.m[1] / sd.d, e.m[2] / sd.d];
    let c = rayleigh_speed_fast(&l.m)?;
    if (l.s - c).abs() < DISTINCT_TUBE * c {
        let gap = (eig[0] - eig[2]).abs();
        if gap < 1e-10 * eig[1].abs() {
            return Err(Error::DegenerateEigenvalue { gap });
        }
    }
    let e0 = e0_rayleigh_at(l.s, &l.m, c);
    Ok(DiagonalizationResult {
        w: assemble_w(l.xt, l.n, e.w1, e.w2),
        k1: e.k1,
        k2: e.k2,
        eigenvalues: eig,
        e0: Some(e0),
    })
}

/// Normalized `m2(s) = m2 / |xi|_g^3`.
fn rayleigh_m2_normalized(s: f64, m: &MaterialPoint) -> f64 {
    let sd = Side::new(m, 1.0, s);
    let rt2 = sd.rt2();
    let q = sd.mu * sd.theta;
    let varrho = (sd.alpha - sd.beta).powi(2) * rt2 * rt2 + 4.0 * q * q;
    0.5 * ((sd.alpha + sd.beta) * rt2 + varrho.sqrt())
}

/// `e0 = R(s) / (i (s - c_R) m2(s))`, switching to the first-order Taylor
/// form of `R(s)/(s - c_R)` within `E0_SWITCH` of the root.
pub fn e0_rayleigh_at(s: f64, m: &MaterialPoint, c_r: f64) -> C64 {
    let m2 = rayleigh_m2_normalized(s, m);
    let ratio = if (s - c_r).abs() < E0_SWITCH * c_r {
        let (_, d1, d2) = rayleigh_derivatives(c_r, m);
        d1 + 0.5 * d2 * (s - c_r)
    } else {
        rayleigh_generic(s, m.rho, m.lam, m.mu) / (s - c_r)
    };
    -I * ratio / m2
}

/// Value of `e0` on the characteristic variety: `R'(c_R) / (i (a + b) rho c_R^2)`.
pub fn e0_rayleigh_on_root(m: &MaterialPoint, c_r: f64) -> C64 {
    let (_, d1, _) = rayleigh_derivatives(c_r, m);
    let (a, b, _, _) = radicals(c_r, m.rho, m.lam, m.mu);
    -I * d1 / ((a + b) * m.rho * c_r * c_r)
}

pub fn e0_rayleigh(pt: &EllipticPoint, m: &MaterialField, g: &BoundaryMetric) -> Result<C64> {
    let l = local(pt, m, g)?;
    Side::new(&l.m, l.n, pt.tau).check()?;
    let c = rayleigh_speed_fast(&l.m)?;
    Ok(e0_rayleigh_at(l.s, &l.m, c))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JumpSymbol {
    pub symbol: Symbol3,
    /// `V0* (Lambda+ - Lambda-) V0`: the interface block `M` and the scalar
    /// `mu+ alpha+ + mu- alpha-`.
    #[serde(serialize_with = "ser_mat")]
    pub reduced: Mat3,
}

fn ser_mat<S: Serializer>(m: &Mat3, s: S) -> std::result::Result<S::Ok, S::Error> {
    complex_rows(m).serialize(s)
}

struct PairLocal {
    plus: MaterialPoint,
    minus: MaterialPoint,
    xt: [f64; 2],
    n: f64,
    s: f64,
}

fn pair_local(pt: &EllipticPoint, pair: &MaterialPair, g: &BoundaryMetric) -> Result<PairLocal> {
    pair.working_box().check(pt.x)?;
    g.check_at(pt.x)?;
    let b = pair.at(pt.x);
    b.plus.validate()?;
    b.minus.validate()?;
    let s = pt.check_elliptic(b.cs_min(), g)?;
    let xt = g.frame_components(pt.x, pt.xi);
    let n = (xt[0] * xt[0] + xt[1] * xt[1]).sqrt();
    Ok(PairLocal { plus: b.plus, minus: b.minus, xt, n, s })
}

fn jump_matrix(plus: &MaterialPoint, minus: &MaterialPoint, tau: f64, xt: [f64; 2]) -> Mat3 {
    let n = (xt[0] * xt[0] + xt[1] * xt[1]).sqrt();
    Side::new(plus, n, tau).symbol(xt, 1.0) - Side::new(minus, n, tau).symbol(xt, -1.0)
}

/// `sigma(Lambda+) - sigma(Lambda-)` and its `V0` reduction.
pub fn dn_jump_symbol(pt: &EllipticPoint, pair: &MaterialPair, g: &BoundaryMetric) -> Result<JumpSymbol> {
    let l = pair_local(pt, pair, g)?;
    Side::new(&l.plus, l.n, pt.tau).check()?;
    Side::new(&l.minus, l.n, pt.tau).check()?;
    let j = jump_matrix(&l.plus, &l.minus, pt.tau, l.xt);
    let v = v0(l.xt, l.n);
    Ok(JumpSymbol { symbol: Symbol3 { entries: j, point: *pt }, reduced: v.adjoint() * j * v })
}

struct StoneleyEigen {
    w1: Vec3,
    w2: Vec3,
    k1: f64,
    k2: f64,
    m: [f64; 3],
}

fn stoneley_eigen(plus: &MaterialPoint, minus: &MaterialPoint, s: f64, xt: [f64; 2], n: f64) -> StoneleyEigen {
    let p = [plus.rho, plus.lam, plus.mu];
    let q = [minus.rho, minus.lam, minus.mu];
    let (m11, m22, z) = stoneley_entries(s, p, q);
    let root = ((m11 - m22).powi(2) + 4.0 * z * z).sqrt();
    let m2 = 0.5 * (m11 + m22 + root);
    let m1 = (m11 * m22 - z * z) / m2;
    // (m11 - m1)(m2 - m11) = z^2; use whichever factor is a plain sum.
    let (d1, d2) = if m11 >= m22 {
        let d1 = 0.5 * (m11 - m22 + root);
        (d1, if d1 > 0.0 { z * z / d1 } else { 0.0 })
    } else {
        let d2 = 0.5 * (m22 - m11 + root);
        (if d2 > 0.0 { z * z / d2 } else { 0.0 }, d2)
    };
    let u = [xt[0] / n, xt[1] / n];
    let k1n = d1.hypot(z);
    let (w1, w2) = if k1n > 0.0 {
        let w1 = Vec3::new(im(z * u[0] / k1n), im(z * u[1] / k1n), re(d1 / k1n));
        let sz = sgn(z);
        let w2 = Vec3::new(im(sz * d1 * u[0] / k1n), im(sz * d1 * u[1] / k1n), re(-sz * z / k1n));
        (w1, w2)
    } else {
        (Vec3::new(im(u[0]), im(u[1]), re(0.0)), Vec3::new(re(0.0), re(0.0), re(1.0)))
    };
    let sp = Side::new(plus, n, s * n);
    let sm = Side::new(minus, n, s * n);
    StoneleyEigen {
        w1,
        w2,
        k1: n * k1n,
        k2: n * d2.hypot(z),
        m: [n * m1, n * m2, sp.mu * sp.alpha + sm.mu * sm.alpha],
    }
}

/// `e0 = m1(s) / (i (s - c_ST))`, Taylor form within `E0_SWITCH` of the root.
pub fn e0_stoneley_at(s: f64, pair: &crate::material::Bimaterial, c_st: f64) -> C64 {
    let ratio = if (s - c_st).abs() < E0_SWITCH * c_st {
        let (_, d1, d2) = stoneley_m1_derivatives(c_st, pair);
        d1 + 0.5 * d2 * (s - c_st)
    } else {
        stoneley_m1(s, pair) / (s - c_st)
    };
    -I * ratio
}

/// Exact diagonalization of the interface jump symbol; `e0` is filled when a
/// Stoneley speed exists at `x`.
pub fn diagonalize_stoneley(
    pt: &EllipticPoint,
    pair: &MaterialPair,
    g: &BoundaryMetric,
) -> Result<DiagonalizationResult> {
    let l = pair_local(pt, pair, g)?;
    Side::new(&l.plus, l.n, pt.tau).check()?;
    Side::new(&l.minus, l.n, pt.tau).check()?;
    let e = stoneley_eigen(&l.plus, &l.minus, l.s, l.xt, l.n);
    let bim = pair.at(pt.x);
    let root = stoneley_speed(&bim)?;
    let e0 = root.c_st.map(|c| e0_stoneley_at(l.s, &bim, c));
    Ok(DiagonalizationResult {
        w: assemble_w(l.xt, l.n, e.w1, e.w2),
        k1: e.k1,
        k2: e.k2,
        eigenvalues: e.m,
        e0,
    })
}

pub fn e0_stoneley(pt: &EllipticPoint, pair: &MaterialPair, g: &BoundaryMetric) -> Result<C64> {
    let l = pair_local(pt, pair, g)?;
    let bim = pair.at(pt.x);
    let (c, _) = stoneley_speed(&bim)?.require()?;
    Ok(e0_stoneley_at(l.s, &bim, c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum R0Flag {
    /// Constant coefficients and metric: the dropped lower-order DN term
    /// vanishes identically.
    FlatExact,
    /// Variable coefficients: the lower-order DN term is not included.
    Truncated,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct R0Value {
    #[serde(serialize_with = "ser_c64")]
    pub value: C64,
    pub flag: R0Flag,
    /// Relative change of the Richardson value when all steps are halved.
    pub step_sensitivity: f64,
}

fn ser_c64<S: Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

/// What `r0` needs from a symbol at `(x, xi)` for fixed `tau`.
struct R0Sample {
    lam: Mat3,
    w1: Vec3,
    e0: C64,
    /// `p = i (tau - c |xi|_g)`.
    p: C64,
}

/// Which symbol `r0` is evaluated for.
#[derive(Clone, Copy)]
pub enum R0Model<'a> {
    Rayleigh(&'a MaterialField),
    Stoneley(&'a MaterialPair),
}

impl R0Model<'_> {
    fn is_constant(&self) -> bool {
        match self {
            R0Model::Rayleigh(m) => m.is_constant(),
            R0Model::Stoneley(p) => p.is_constant(),
        }
    }

    /// Length scale of the coefficient variation.
    fn scale(&self, g: &BoundaryMetric) -> f64 {
        let widths = match self {
            R0Model::Rayleigh(m) => m.bumps.iter().map(|b| b.width).collect::<Vec<_>>(),
            R0Model::Stoneley(p) => p.plus.bumps.iter().chain(&p.minus.bumps).map(|b| b.width).collect(),
        };
        widths.into_iter().chain(g.bumps.iter().map(|b| b.width)).fold(1.0, f64::min)
    }

    /// Characteristic speed at `x`, seeded by `guess` when available.
    fn speed(&self, x: [f64; 2], guess: Option<f64>) -> Result<f64> {
        match self {
            R0Model::Rayleigh(m) => rayleigh_speed_fast(&m.point(x)),
            R0Model::Stoneley(p) => {
                let b = p.at(x);
                match guess {
                    Some(c) => stoneley_speed_near(&b, c),
                    None => stoneley_speed(&b)?.require().map(|(c, _)| c),
                }
            }
        }
    }

    fn sample(&self, x: [f64; 2], tau: f64, xi: [f64; 2], g: &BoundaryMetric, c_guess: f64) -> Result<R0Sample> {
        let xt = g.frame_components(x, xi);
        let n = (xt[0] * xt[0] + xt[1] * xt[1]).sqrt();
        let s = tau / n;
        let c = self.speed(x, Some(c_guess))?;
        let p = im(tau - c * n);
        match self {
            R0Model::Rayleigh(f) => {
                let m = f.point(x);
                let sd = Side::new(&m, n, tau);
                let e = rayleigh_eigen(&sd, xt);
                Ok(R0Sample { lam: sd.symbol(xt, 1.0), w1: e.w1, e0: e0_rayleigh_at(s, &m, c), p })
            }
            R0Model::Stoneley(pair) => {
                let b = pair.at(x);
                let e = stoneley_eigen(&b.plus, &b.minus, s, xt, n);
                Ok(R0Sample {
                    lam: jump_matrix(&b.plus, &b.minus, tau, xt),
                    w1: e.w1,
                    e0: e0_stoneley_at(s, &b, c),
                    p,
                })
            }
        }
    }
}

/// Central differences of the quantities entering `r0` for one step pair.
struct Derivs {
    /// `D_xj (Lambda w1)`, `D_xj w1`, `D_xj p`.
    dx_lw: [Vec3; 2],
    dx_w: [Vec3; 2],
    dx_p: [C64; 2],
    /// `d_xij w1`, `d_xij Lambda`, `d_xij e0`.
    dxi_w: [Vec3; 2],
    dxi_lam: [Mat3; 2],
    dxi_e0: [C64; 2],
}

fn central(
    model: R0Model<'_>,
    pt: &EllipticPoint,
    g: &BoundaryMetric,
    c0: f64,
    hx: f64,
    hxi: f64,
) -> Result<Derivs> {
    let d_op = -I; // D = -i d
    let mut out = Derivs {
        dx_lw: [Vec3::zeros(); 2],
        dx_w: [Vec3::zeros(); 2],
        dx_p: [C64::new(0.0, 0.0); 2],
        dxi_w: [Vec3::zeros(); 2],
        dxi_lam: [Mat3::zeros(); 2],
        dxi_e0: [C64::new(0.0, 0.0); 2],
    };
    for j in 0..2 {
        let mut xp = pt.x;
        let mut xm = pt.x;
        xp[j] += hx;
        xm[j] -= hx;
        let a = model.sample(xp, pt.tau, pt.xi, g, c0)?;
        let b = model.sample(xm, pt.tau, pt.xi, g, c0)?;
        let k = re(1.0 / (2.0 * hx));
        out.dx_lw[j] = (a.lam * a.w1 - b.lam * b.w1) * k * d_op;
        out.dx_w[j] = (a.w1 - b.w1) * k * d_op;
        out.dx_p[j] = (a.p - b.p) * k * d_op;
        let mut kp = pt.xi;
        let mut km = pt.xi;
        kp[j] += hxi;
        km[j] -= hxi;
        let a = model.sample(pt.x, pt.tau, kp, g, c0)?;
        let b = model.sample(pt.x, pt.tau, km, g, c0)?;
        let k = re(1.0 / (2.0 * hxi));
        out.dxi_w[j] = (a.w1 - b.w1) * k;
        out.dxi_lam[j] = (a.lam - b.lam) * k;
        out.dxi_e0[j] = (a.e0 - b.e0) * k;
    }
    Ok(out)
}

fn richardson(coarse: &Derivs, fine: &Derivs) -> Derivs {
    let r3 = |a: Vec3, b: Vec3| (b * re(4.0) - a) / re(3.0);
    let rm = |a: Mat3, b: Mat3| (b * re(4.0) - a) / re(3.0);
    let rc = |a: C64, b: C64| (b * 4.0 - a) / 3.0;
    let pair3 = |a: &[Vec3; 2], b: &[Vec3; 2]| [r3(a[0], b[0]), r3(a[1], b[1])];
    Derivs {
        dx_lw: pair3(&coarse.dx_lw, &fine.dx_lw),
        dx_w: pair3(&coarse.dx_w, &fine.dx_w),
        dx_p: [rc(coarse.dx_p[0], fine.dx_p[0]), rc(coarse.dx_p[1], fine.dx_p[1])],
        dxi_w: pair3(&coarse.dxi_w, &fine.dxi_w),
        dxi_lam: [rm(coarse.dxi_lam[0], fine.dxi_lam[0]), rm(coarse.dxi_lam[1], fine.dxi_lam[1])],
        dxi_e0: [rc(coarse.dxi_e0[0], fine.dxi_e0[0]), rc(coarse.dxi_e0[1], fine.dxi_e0[1])],
    }
}

fn assemble_r0(d: &Derivs, at: &R0Sample) -> C64 {
    let mut r11 = C64::new(0.0, 0.0);
    let mut extra = C64::new(0.0, 0.0);
    for j in 0..2 {
        r11 += d.dxi_w[j].dotc(&d.dx_lw[j]);
        r11 += at.w1.dotc(&(d.dxi_lam[j] * d.dx_w[j]));
        extra += d.dxi_e0[j] * d.dx_p[j];
    }
    (r11 - I * extra) / at.e0
}

/// Leading zeroth-order symbol `r0 = e0^{-1} (R11 - i sum d_xi e0 D_x p)` of
/// the decoupled scalar equation, on a tube around the characteristic
/// variety. Coefficients are time independent, so only `(x, xi)` derivatives
/// contribute.
pub fn r0_for(model: R0Model<'_>, pt: &EllipticPoint, g: &BoundaryMetric) -> Result<R0Value> {
    let (s, c, at) = match model {
        R0Model::Rayleigh(f) => {
            let l = local(pt, f, g)?;
            let c = rayleigh_speed_fast(&l.m)?;
            (l.s, c, l)
        }
        R0Model::Stoneley(p) => {
            let l = pair_local(pt, p, g)?;
            let (c, _) = stoneley_speed(&p.at(pt.x))?.require()?;
            (l.s, c, Local { m: l.plus, xt: l.xt, n: l.n, s: l.s })
        }
    };
    if !((s - c).abs() < R0_TUBE * c) {
        return Err(Error::OutsideTube { s, c });
    }
    let hx = 1e-3 * model.scale(g);
    let hxi = 1e-3 * at.n;
    let here = model.sample(pt.x, pt.tau, pt.xi, g, c)?;
    let d1 = central(model, pt, g, c, hx, hxi)?;
    let d2 = central(model, pt, g, c, hx / 2.0, hxi / 2.0)?;
    let d4 = central(model, pt, g, c, hx / 4.0, hxi / 4.0)?;
    let value = assemble_r0(&richardson(&d1, &d2), &here);
    let check = assemble_r0(&richardson(&d2, &d4), &here);
    let step_sensitivity = if value == check {
        0.0
    } else {
        (value - check).norm() / value.norm().max(check.norm())
    };
    let flag = if model.is_constant() && g.is_constant() { R0Flag::FlatExact } else { R0Flag::Truncated };
    Ok(R0Value { value, flag, step_sensitivity })
}

pub fn r0_leading(pt: &EllipticPoint, m: &MaterialField, g: &BoundaryMetric) -> Result<R0Value> {
    r0_for(R0Model::Rayleigh(m), pt, g)
}

pub fn r0_leading_stoneley(pt: &EllipticPoint, pair: &MaterialPair, g: &BoundaryMetric) -> Result<R0Value> {
    r0_for(R0Model::Stoneley(pair), pt, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::rayleigh_speed;
    use crate::material::{MaterialBump, Param, WorkingBox};

    fn poisson() -> MaterialField {
        MaterialField::constant(MaterialPoint::new(1.0, 1.0, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn dn_example_entry() {
        let pt = EllipticPoint::new(0.0, [0.0, 0.0], 0.5, [1.0, 0.0]);
        let s = dn_symbol(&pt, &poisson(), &BoundaryMetric::identity()).unwrap();
        let a = 0.75f64.sqrt();
        let b = (11.0f64 / 12.0).sqrt();
        let expect = a * 0.25 / (1.0 - a * b);
        assert!((s.entries[(2, 2)].re - expect).abs() < 1e-12);
        assert!((expect - 1.26728).abs() < 1e-5);
        assert_eq!(s.hermitian_defect(), 0.0);
        let zero = EllipticPoint::new(0.0, [0.0, 0.0], 0.0, [1.0, 0.0]);
        assert!(matches!(
            dn_symbol(&zero, &poisson(), &BoundaryMetric::identity()),
            Err(Error::OutsideEllipticInterior { .. })
        ));
    }

    #[test]
    fn restriction_rows() {
        let pt = EllipticPoint::new(0.0, [0.0, 0.0], 0.5, [1.0, 0.0]);
        let r = boundary_restriction_symbols(&pt, &poisson(), &BoundaryMetric::identity()).unwrap();
        let a = 0.75f64.sqrt();
        let b = (11.0f64 / 12.0).sqrt();
        let u = r.u_out.entries;
        let expect = Mat3::new(re(0.0), im(-a), re(1.0), im(a), re(0.0), re(0.0), re(0.0), re(1.0), im(b));
        assert_eq!(u, expect);
        assert!((u * r.u_out_inv.entries - Mat3::identity()).norm() < 1e-12);
    }

    #[test]
    fn e0_branches_agree() {
        let f = poisson();
        let m = f.base;
        let c = rayleigh_speed(&m).unwrap().c_r;
        let limit = e0_rayleigh_on_root(&m, c);
        assert!((e0_rayleigh_at(c, &m, c) - limit).norm() < 1e-12);
        let inside = e0_rayleigh_at(c * (1.0 + 1e-6 * (1.0 - 1e-6)), &m, c);
        let outside = e0_rayleigh_at(c * (1.0 + 1e-6 * (1.0 + 1e-6)), &m, c);
        assert!((inside - outside).norm() < 1e-8);
        assert!(limit.re.abs() < 1e-15 && limit.im > 0.0);
    }

    #[test]
    fn flat_r0_vanishes() {
        let f = poisson();
        let c = rayleigh_speed(&f.base).unwrap().c_r;
        let pt = EllipticPoint::new(0.0, [0.3, -0.2], c * 1.3, [0.6, 1.1]);
        let pt = EllipticPoint { tau: c * (0.6f64.hypot(1.1)) * 1.01, ..pt };
        let r = r0_leading(&pt, &f, &BoundaryMetric::identity()).unwrap();
        assert_eq!(r.flag, R0Flag::FlatExact);
        assert!(r.value.norm() < 1e-10);
        let far = EllipticPoint { tau: pt.tau * 0.8, ..pt };
        assert!(matches!(r0_leading(&far, &f, &BoundaryMetric::identity()), Err(Error::OutsideTube { .. })));
    }

    #[test]
    fn bump_r0_stable() {
        let base = MaterialPoint::new(1.0, 1.0, 1.0).unwrap();
        let f = MaterialField::new(
            base,
            vec![MaterialBump::new(Param::Mu, 0.2, [0.0, 0.0], 1.0)],
            WorkingBox::default(),
        )
        .unwrap();
        let x = [0.4, 0.3];
        let c = rayleigh_speed(&f.point(x)).unwrap().c_r;
        let xi = [0.8, -0.5];
        let pt = EllipticPoint::new(0.0, x, c * 0.8f64.hypot(0.5), xi);
        let r = r0_leading(&pt, &f, &BoundaryMetric::identity()).unwrap();
        assert_eq!(r.flag, R0Flag::Truncated);
        assert!(r.step_sensitivity < 1e-6, "{r:?}");
        let r2 = r0_leading(&pt.scaled(2.0), &f, &BoundaryMetric::identity()).unwrap();
        assert!((r.value - r2.value).norm() < 1e-6 * r.value.norm().max(1e-12), "{r:?} {r2:?}");
    }
}
