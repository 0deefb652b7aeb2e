//! Elastic media, the boundary metric and phase-space points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet;

/// SPD floor for the boundary metric.
pub const METRIC_FLOOR: f64 = 1e-8;
/// Elliptic margin: `tau^2 / (c_s^2 |xi|_g^2) <= 1 - ELLIPTIC_MARGIN`.
pub const ELLIPTIC_MARGIN: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialPoint {
    pub rho: f64,
    pub lam: f64,
    pub mu: f64,
}

impl MaterialPoint {
    pub fn new(rho: f64, lam: f64, mu: f64) -> Result<Self> {
        let m = Self { rho, lam, mu };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("rho", self.rho), ("lam", self.lam), ("mu", self.mu)] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::NonPositiveParameter { name, value });
            }
        }
        Ok(())
    }

    #[inline]
    pub fn cs(&self) -> f64 {
        (self.mu / self.rho).sqrt()
    }

    #[inline]
    pub fn cp(&self) -> f64 {
        ((self.lam + 2.0 * self.mu) / self.rho).sqrt()
    }

    /// Same medium with all three parameters multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        Self { rho: k * self.rho, lam: k * self.lam, mu: k * self.mu }
    }
}

/// `(c_s, c_p)` for a validated material.
pub fn elastic_speeds(m: &MaterialPoint) -> Result<(f64, f64)> {
    m.validate()?;
    Ok((m.cs(), m.cp()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    Rho,
    Lam,
    Mu,
}

/// Gaussian perturbation `A exp(-|x - c|^2 / (2 w^2))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bump {
    pub amplitude: f64,
    pub center: [f64; 2],
    pub width: f64,
}

impl Bump {
    #[inline]
    pub fn jet(&self, x: [f64; 2]) -> Jet<2> {
        let w2 = self.width * self.width;
        let d = [x[0] - self.center[0], x[1] - self.center[1]];
        let e = self.amplitude * (-(d[0] * d[0] + d[1] * d[1]) / (2.0 * w2)).exp();
        let mut j = Jet::<2>::constant(e);
        for i in 0..2 {
            j.g[i] = -e * d[i] / w2;
            for k in 0..2 {
                let delta = if i == k { 1.0 } else { 0.0 };
                j.h[i][k] = e * (d[i] * d[k] / (w2 * w2) - delta / w2);
            }
        }
        j
    }

    #[inline]
    pub fn value(&self, x: [f64; 2]) -> f64 {
        let d = [x[0] - self.center[0], x[1] - self.center[1]];
        self.amplitude * (-(d[0] * d[0] + d[1] * d[1]) / (2.0 * self.width * self.width)).exp()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialBump {
    pub param: Param,
    pub amplitude: f64,
    pub center: [f64; 2],
    pub width: f64,
}

impl MaterialBump {
    pub fn new(param: Param, amplitude: f64, center: [f64; 2], width: f64) -> Self {
        Self { param, amplitude, center, width }
    }

    #[inline]
    pub fn bump(&self) -> Bump {
        Bump { amplitude: self.amplitude, center: self.center, width: self.width }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkingBox {
    pub min: [f64; 2],
    pub max: [f64; 2],
}

impl WorkingBox {
    pub fn new(min: [f64; 2], max: [f64; 2]) -> Result<Self> {
        if !(min[0] < max[0] && min[1] < max[1]) {
            return Err(Error::InvalidInput("working box must have min < max".into()));
        }
        Ok(Self { min, max })
    }

    #[inline]
    pub fn contains(&self, x: [f64; 2]) -> bool {
        x[0] >= self.min[0] && x[0] <= self.max[0] && x[1] >= self.min[1] && x[1] <= self.max[1]
    }

    pub fn check(&self, x: [f64; 2]) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::OutsideWorkingBox { x })
        }
    }

    /// Regular scan points with spacing at most `h`.
    pub fn scan_points(&self, h: f64) -> impl Iterator<Item = [f64; 2]> + '_ {
        let n0 = (((self.max[0] - self.min[0]) / h).ceil() as usize).max(1);
        let n1 = (((self.max[1] - self.min[1]) / h).ceil() as usize).max(1);
        (0..=n0).flat_map(move |i| {
            (0..=n1).map(move |j| {
                [
                    self.min[0] + (self.max[0] - self.min[0]) * i as f64 / n0 as f64,
                    self.min[1] + (self.max[1] - self.min[1]) * j as f64 / n1 as f64,
                ]
            })
        })
    }
}

impl Default for WorkingBox {
    fn default() -> Self {
        Self { min: [-10.0, -10.0], max: [10.0, 10.0] }
    }
}

/// Constant background plus Gaussian bumps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialField {
    pub base: MaterialPoint,
    #[serde(default)]
    pub bumps: Vec<MaterialBump>,
    #[serde(default)]
    pub working_box: WorkingBox,
}

/// Parameter values and optional spatial derivatives, ordered `(rho, lam, mu)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MaterialEval {
    pub point: MaterialPoint,
    pub grad: Option<[[f64; 2]; 3]>,
    pub hess: Option<[[[f64; 2]; 2]; 3]>,
}

impl MaterialField {
    pub fn constant(base: MaterialPoint) -> Result<Self> {
        Self::new(base, Vec::new(), WorkingBox::default())
    }

    /// Validates positivity on the working box by a grid scan with spacing
    /// equal to a quarter of the narrowest bump.
    pub fn new(base: MaterialPoint, bumps: Vec<MaterialBump>, working_box: WorkingBox) -> Result<Self> {
        let f = Self { base, bumps, working_box };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        WorkingBox::new(self.working_box.min, self.working_box.max)?;
        if self.bumps.is_empty() {
            return Ok(());
        }
        let mut h = f64::INFINITY;
        for b in &self.bumps {
            if !(b.width > 0.0) {
                return Err(Error::NonPositiveParameter { name: "width", value: b.width });
            }
            h = h.min(b.width / 4.0);
        }
        for x in self.working_box.scan_points(h) {
            self.point(x).validate()?;
        }
        // Bump peaks inside the box are the extreme candidates.
        for b in &self.bumps {
            if self.working_box.contains(b.center) {
                self.point(b.center).validate()?;
            }
        }
        Ok(())
    }

    pub fn is_constant(&self) -> bool {
        self.bumps.iter().all(|b| b.amplitude == 0.0)
    }

    pub fn working_box(&self) -> &WorkingBox {
        &self.working_box
    }

    /// Parameter values without box checks.
    #[inline]
    pub fn point(&self, x: [f64; 2]) -> MaterialPoint {
        let mut m = self.base;
        for b in &self.bumps {
            let v = b.bump().value(x);
            match b.param {
                Param::Rho => m.rho += v,
                Param::Lam => m.lam += v,
                Param::Mu => m.mu += v,
            }
        }
        m
    }

    /// `(rho, lam, mu)` as jets in `x`.
    pub fn jets(&self, x: [f64; 2]) -> [Jet<2>; 3] {
        let mut out = [
            Jet::constant(self.base.rho),
            Jet::constant(self.base.lam),
            Jet::constant(self.base.mu),
        ];
        for b in &self.bumps {
            let j = b.bump().jet(x);
            let k = match b.param {
                Param::Rho => 0,
                Param::Lam => 1,
                Param::Mu => 2,
            };
            out[k] = out[k] + j;
        }
        out
    }

    /// Values (order 0), gradients (order 1) and Hessians (order 2) at `x`.
    pub fn eval(&self, x: [f64; 2], order: u8) -> Result<MaterialEval> {
        self.working_box.check(x)?;
        if order > 2 {
            return Err(Error::InvalidInput(format!("derivative order {order} not supported")));
        }
        let j = self.jets(x);
        let point = MaterialPoint { rho: j[0].v, lam: j[1].v, mu: j[2].v };
        let grad = (order >= 1).then(|| [j[0].g, j[1].g, j[2].g]);
        let hess = (order >= 2).then(|| [j[0].h, j[1].h, j[2].h]);
        Ok(MaterialEval { point, grad, hess })
    }
}

/// Free-function form of [`MaterialField::eval`].
pub fn eval_material(f: &MaterialField, x: [f64; 2], order: u8) -> Result<MaterialEval> {
    f.eval(x, order)
}

/// Two media meeting at an interface; `plus` occupies `x3 > 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialPair {
    pub plus: MaterialField,
    pub minus: MaterialField,
}

impl MaterialPair {
    pub fn new(plus: MaterialField, minus: MaterialField) -> Result<Self> {
        plus.validate()?;
        minus.validate()?;
        Ok(Self { plus, minus })
    }

    pub fn at(&self, x: [f64; 2]) -> Bimaterial {
        Bimaterial { plus: self.plus.point(x), minus: self.minus.point(x) }
    }

    pub fn is_constant(&self) -> bool {
        self.plus.is_constant() && self.minus.is_constant()
    }

    /// Intersection of the two working boxes.
    pub fn working_box(&self) -> WorkingBox {
        let (a, b) = (&self.plus.working_box, &self.minus.working_box);
        WorkingBox {
            min: [a.min[0].max(b.min[0]), a.min[1].max(b.min[1])],
            max: [a.max[0].min(b.max[0]), a.max[1].min(b.max[1])],
        }
    }
}

/// Pointwise material pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bimaterial {
    pub plus: MaterialPoint,
    pub minus: MaterialPoint,
}

impl Bimaterial {
    pub fn new(plus: MaterialPoint, minus: MaterialPoint) -> Result<Self> {
        plus.validate()?;
        minus.validate()?;
        Ok(Self { plus, minus })
    }

    pub fn cs_min(&self) -> f64 {
        self.plus.cs().min(self.minus.cs())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricEntry {
    G11,
    G12,
    G22,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricBump {
    pub entry: MetricEntry,
    pub amplitude: f64,
    pub center: [f64; 2],
    pub width: f64,
}

impl MetricBump {
    #[inline]
    pub fn bump(&self) -> Bump {
        Bump { amplitude: self.amplitude, center: self.center, width: self.width }
    }
}

/// Riemannian metric on the boundary: constant SPD matrix plus Gaussian bumps
/// on its entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryMetric {
    /// `[g11, g12, g22]`.
    pub base: [f64; 3],
    #[serde(default)]
    pub bumps: Vec<MetricBump>,
}

impl Default for BoundaryMetric {
    fn default() -> Self {
        Self::identity()
    }
}

impl BoundaryMetric {
    pub fn identity() -> Self {
        Self { base: [1.0, 0.0, 1.0], bumps: Vec::new() }
    }

    pub fn constant(g11: f64, g12: f64, g22: f64) -> Result<Self> {
        let g = Self { base: [g11, g12, g22], bumps: Vec::new() };
        g.check_at([0.0, 0.0])?;
        Ok(g)
    }

    pub fn new(base: [f64; 3], bumps: Vec<MetricBump>, working_box: &WorkingBox) -> Result<Self> {
        let g = Self { base, bumps };
        g.validate(working_box)?;
        Ok(g)
    }

    pub fn validate(&self, working_box: &WorkingBox) -> Result<()> {
        if self.bumps.is_empty() {
            return self.check_at(working_box.min);
        }
        let mut h = f64::INFINITY;
        for b in &self.bumps {
            if !(b.width > 0.0) {
                return Err(Error::NonPositiveParameter { name: "width", value: b.width });
            }
            h = h.min(b.width / 4.0);
        }
        for x in working_box.scan_points(h) {
            self.check_at(x)?;
        }
        Ok(())
    }

    pub fn is_identity(&self) -> bool {
        self.is_constant() && self.base == [1.0, 0.0, 1.0]
    }

    pub fn is_constant(&self) -> bool {
        self.bumps.iter().all(|b| b.amplitude == 0.0)
    }

    /// `[g11, g12, g22]` at `x`.
    #[inline]
    pub fn entries(&self, x: [f64; 2]) -> [f64; 3] {
        let mut e = self.base;
        for b in &self.bumps {
            e[entry_index(b.entry)] += b.bump().value(x);
        }
        e
    }

    pub fn min_eigenvalue(&self, x: [f64; 2]) -> f64 {
        let [a, b, c] = self.entries(x);
        let m = 0.5 * (a + c);
        let d = (0.25 * (a - c) * (a - c) + b * b).sqrt();
        m - d
    }

    pub fn check_at(&self, x: [f64; 2]) -> Result<()> {
        let min_eig = self.min_eigenvalue(x);
        if !(min_eig >= METRIC_FLOOR) {
            return Err(Error::DegenerateMetric { x, min_eig });
        }
        Ok(())
    }

    /// Inverse metric `[g^11, g^12, g^22]`.
    #[inline]
    pub fn inverse(&self, x: [f64; 2]) -> [f64; 3] {
        let [a, b, c] = self.entries(x);
        let det = a * c - b * b;
        [c / det, -b / det, a / det]
    }

    /// Inverse-metric entries as jets in `x`.
    pub fn inverse_jets(&self, x: [f64; 2]) -> [Jet<2>; 3] {
        let mut e = [
            Jet::<2>::constant(self.base[0]),
            Jet::<2>::constant(self.base[1]),
            Jet::<2>::constant(self.base[2]),
        ];
        for b in &self.bumps {
            let k = entry_index(b.entry);
            e[k] = e[k] + b.bump().jet(x);
        }
        let det = e[0] * e[2] - e[1] * e[1];
        [e[2] / det, -e[1] / det, e[0] / det]
    }

    /// Symmetric square root of the inverse metric; maps coordinate covector
    /// components to components in a g-orthonormal frame.
    pub fn frame(&self, x: [f64; 2]) -> [[f64; 2]; 2] {
        let [a, b, c] = self.inverse(x);
        let s = (a * c - b * b).sqrt();
        let t = (a + c + 2.0 * s).sqrt();
        [[(a + s) / t, b / t], [b / t, (c + s) / t]]
    }

    /// Frame components `g^{-1/2} xi`, whose Euclidean norm is `|xi|_g`.
    #[inline]
    pub fn frame_components(&self, x: [f64; 2], xi: [f64; 2]) -> [f64; 2] {
        if self.is_identity() {
            return xi;
        }
        let s = self.frame(x);
        [s[0][0] * xi[0] + s[0][1] * xi[1], s[1][0] * xi[0] + s[1][1] * xi[1]]
    }

    #[inline]
    pub fn norm_unchecked(&self, x: [f64; 2], xi: [f64; 2]) -> f64 {
        let [a, b, c] = self.inverse(x);
        (a * xi[0] * xi[0] + 2.0 * b * xi[0] * xi[1] + c * xi[1] * xi[1]).sqrt()
    }

    /// `|xi|_g = sqrt(g^{ij} xi_i xi_j)`.
    pub fn covector_norm(&self, x: [f64; 2], xi: [f64; 2]) -> Result<f64> {
        self.check_at(x)?;
        Ok(self.norm_unchecked(x, xi))
    }
}

fn entry_index(e: MetricEntry) -> usize {
    match e {
        MetricEntry::G11 => 0,
        MetricEntry::G12 => 1,
        MetricEntry::G22 => 2,
    }
}

/// Free-function form of [`BoundaryMetric::covector_norm`].
pub fn covector_norm(g: &BoundaryMetric, x: [f64; 2], xi: [f64; 2]) -> Result<f64> {
    g.covector_norm(x, xi)
}

/// Boundary phase-space sample `(t, x, tau, xi)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllipticPoint {
    pub t: f64,
    pub x: [f64; 2],
    pub tau: f64,
    pub xi: [f64; 2],
}

impl EllipticPoint {
    pub fn new(t: f64, x: [f64; 2], tau: f64, xi: [f64; 2]) -> Self {
        Self { t, x, tau, xi }
    }

    /// Slowness `s = tau / |xi|_g`.
    pub fn slowness(&self, g: &BoundaryMetric) -> Result<f64> {
        let n = g.covector_norm(self.x, self.xi)?;
        if n == 0.0 {
            return Err(Error::OutsideEllipticInterior { reason: "xi = 0".into() });
        }
        Ok(self.tau / n)
    }

    /// Checks `tau > 0` and `tau^2 <= (1 - margin) c_s^2 |xi|_g^2`.
    pub fn check_elliptic(&self, cs: f64, g: &BoundaryMetric) -> Result<f64> {
        let s = self.slowness(g)?;
        if !(self.tau > 0.0) {
            return Err(Error::OutsideEllipticInterior { reason: format!("tau = {} <= 0", self.tau) });
        }
        if !(s * s <= (1.0 - ELLIPTIC_MARGIN) * cs * cs) {
            return Err(Error::OutsideEllipticInterior {
                reason: format!("s = {s} not below c_s = {cs}"),
            });
        }
        Ok(s)
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self { t: self.t, x: self.x, tau: k * self.tau, xi: [k * self.xi[0], k * self.xi[1]] }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn speeds_examples() {
        let (cs, cp) = elastic_speeds(&MaterialPoint::new(1.0, 1.0, 1.0).unwrap()).unwrap();
        assert!((cs - 1.0).abs() < 1e-15 && (cp - 3f64.sqrt()).abs() < 1e-15);
        let (cs, cp) = elastic_speeds(&MaterialPoint { rho: 4.0, lam: 2.0, mu: 1.0 }).unwrap();
        assert!((cs - 0.5).abs() < 1e-15 && (cp - 1.0).abs() < 1e-15);
        assert!(matches!(
            elastic_speeds(&MaterialPoint { rho: 1.0, lam: 1.0, mu: 0.0 }),
            Err(Error::NonPositiveParameter { name: "mu", .. })
        ));
    }

    #[test]
    fn covector_norm_examples() {
        let g = BoundaryMetric::identity();
        assert_eq!(g.covector_norm([0.0, 0.0], [3.0, 4.0]).unwrap(), 5.0);
        let g = BoundaryMetric::constant(4.0, 0.0, 1.0).unwrap();
        assert!((g.covector_norm([0.0, 0.0], [2.0, 0.0]).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(g.covector_norm([0.0, 0.0], [0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn frame_components_preserve_norm() {
        let g = BoundaryMetric::constant(2.0, 0.3, 0.7).unwrap();
        let xi = [0.4, -1.3];
        let f = g.frame_components([0.0, 0.0], xi);
        let n = g.covector_norm([0.0, 0.0], xi).unwrap();
        assert!(((f[0] * f[0] + f[1] * f[1]).sqrt() - n).abs() < 1e-14);
    }

    #[test]
    fn bump_gradient_vanishes_at_center() {
        let bump = MaterialBump::new(Param::Mu, 0.2, [0.5, -0.5], 0.7);
        let f = MaterialField::new(MaterialPoint::new(1.0, 1.0, 1.0).unwrap(), vec![bump], WorkingBox::default())
            .unwrap();
        let e = f.eval([0.5, -0.5], 2).unwrap();
        assert_eq!(e.grad.unwrap()[2], [0.0, 0.0]);
        assert!((e.point.mu - 1.2).abs() < 1e-15);
    }

    #[test]
    fn negative_bump_rejected() {
        let bump = MaterialBump::new(Param::Rho, -1.5, [0.0, 0.0], 1.0);
        let r = MaterialField::new(MaterialPoint::new(1.0, 1.0, 1.0).unwrap(), vec![bump], WorkingBox::default());
        assert!(matches!(r, Err(Error::NonPositiveParameter { name: "rho", .. })));
    }

    #[test]
    fn outside_box_rejected() {
        let f = MaterialField::constant(MaterialPoint::new(1.0, 1.0, 1.0).unwrap()).unwrap();
        assert!(matches!(f.eval([11.0, 0.0], 0), Err(Error::OutsideWorkingBox { .. })));
    }
}
