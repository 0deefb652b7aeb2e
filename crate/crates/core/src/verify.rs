//! Invariant suite behind `surfwave verify`.
//!
//! Every check records the measured quantity and its bound; nothing
//! time-dependent enters the report, so two runs with the same seed give
//! byte-identical JSON.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::ScenarioConfig;
use crate::dispersion::{
    definiteness_report, kernels, rayleigh_derivatives, rayleigh_generic, rayleigh_residual, rayleigh_speed,
    stoneley_m1, stoneley_matrices, stoneley_residual, stoneley_speed,
};
use crate::error::Result;
use crate::flat::{
    apply_multiplier_dense, apply_multiplier_fft, line_source_closed_form, impulse_closed_form, flat_dn_multiplier,
    flat_h1_spectrum, FlatModel, LineSource,
};
use crate::grid::Grid2;
use crate::material::{
    covector_norm, elastic_speeds, Bimaterial, BoundaryMetric, EllipticPoint, MaterialBump, MaterialField,
    MaterialPair, MaterialPoint, Param, WorkingBox,
};
use crate::ray::{
    eikonal_residual, phase_chart, trace_dynamic, trace_ray, transport_amplitude, BankOptions, ChartOptions, Medium,
    RayContext,
};
use crate::symbol::{boundary_restriction_symbols, diagonalize_dn, dn_symbol, r0_leading, R0Flag};
use crate::synthesis::{
    cauchy_field, evanescent_mode, evanescent_profile, large_t_field, mode_column, polarization_series,
    rayleigh_column, rayleigh_polarization, retrograde_check, stoneley_polarization, stoneley_zeta, track_packet, BoundaryFieldGrid,
    CauchyOptions, GaussianWindow, SeriesPart, SourceData, WavePacketData,
};
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `value < bound`.
    Below,
    /// `value >= bound`.
    AtLeast,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub group: &'static str,
    /// Acceptance criterion the check belongs to, if any.
    pub criterion: Option<u8>,
    pub name: String,
    pub value: f64,
    pub relation: Relation,
    pub bound: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub scenario: String,
    pub seed: u64,
    pub note: &'static str,
    pub checks: Vec<Check>,
    pub failed: Vec<String>,
    pub passed: bool,
}

struct Sink {
    group: &'static str,
    criterion: Option<u8>,
    checks: Vec<Check>,
}

impl Sink {
    fn new(group: &'static str, criterion: Option<u8>) -> Self {
        Self { group, criterion, checks: Vec::new() }
    }

    fn push(&mut self, name: &str, value: f64, relation: Relation, bound: f64) {
        let passed = match relation {
            Relation::Below => value < bound,
            Relation::AtLeast => value >= bound,
        };
        self.checks.push(Check {
            group: self.group,
            criterion: self.criterion,
            name: name.to_string(),
            value,
            relation,
            bound,
            passed,
        });
    }

    fn below(&mut self, name: &str, value: f64, bound: f64) {
        self.push(name, value, Relation::Below, bound);
    }

    fn at_least(&mut self, name: &str, value: f64, bound: f64) {
        self.push(name, value, Relation::AtLeast, bound);
    }

    /// Boolean check as `1 >= 1` / `0 >= 1`.
    fn flag(&mut self, name: &str, ok: bool) {
        self.at_least(name, if ok { 1.0 } else { 0.0 }, 1.0);
    }

    /// A sub-computation that errored counts as a failed check.
    fn guard<T>(&mut self, name: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(_) => {
                self.flag(&format!("{name}_completed"), false);
                None
            }
        }
    }
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Random isotropic solid with `lam, mu in [0.5, 3]`, `rho in [0.5, 4]`.
pub fn random_material(r: &mut impl Rng) -> MaterialPoint {
    MaterialPoint { rho: r.gen_range(0.5..4.0), lam: r.gen_range(0.5..3.0), mu: r.gen_range(0.5..3.0) }
}

fn random_metric(r: &mut impl Rng) -> BoundaryMetric {
    let (a, b) = (r.gen_range(0.5..2.0), r.gen_range(0.5..2.0));
    let th: f64 = r.gen_range(0.0..PI);
    let (c, s) = (th.cos(), th.sin());
    BoundaryMetric { base: [a * c * c + b * s * s, (a - b) * c * s, a * s * s + b * c * c], bumps: Vec::new() }
}

fn random_covector(r: &mut impl Rng) -> [f64; 2] {
    let th: f64 = r.gen_range(0.0..2.0 * PI);
    let k = r.gen_range(0.5..5.0);
    [k * th.cos(), k * th.sin()]
}

fn poisson() -> MaterialPoint {
    MaterialPoint { rho: 1.0, lam: 1.0, mu: 1.0 }
}

/// Interface with a Stoneley root (equal shear speeds, density contrast 2).
/// The denser solid sits on the `+` side, where the orbit is retrograde.
pub fn stoneley_pair() -> Bimaterial {
    Bimaterial { plus: MaterialPoint { rho: 2.0, lam: 2.0, mu: 2.0 }, minus: poisson() }
}

fn flat_pair_field(b: &Bimaterial) -> Result<MaterialPair> {
    MaterialPair::new(MaterialField::constant(b.plus)?, MaterialField::constant(b.minus)?)
}

fn bump_field(param: Param, amp: f64, center: [f64; 2], width: f64) -> Result<MaterialField> {
    MaterialField::new(poisson(), vec![MaterialBump::new(param, amp, center, width)], WorkingBox::default())
}

fn rel(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / scale.max(f64::MIN_POSITIVE)
}

/// Independent Rayleigh oracle: dense sign scan of `R` and plain bisection.
pub fn rayleigh_oracle(m: &MaterialPoint, n: usize) -> Option<f64> {
    let cs = m.cs();
    let r = |s: f64| rayleigh_generic(s, m.rho, m.lam, m.mu);
    let mut prev = (cs / (n + 1) as f64, r(cs / (n + 1) as f64));
    for i in 2..=n {
        let s = cs * i as f64 / (n + 1) as f64;
        let v = r(s);
        if prev.1 > 0.0 && v <= 0.0 {
            let (mut lo, mut hi) = (prev.0, s);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if r(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo <= 4.0 * f64::EPSILON * cs {
                    break;
                }
            }
            return Some(0.5 * (lo + hi));
        }
        prev = (s, v);
    }
    None
}

fn sign_changes(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> usize {
    let mut count = 0;
    let mut prev = f(lo);
    for i in 1..n {
        let v = f(lo + (hi - lo) * i as f64 / (n - 1) as f64);
        if (prev > 0.0 && v <= 0.0) || (prev < 0.0 && v >= 0.0) {
            count += 1;
        }
        prev = v;
    }
    count
}

// ---------------------------------------------------------------- material

fn material_checks(seed: u64) -> Vec<Check> {
    let mut k = Sink::new("material", None);
    let mut r = rng(seed, 1);
    let (mut order_ok, mut ratio_err) = (true, 0.0f64);
    for _ in 0..1000 {
        let m = random_material(&mut r);
        let (cs, cp) = elastic_speeds(&m).expect("valid");
        order_ok &= cs < cp && cp * cp / (cs * cs) > 2.0;
        ratio_err = ratio_err.max(rel(cp * cp / (cs * cs), (m.lam + 2.0 * m.mu) / m.mu, (m.lam + 2.0 * m.mu) / m.mu));
    }
    k.flag("speed_ordering_cs_lt_cp_ratio_gt_2", order_ok);
    k.below("speed_ratio_identity_rel", ratio_err, 1e-14);
    let mut hom = 0.0f64;
    for _ in 0..1000 {
        let g = random_metric(&mut r);
        let xi = random_covector(&mut r);
        let s = r.gen_range(-3.0..3.0);
        let a = covector_norm(&g, [0.0, 0.0], [s * xi[0], s * xi[1]]).expect("spd");
        let b = covector_norm(&g, [0.0, 0.0], xi).expect("spd");
        hom = hom.max(rel(a, s.abs() * b, s.abs() * b));
    }
    k.below("covector_norm_homogeneity_rel", hom, 1e-14);
    let f = MaterialField::new(
        poisson(),
        vec![
            MaterialBump::new(Param::Mu, 0.3, [0.2, -0.1], 0.8),
            MaterialBump::new(Param::Rho, -0.2, [-0.4, 0.3], 1.1),
            MaterialBump::new(Param::Lam, 0.5, [0.0, 0.5], 0.6),
        ],
        WorkingBox::default(),
    )
    .expect("positive");
    let h = 1e-5;
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let x = [r.gen_range(-1.5..1.5), r.gen_range(-1.5..1.5)];
        let e = f.eval(x, 2).expect("inside");
        let (gr, he) = (e.grad.unwrap(), e.hess.unwrap());
        for i in 0..2 {
            let mut p = x;
            let mut q = x;
            p[i] += h;
            q[i] -= h;
            let (ep, eq) = (f.eval(p, 1).unwrap(), f.eval(q, 1).unwrap());
            let vals = |m: &MaterialPoint| [m.rho, m.lam, m.mu];
            let (vp, vq) = (vals(&ep.point), vals(&eq.point));
            for c in 0..3 {
                let fd = (vp[c] - vq[c]) / (2.0 * h);
                worst = worst.max((fd - gr[c][i]).abs() / gr[c][i].abs().max(1e-3));
                for j in 0..2 {
                    let fd2 = (ep.grad.unwrap()[c][j] - eq.grad.unwrap()[c][j]) / (2.0 * h);
                    worst = worst.max((fd2 - he[c][j][i]).abs() / he[c][j][i].abs().max(1e-3));
                }
            }
        }
    }
    k.below("material_derivatives_vs_fd_rel", worst, 1e-6);
    k.checks
}

// -------------------------------------------------------------- dispersion

fn criterion_1() -> Vec<Check> {
    let mut k = Sink::new("dispersion", Some(1));
    let m = poisson();
    let Some(root) = k.guard("poisson_root", rayleigh_speed(&m)) else { return k.checks };
    k.below("poisson_cr_over_cs_minus_0.919402", (root.c_r / m.cs() - 0.919402).abs(), 1e-4);
    match rayleigh_oracle(&m, 10_000) {
        Some(o) => k.below("poisson_root_vs_scan_bisection_oracle", (root.c_r - o).abs(), 1e-10),
        None => k.flag("poisson_oracle_found_root", false),
    }
    k.checks
}

fn criterion_2(seed: u64, n: usize, scan: usize) -> Vec<Check> {
    let mut k = Sink::new("dispersion", Some(2));
    let mut r = rng(seed, 2);
    let (mut bad_count, mut worst_res, mut slope_ok, mut pattern_ok, mut zero_ok) = (0usize, 0.0f64, true, true, true);
    for _ in 0..n {
        let m = random_material(&mut r);
        let cs = m.cs();
        let f = |s: f64| rayleigh_generic(s, m.rho, m.lam, m.mu);
        let pts = (1..=scan).map(|i| cs * i as f64 / (scan + 1) as f64);
        let vals: Vec<f64> = pts.clone().map(f).collect();
        let changes = vals.windows(2).filter(|w| (w[0] > 0.0) != (w[1] > 0.0)).count();
        if changes != 1 {
            bad_count += 1;
        }
        zero_ok &= rayleigh_residual(0.0, &m).map(|v| v == 0.0).unwrap_or(false);
        match rayleigh_speed(&m) {
            Ok(root) => {
                worst_res = worst_res.max(f(root.c_r).abs());
                let (_, d, _) = rayleigh_derivatives(root.c_r, &m);
                slope_ok &= d < 0.0;
                // positive below the root, negative above, by scan
                pattern_ok &= pts.zip(&vals).all(|(s, &v)| {
                    (s - root.c_r).abs() < 1e-9 * cs || (s < root.c_r && v > 0.0) || (s > root.c_r && v < 0.0)
                });
            }
            Err(_) => bad_count += 1,
        }
    }
    k.below("materials_without_exactly_one_sign_change", bad_count as f64, 0.5);
    k.below("max_abs_R_at_root", worst_res, 1e-10);
    k.flag("R_at_zero_is_exactly_zero", zero_ok);
    k.flag("R_prime_negative_at_roots", slope_ok);
    k.flag("R_sign_pattern_positive_below_negative_above", pattern_ok);
    k.checks
}

fn random_pair(r: &mut impl Rng) -> Bimaterial {
    Bimaterial { plus: random_material(r), minus: random_material(r) }
}

fn criterion_4(seed: u64, samples: usize, pairs: usize) -> Vec<Check> {
    let mut k = Sink::new("dispersion", Some(4));
    let mut r = rng(seed, 4);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let p = random_pair(&mut r);
        let s = r.gen_range(0.01..0.99) * p.cs_min();
        let (Ok(mm), Ok(sv)) = (stoneley_matrices(s, &p), stoneley_residual(s, &p)) else {
            worst = f64::INFINITY;
            continue;
        };
        let k_ab = mm.denominators.0 * mm.denominators.1;
        let lhs = mm.det_cleared();
        let rhs = k_ab * sv;
        worst = worst.max(rel(lhs, rhs, lhs.abs().max(rhs.abs())));
    }
    k.below("det_M_cleared_vs_factorized_S_rel", worst, 1e-10);
    let (mut def_ok, mut multi) = (true, 0usize);
    for _ in 0..pairs {
        let p = random_pair(&mut r);
        let grid: Vec<f64> = (1..200).map(|i| p.cs_min() * i as f64 / 200.0).collect();
        def_ok &= definiteness_report(&p, &grid).all_passed();
        let cmin = p.cs_min();
        if sign_changes(|s| stoneley_m1(s, &p), 1e-6 * cmin, cmin * (1.0 - 1e-6), 4000) > 1 {
            multi += 1;
        }
    }
    k.flag("m1_m2_decreasing_and_traces_positive", def_ok);
    k.below("pairs_with_more_than_one_sign_change", multi as f64, 0.5);
    let same = Bimaterial { plus: poisson(), minus: poisson() };
    k.flag("identical_materials_have_no_root", stoneley_speed(&same).map(|r| !r.exists).unwrap_or(false));
    k.checks
}

// ------------------------------------------------------------------ symbol

fn criterion_3(seed: u64, n: usize) -> Vec<Check> {
    let mut k = Sink::new("symbol", Some(3));
    let mut r = rng(seed, 3);
    let (mut unit, mut diag, mut sum_id, mut prod_id, mut fact, mut restr, mut herm, mut hom) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let (mut order_ok, mut failures) = (true, 0usize);
    for _ in 0..n {
        let m = random_material(&mut r);
        let g = random_metric(&mut r);
        let field = MaterialField { base: m, bumps: Vec::new(), working_box: WorkingBox::default() };
        let x = [r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)];
        let xi = random_covector(&mut r);
        let nrm = g.norm_unchecked(x, xi);
        let s = r.gen_range(0.02..0.98) * m.cs();
        let tau = s * nrm;
        let pt = EllipticPoint::new(0.0, x, tau, xi);
        let (Ok(sym), Ok(d), Ok(br), Ok(kr)) =
            (dn_symbol(&pt, &field, &g), diagonalize_dn(&pt, &field, &g), boundary_restriction_symbols(&pt, &field, &g), kernels(s, &m))
        else {
            failures += 1;
            continue;
        };
        unit = unit.max(d.unitarity_defect());
        diag = diag.max(d.diagonal_residual(&sym.entries));
        herm = herm.max(sym.hermitian_defect());
        let prod = br.m_out.entries * br.u_out_inv.entries;
        restr = restr.max((sym.entries - prod).norm() / sym.entries.norm());
        let kk = r.gen_range(0.5..2.0);
        if let Ok(sk) = dn_symbol(&pt.scaled(kk), &field, &g) {
            hom = hom.max((sk.entries - sym.entries * C64::new(kk, 0.0)).norm() / (kk * sym.entries.norm()));
        }
        // unnormalized eigenvalues m_j = m~_j (|xi|^2 - alpha beta)
        let (al, be) = (nrm * kr.a, nrm * kr.b);
        let dd = nrm * nrm * (1.0 - kr.a * kr.b);
        let [m1, m2, _] = d.eigenvalues.map(|e| e * dd);
        let rt2 = m.rho * tau * tau;
        let theta = nrm * nrm * kr.theta_bar;
        sum_id = sum_id.max(rel(m1 + m2, (al + be) * rt2, (al + be) * rt2));
        let p1 = al * be * rt2 * rt2;
        let p2 = nrm * nrm * m.mu * m.mu * theta * theta;
        prod_id = prod_id.max(rel(m1 * m2, p1 - p2, p1 + p2));
        let rr = 4.0 * m.mu * m.mu * al * be * nrm * nrm - (rt2 - 2.0 * m.mu * nrm * nrm).powi(2);
        fact = fact.max(rel(p1 - p2, (nrm * nrm - al * be) * rr, p1 + p2));
        let e = d.eigenvalues;
        order_ok &= e[1] > e[2] && e[2] > 0.0;
    }
    k.below("elliptic_points_failed", failures as f64, 0.5);
    k.below("unitarity_defect_WstarW_minus_I", unit, 1e-11);
    k.below("diagonalization_offdiag_residual_rel", diag, 1e-10);
    k.below("eigen_sum_identity_rel", sum_id, 1e-11);
    k.below("eigen_product_identity_rel", prod_id, 1e-11);
    k.below("rayleigh_determinant_factorization_rel", fact, 1e-11);
    k.flag("m2_gt_m3_gt_0", order_ok);
    k.below("factorization_Mout_Uout_inv_rel", restr, 1e-11);
    k.below("hermiticity_defect", herm, 1e-12);
    k.below("degree_one_homogeneity_rel", hom, 1e-12);
    // sign of m~1 across the Rayleigh root
    let m = poisson();
    let field = MaterialField { base: m, bumps: Vec::new(), working_box: WorkingBox::default() };
    let g = BoundaryMetric::identity();
    let c = rayleigh_speed(&m).map(|r| r.c_r).unwrap_or(f64::NAN);
    let mut sign_ok = true;
    for i in 1..200 {
        let s = m.cs() * i as f64 / 200.0;
        if (s - c).abs() < 1e-6 * c {
            continue;
        }
        match diagonalize_dn(&EllipticPoint::new(0.0, [0.0, 0.0], s, [1.0, 0.0]), &field, &g) {
            Ok(d) => sign_ok &= (s < c) == (d.eigenvalues[0] > 0.0),
            Err(_) => sign_ok = false,
        }
    }
    k.flag("m1_positive_below_root_negative_above", sign_ok);
    k.checks
}

fn criterion_11(seed: u64) -> Vec<Check> {
    let mut k = Sink::new("symbol", Some(11));
    let mut r = rng(seed, 11);
    let g = BoundaryMetric::identity();
    let (mut worst, mut flags_ok) = (0.0f64, true);
    for _ in 0..20 {
        let m = random_material(&mut r);
        let field = MaterialField { base: m, bumps: Vec::new(), working_box: WorkingBox::default() };
        let Ok(root) = rayleigh_speed(&m) else {
            flags_ok = false;
            continue;
        };
        let xi = random_covector(&mut r);
        let tau = root.c_r * xi[0].hypot(xi[1]) * r.gen_range(0.995..1.005);
        match r0_leading(&EllipticPoint::new(0.0, [0.1, -0.2], tau, xi), &field, &g) {
            Ok(v) => {
                worst = worst.max(v.value.norm());
                flags_ok &= v.flag == R0Flag::FlatExact;
            }
            Err(_) => flags_ok = false,
        }
    }
    k.below("flat_r0_abs", worst, 1e-10);
    k.flag("flat_r0_flagged_exact", flags_ok);
    let mut sens = 0.0f64;
    for (param, amp) in [(Param::Mu, 0.2), (Param::Rho, 0.3)] {
        let Some(f) = k.guard("bump_field", bump_field(param, amp, [0.0, 0.0], 1.0)) else { continue };
        let x = [0.4, 0.3];
        let c = rayleigh_speed(&f.point(x)).map(|r| r.c_r).unwrap_or(f64::NAN);
        let xi = [0.8, -0.5];
        if let Some(v) = k.guard("bump_r0", r0_leading(&EllipticPoint::new(0.0, x, c * 0.8f64.hypot(0.5), xi), &f, &g)) {
            sens = sens.max(v.step_sensitivity);
        }
    }
    k.below("r0_richardson_step_sensitivity", sens, 1e-6);
    k.checks
}

// -------------------------------------------------------------------- rays

fn criterion_5() -> Vec<Check> {
    let mut k = Sink::new("ray", Some(5));
    let g = BoundaryMetric::identity();
    let Some(bump) = k.guard("bump", bump_field(Param::Mu, 0.3, [0.3, 0.2], 0.8)) else { return k.checks };
    let bump = Medium::Rayleigh(bump);
    if let Some(ray) = k.guard("trace", trace_ray([0.0, 0.0], [1.0, 0.5], 1.0, 1e-3, &bump, &g)) {
        let l0 = ray[0].lambda;
        let p0 = ray[0].phase;
        k.below("phase_constancy", ray.iter().map(|s| (s.phase - p0).abs()).fold(0.0, f64::max), 1e-8);
        k.below(
            "hamiltonian_drift_dt_1e-3",
            ray.iter().map(|s| (s.lambda - l0).abs() / l0).fold(0.0, f64::max),
            1e-8,
        );
    }
    // step halving on a sharper bump: at dt = 1e-3 the error is at roundoff
    let sharp = bump_field(Param::Mu, 0.5, [0.0, 0.0], 0.3).map(Medium::Rayleigh);
    if let Some(sharp) = k.guard("sharp", sharp) {
        let end = |dt: f64| trace_ray([-1.0, 0.1], [-1.0, 0.2], 2.0, dt, &sharp, &g).map(|r| *r.last().unwrap());
        if let (Ok(a), Ok(b), Ok(c)) = (end(2e-2), end(1e-2), end(1e-3)) {
            let err = |e: &crate::ray::RayState| (e.x[0] - c.x[0]).hypot(e.x[1] - c.x[1]);
            k.at_least("rk4_error_ratio_under_halving", err(&a) / err(&b), 8.0);
        } else {
            k.flag("rk4_convergence_completed", false);
        }
    }
    // covector homogeneity
    let a = trace_ray([0.0, 0.4], [0.6, 0.8], 0.5, 5e-3, &bump, &g);
    let b = trace_ray([0.0, 0.4], [1.2, 1.6], 0.5, 5e-3, &bump, &g);
    if let (Ok(a), Ok(b)) = (a, b) {
        let (a, b) = (a.last().unwrap(), b.last().unwrap());
        let e = (a.x[0] - b.x[0]).abs().max((a.x[1] - b.x[1]).abs()).max((2.0 * a.xi[0] - b.xi[0]).abs()).max((2.0 * a.xi[1] - b.xi[1]).abs());
        k.below("covector_homogeneity", e, 1e-10);
    }
    // flat chart
    let flat = Medium::Rayleigh(MaterialField::constant(poisson()).expect("valid"));
    let c = rayleigh_speed(&poisson()).map(|r| r.c_r).unwrap_or(f64::NAN);
    let xi0 = [0.8, -0.6];
    let target = Grid2 { min: [-1.0, -1.0], max: [1.0, 1.0], n: [7, 7] };
    let seeds = Grid2::with_spacing([-2.0, -2.5], [2.5, 2.0], 0.25).expect("grid");
    if let Some(ch) = k.guard("flat_chart", phase_chart(1.0, xi0, &seeds, &target, &flat, &g, &ChartOptions::default())) {
        let e = target
            .nodes()
            .enumerate()
            .map(|(i, x)| (ch.phi[i] - (c * 1.0 + x[0] * xi0[0] + x[1] * xi0[1])).abs())
            .fold(0.0, f64::max);
        k.below("flat_chart_phase_error", e, 1e-6);
    }
    let target = Grid2 { min: [-0.5, -0.5], max: [0.5, 0.5], n: [5, 5] };
    let seeds = Grid2::with_spacing([-1.8, -0.9], [-0.2, 0.9], 0.1).expect("grid");
    let opts = ChartOptions { dt: 2e-3, transport: false, refine: true, ..Default::default() };
    if let Some(res) = k.guard("eikonal", eikonal_residual(1.0, 1e-4, [-1.0, 0.0], &seeds, &target, &bump, &g, &opts)) {
        k.below("bump_eikonal_residual", res.max, 1e-5);
    }
    k.checks
}

fn criterion_6() -> Vec<Check> {
    let mut k = Sink::new("ray", Some(6));
    let g = BoundaryMetric::identity();
    let flat = Medium::Rayleigh(MaterialField::constant(poisson()).expect("valid"));
    if let Some(ctx) = k.guard("flat_ctx", RayContext::new(&flat, &g)) {
        if let Some(mut d) = k.guard("flat_dynamic", trace_dynamic([0.0, 0.0], [1.0, 1.0], 1.0, 5e-3, &ctx)) {
            let mut trivial = true;
            for s in &d.states {
                trivial &= s.hess == Some([[0.0; 2]; 2]) && s.jac == Some([[1.0, 0.0], [0.0, 1.0]]);
            }
            k.flag("flat_hess_zero_and_jac_identity", trivial);
            if let Some(logs) = k.guard("flat_transport", transport_amplitude(&mut d, &flat, &g, None)) {
                k.below("flat_a0_minus_1", logs.iter().map(|l| (l.a0 - 1.0).norm()).fold(0.0, f64::max), 1e-10);
            }
        }
    }
    let Some(bump) = k.guard("bump", bump_field(Param::Mu, 0.3, [0.3, 0.2], 0.8)) else { return k.checks };
    let bump = Medium::Rayleigh(bump);
    let Some(ctx) = k.guard("bump_ctx", RayContext::new(&bump, &g)) else { return k.checks };
    let (x0, xi0, t, dt, h) = ([-0.5, 0.1], [1.0, -0.4], 0.8, 2e-3, 1e-5);
    let Some(d) = k.guard("bump_dynamic", trace_dynamic(x0, xi0, t, dt, &ctx)) else { return k.checks };
    let s = d.last().clone();
    // J = dx/dx0, K = dxi/dx0 from neighbouring rays; Hess phi = K J^-1
    let mut jm = [[0.0; 2]; 2];
    let mut km = [[0.0; 2]; 2];
    for i in 0..2 {
        let (mut p, mut q) = (x0, x0);
        p[i] += h;
        q[i] -= h;
        let (Ok(a), Ok(b)) = (trace_dynamic(p, xi0, t, dt, &ctx), trace_dynamic(q, xi0, t, dt, &ctx)) else {
            k.flag("neighbour_rays_completed", false);
            return k.checks;
        };
        let (a, b) = (a.last().clone(), b.last().clone());
        for rr in 0..2 {
            jm[rr][i] = (a.x[rr] - b.x[rr]) / (2.0 * h);
            km[rr][i] = (a.xi[rr] - b.xi[rr]) / (2.0 * h);
        }
    }
    let det = jm[0][0] * jm[1][1] - jm[0][1] * jm[1][0];
    let ji = [[jm[1][1] / det, -jm[0][1] / det], [-jm[1][0] / det, jm[0][0] / det]];
    let hs = s.hess.unwrap_or([[f64::NAN; 2]; 2]);
    let mut e = 0.0f64;
    for rr in 0..2 {
        for c in 0..2 {
            let fd = km[rr][0] * ji[0][c] + km[rr][1] * ji[1][c];
            e = e.max((fd - hs[rr][c]).abs());
        }
    }
    k.below("hess_vs_neighbour_ray_fd", e, 1e-4);
    k.checks
}

// ---------------------------------------------------------------- synthesis

fn criterion_7() -> Vec<Check> {
    let mut k = Sink::new("synthesis", Some(7));
    let g = BoundaryMetric::identity();
    let m = poisson();
    if let Some(col) = k.guard("rayleigh_column", rayleigh_column(&m)) {
        k.below("poisson_axis_ratio_minus_1.4679", (col.axis_ratio() - 1.4679).abs(), 1e-3);
    }
    let mut resid = 0.0f64;
    let mut r = rng(0, 7);
    let mut p2_zero = true;
    for i in 0..50 {
        let mm = random_material(&mut r);
        let field = MaterialField { base: mm, bumps: Vec::new(), working_box: WorkingBox::default() };
        let Ok(c) = rayleigh_speed(&mm) else { continue };
        let xi = if i == 0 { [2.5, 0.0] } else { random_covector(&mut r) };
        let pt = EllipticPoint::new(0.0, [0.0, 0.0], c.c_r * xi[0].hypot(xi[1]), xi);
        let a0 = C64::from_polar(r.gen_range(0.2..2.0), r.gen_range(0.0..6.0));
        if let Some(p) = k.guard("rayleigh_polarization", rayleigh_polarization(&pt, a0, 0.3, &field, &g)) {
            resid = resid.max(p.ellipsoid_residual);
            if i == 0 {
                p2_zero = p.p[1] == [0.0, 0.0];
            }
        }
    }
    k.below("rayleigh_ellipsoid_residual", resid, 1e-10);
    k.flag("xi_along_e1_gives_p2_zero", p2_zero);
    let bp = stoneley_pair();
    if let (Some(pair), Some(root)) = (k.guard("pair", flat_pair_field(&bp)), k.guard("stoneley_root", stoneley_speed(&bp).and_then(|r| r.require()))) {
        let xi: [f64; 2] = [1.2, -0.7];
        let pt = EllipticPoint::new(0.0, [0.0, 0.0], root.0 * xi[0].hypot(xi[1]), xi);
        if let Some(p) = k.guard("stoneley_polarization", stoneley_polarization(&pt, C64::new(0.7, -0.4), 1.0, &pair, &g)) {
            k.below("stoneley_ellipsoid_residual", p.ellipsoid_residual, 1e-10);
        }
    }
    let media: Vec<(&str, Result<Medium>)> = vec![
        ("rayleigh", MaterialField::constant(m).map(Medium::Rayleigh)),
        ("stoneley", flat_pair_field(&bp).map(Medium::Stoneley)),
    ];
    for (name, medium) in media {
        let Some(medium) = k.guard(name, medium) else { continue };
        let xi: [f64; 2] = [3.0, 1.0];
        let Some(col) = k.guard(name, mode_column(&medium, [0.0, 0.0])) else { continue };
        let period = 2.0 * PI / (col.speed * xi[0].hypot(xi[1]));
        let times: Vec<f64> = (0..32).map(|i| period * i as f64 / 32.0).collect();
        let Some(series) = k.guard(name, polarization_series(&medium, &g, [0.3, 0.1], xi, &times, &ChartOptions::default())) else { continue };
        let conj: Vec<_> = series.iter().map(|s| s.conjugated()).collect();
        for part in [SeriesPart::Real, SeriesPart::Imag] {
            let tag = if part == SeriesPart::Real { "re" } else { "im" };
            if let Some(rep) = k.guard(name, retrograde_check(&series, part)) {
                k.flag(&format!("{name}_{tag}_retrograde"), rep.retrograde);
                k.flag(&format!("{name}_{tag}_phase_rate_positive"), rep.phase_increasing);
            }
            if let Some(rep) = k.guard(name, retrograde_check(&conj, part)) {
                k.flag(&format!("{name}_{tag}_conjugate_is_prograde"), !rep.retrograde);
            }
        }
    }
    // orbit sense at an interface follows the sign of zeta1
    let mut r = rng(0, 70);
    let (mut tested, mut agree) = (0usize, true);
    while tested < 20 {
        let bp = random_pair(&mut r);
        let Ok(Some(c)) = stoneley_speed(&bp).map(|s| s.c_st) else { continue };
        let Ok(pair) = flat_pair_field(&bp) else { continue };
        let medium = Medium::Stoneley(pair);
        let period = 2.0 * PI / (3.0 * c);
        let times: Vec<f64> = (0..16).map(|i| period * i as f64 / 16.0).collect();
        let rep = polarization_series(&medium, &g, [0.0, 0.0], [3.0, 0.0], &times, &ChartOptions::default())
            .and_then(|s| retrograde_check(&s, SeriesPart::Real));
        match rep {
            Ok(rep) => agree &= rep.retrograde == (stoneley_zeta(&bp, c).zeta1 > 0.0),
            Err(_) => agree = false,
        }
        tested += 1;
    }
    k.flag("stoneley_orbit_sense_follows_zeta1_sign", agree);
    k.checks
}

/// Packet centre track over three snapshots; returns
/// `(relative speed error, direction error in degrees)`.
fn packet_track(
    packet: &WavePacketData,
    times: &[f64],
    x_grid: &Grid2,
    medium: &Medium,
    g: &BoundaryMetric,
    opts: &CauchyOptions,
    speed_at: impl Fn([f64; 2]) -> Result<f64>,
) -> Result<(f64, f64)> {
    let snaps = times
        .iter()
        .map(|&t| cauchy_field(packet, t, x_grid, medium, g, opts))
        .collect::<Result<Vec<BoundaryFieldGrid>>>()?;
    let tr = track_packet(&snaps)?;
    let mut c = 0.0;
    for x in &tr.centers {
        c += speed_at(*x)?;
    }
    c /= tr.centers.len() as f64;
    let xc = packet.window.expect("gaussian").center;
    let dir = [-xc[0], -xc[1]];
    Ok(((tr.speed - c).abs() / c, tr.angle_to(dir)))
}

fn criterion_8(n_xi: usize) -> Vec<Check> {
    let mut k = Sink::new("synthesis", Some(8));
    let g = BoundaryMetric::identity();
    let times = [0.0, 1.0, 2.0];
    let xg = Grid2 { min: [-4.0, -4.0], max: [4.0, 4.0], n: [81, 81] };
    let w = GaussianWindow { center: [6.0, 3.0], width: 1.0, x_center: [1.0, 0.5] };
    let bp = stoneley_pair();
    let media: Vec<(&str, Result<Medium>)> = vec![
        ("flat_rayleigh", MaterialField::constant(poisson()).map(Medium::Rayleigh)),
        ("flat_stoneley", flat_pair_field(&bp).map(Medium::Stoneley)),
    ];
    for (name, medium) in media {
        let Some(medium) = k.guard(name, medium) else { continue };
        let Some(packet) = k.guard(name, WavePacketData::gaussian(w, n_xi)) else { continue };
        let speed = |x: [f64; 2]| medium.speed(x, None);
        if let Some((ds, da)) = k.guard(name, packet_track(&packet, &times, &xg, &medium, &g, &Default::default(), speed)) {
            k.below(&format!("{name}_speed_rel_error"), ds, 0.02);
            k.below(&format!("{name}_direction_error_deg"), da, 2.0);
        }
    }
    // single bump, chart path on a small grid
    let Some(f) = k.guard("bump", bump_field(Param::Mu, 0.05, [0.0, 1.5], 2.0)) else { return k.checks };
    let medium = Medium::Rayleigh(f);
    let wb = GaussianWindow { center: [8.0, 0.0], width: 1.0, x_center: [1.0, 0.0] };
    let xg = Grid2 { min: [-1.8, -1.2], max: [2.2, 1.2], n: [21, 13] };
    let opts = CauchyOptions { dtheta: 0.1, bank: BankOptions { seed_spacing: 0.3, ..Default::default() }, ..Default::default() };
    if let Some(packet) = k.guard("bump_packet", WavePacketData::gaussian(wb, 24)) {
        let speed = |x: [f64; 2]| medium.speed(x, None);
        if let Some((ds, da)) = k.guard("bump_track", packet_track(&packet, &[0.0, 0.5, 1.0], &xg, &medium, &g, &opts, speed)) {
            k.below("bump_rayleigh_speed_rel_error", ds, 0.02);
            k.below("bump_rayleigh_direction_error_deg", da, 2.0);
        }
    }
    k.checks
}

/// Synthesis invariants outside the numbered criteria: linearity and the
/// frequency-refinement check at `t = 0`.
fn synthesis_checks() -> Vec<Check> {
    let mut k = Sink::new("synthesis", None);
    let g = BoundaryMetric::identity();
    let Some(f) = k.guard("flat", MaterialField::constant(poisson())) else { return k.checks };
    let medium = Medium::Rayleigh(f);
    let xg = Grid2 { min: [-2.0, -2.0], max: [2.0, 2.0], n: [21, 21] };
    let w = GaussianWindow { center: [5.0, 2.0], width: 0.8, x_center: [0.0, 0.0] };
    if let (Some(a), Some(b)) = (
        k.guard("packet", WavePacketData::gaussian(w, 32)),
        k.guard("packet", WavePacketData::gaussian(GaussianWindow { x_center: [0.5, -0.3], ..w }, 32)),
    ) {
        let sum = WavePacketData { h_hat: a.h_hat.iter().zip(&b.h_hat).map(|(p, q)| p + q).collect(), ..a.clone() };
        let o = CauchyOptions::default();
        let fs = [&a, &b, &sum].map(|p| cauchy_field(p, 0.8, &xg, &medium, &g, &o));
        if let [Ok(fa), Ok(fb), Ok(fab)] = fs {
            k.below("cauchy_superposition_rel", fab.relative_l2_error(&fa.add(&fb)), 1e-12);
        }
        if let (Ok(f1), Ok(f2)) = (
            cauchy_field(&a, 0.8, &xg, &medium, &g, &o),
            cauchy_field(&a.scaled(C64::new(2.0, 0.0)), 0.8, &xg, &medium, &g, &o),
        ) {
            let e = f1.f.iter().zip(&f2.f).flat_map(|(p, q)| (0..3).map(move |c| (q[c] - p[c] * 2.0).norm())).fold(0.0, f64::max);
            k.below("cauchy_doubling_abs", e, 1e-12 * f1.max_abs().max(1.0));
        }
    }
    // source superposition
    let src = |amp: f64, phase: f64| -> SourceData {
        let grid = Grid2 { min: [-4.0, -4.0], max: [4.0, 4.0], n: [12, 12] };
        let times: Vec<f64> = (1..=4).map(|k| k as f64 * 0.5).collect();
        let l_hat = times
            .iter()
            .map(|&s| {
                grid.nodes()
                    .map(|xi| {
                        let e = (-(xi[0] * xi[0] + xi[1] * xi[1]) / 4.0).exp() * amp;
                        [C64::from_polar(e, phase), C64::new(e * s, 0.0), C64::from_polar(e, s + phase)]
                    })
                    .collect()
            })
            .collect();
        SourceData { time_samples: times, ds: 0.5, t_end: 2.0, xi_grid: grid, l_hat, q_hat: None, origin: [0.0, 0.0] }
    };
    let (sa, sb) = (src(1.0, 0.0), src(0.7, 1.1));
    let o = CauchyOptions::default();
    if let Some(sab) = k.guard("source_add", sa.add(&sb)) {
        let fs = [&sa, &sb, &sab].map(|s| crate::synthesis::inhomogeneous_field(s, 3.0, &xg, &medium, &g, &o));
        if let [Ok(fa), Ok(fb), Ok(fab)] = fs {
            k.below("source_superposition_rel", fab.relative_l2_error(&fa.add(&fb)), 1e-12);
        }
        if let Ok(z) = crate::synthesis::inhomogeneous_field(&sa.zero_like(), 3.0, &xg, &medium, &g, &o) {
            k.below("zero_source_gives_zero_field", z.max_abs(), 1e-300);
        }
    }
    // f(0, x) against the column frozen at the packet centre
    let mismatch = |kc: f64| -> Result<f64> {
        let w = GaussianWindow { center: [kc, 0.0], width: 1.0, x_center: [0.0, 0.0] };
        let p = WavePacketData::gaussian(w, 48)?;
        let xg = Grid2 { min: [-3.0, -3.0], max: [3.0, 3.0], n: [31, 31] };
        let f = cauchy_field(&p, 0.0, &xg, &medium, &g, &Default::default())?;
        let col = mode_column(&medium, [0.0, 0.0])?.column([1.0, 0.0]);
        let dxi = p.xi_grid.cell_weight();
        let gx: Vec<[C64; 3]> = p.h_hat.iter().map(|h| [h * dxi, C64::new(0.0, 0.0), C64::new(0.0, 0.0)]).collect();
        let hx = crate::synthesis::separable_sum(&p.xi_grid, &gx, &xg);
        let pred = BoundaryFieldGrid { t: 0.0, x_grid: xg, f: hx.iter().map(|h| col.map(|c| c * h[0])).collect() };
        Ok(f.relative_l2_error(&pred))
    };
    if let (Some(e1), Some(e2)) = (k.guard("refine", mismatch(8.0)), k.guard("refine", mismatch(16.0))) {
        // first order in 1/|xi_c|: the ratio tends to 2
        k.at_least("compatibility_mismatch_ratio_under_frequency_doubling", e1 / e2, 1.8);
    }
    k.checks
}

fn criterion_9() -> Vec<Check> {
    let mut k = Sink::new("flat", Some(9));
    let g = BoundaryMetric::identity();
    let Some(model) = k.guard("flat_model", FlatModel::new(poisson())) else { return k.checks };
    let Some(f) = k.guard("flat", MaterialField::constant(poisson())) else { return k.checks };
    let medium = Medium::Rayleigh(f);
    // pipeline vs flat_h1 per component
    let w = GaussianWindow { center: [10.0, 3.0], width: 1.0, x_center: [0.3, -0.2] };
    let xg = Grid2 { min: [-1.5, -1.5], max: [1.5, 1.5], n: [9, 9] };
    if let (Some(packet), Some(col)) = (k.guard("packet", WavePacketData::gaussian(w, 24)), k.guard("column", rayleigh_column(&poisson()))) {
        let t = 0.7;
        let opts = CauchyOptions { force_ray_charts: true, ..Default::default() };
        if let Some(pipe) = k.guard("pipeline", cauchy_field(&packet, t, &xg, &medium, &g, &opts)) {
            let mut oracle = vec![[C64::new(0.0, 0.0); 3]; xg.len()];
            for c in 0..3 {
                let h: Vec<C64> = packet
                    .xi_grid
                    .nodes()
                    .zip(&packet.h_hat)
                    .map(|(xi, h)| {
                        let n = xi[0].hypot(xi[1]);
                        h * col.column([xi[0] / n, xi[1] / n])[c]
                    })
                    .collect();
                if let Some(v) = k.guard("flat_h1", flat_h1_spectrum(&model, t, &packet.xi_grid, &h, None, &xg)) {
                    for (o, z) in oracle.iter_mut().zip(v) {
                        o[c] = z;
                    }
                }
            }
            let oracle = BoundaryFieldGrid { t, x_grid: xg, f: oracle };
            k.below("pipeline_vs_flat_h1_rel_l2", pipe.relative_l2_error(&oracle), 1e-6);
        }
    }
    // Example 1: harmonic line source at mid-window
    let ls = LineSource::default();
    if let Some(src) = k.guard("line_source", ls.source_data()) {
        let xg = Grid2 { min: [-3.0, 0.0], max: [3.0, 0.0], n: [61, 1] };
        let t = ls.mid_window();
        if let Some(f) = k.guard("line_source_pipeline", large_t_field(&src, t, &xg, &medium, &g, &Default::default())) {
            let (mut num, mut den) = (0.0f64, 0.0f64);
            for (i, x) in xg.nodes().enumerate() {
                if x[0].abs() < 0.5 {
                    continue;
                }
                let Ok(cf) = line_source_closed_form(t, x[0], ls.a3, ls.p, &model) else { continue };
                for c in 0..3 {
                    // the oscillatory-integral normalization carries -1/c_R
                    num = num.max((f.f[i][c] * (-model.c_r) - cf[c]).norm());
                    den = den.max(cf[c].norm());
                }
            }
            k.below("line_source_rel_sup_error", num / den, 1e-2);
        }
    }
    // Example 1 parity
    let mut par = 0.0f64;
    for i in 1..20 {
        let x = 0.13 * i as f64;
        if let (Ok(a), Ok(b)) = (line_source_closed_form(0.4, x, 1.0, 3.0, &model), line_source_closed_form(0.4, -x, 1.0, 3.0, &model)) {
            par = par.max((a[0] + b[0]).norm()).max((a[2] - b[2]).norm());
        }
    }
    k.below("line_source_parity_f1_odd_f3_even", par, 1e-14);
    // Example 2: peaks and their separation
    let eps = 0.01;
    let peaks = |t: f64| -> (f64, f64) {
        let xs: Vec<f64> = (0..8001).map(|i| -6.0 + i as f64 * 1.5e-3).collect();
        let mut best = [(0.0, -1.0), (0.0, -1.0)];
        for &x in &xs {
            let v = impulse_closed_form(t, x, 1.0, eps, &model).map(|f| f[2].norm()).unwrap_or(0.0);
            let side = usize::from(x > 0.0);
            if v > best[side].1 {
                best[side] = (x, v);
            }
        }
        (best[0].0, best[1].0)
    };
    let (l1, r1) = peaks(2.0);
    let (l2, r2) = peaks(3.0);
    let c = model.c_r;
    k.below("impulse_peak_offset", (r1 - 2.0 * c).abs().max((l1 + 2.0 * c).abs()), eps);
    k.below("impulse_separation_growth", ((r2 - l2) - (r1 - l1) - 2.0 * c).abs(), 2.0 * 1.5e-3 + eps);
    let zero_mid = [0.3, -1.1, 1.9].iter().all(|&x| impulse_closed_form(2.0, x, 1.0, eps, &model).map(|f| f[1] == C64::new(0.0, 0.0)).unwrap_or(false));
    k.flag("impulse_f2_vanishes", zero_mid);
    let h1 = impulse_closed_form(2.0, 2.0 * c, 1.0, eps, &model).map(|f| f[0].re).unwrap_or(f64::NAN);
    let h2 = impulse_closed_form(2.0, 2.0 * c, 1.0, eps / 2.0, &model).map(|f| f[0].re).unwrap_or(f64::NAN);
    k.below("impulse_gaussian_height_scaling", (h2 / h1 - 2.0).abs() / 2.0, 1e-3);
    k.checks
}

fn flat_oracle_checks() -> Vec<Check> {
    let mut k = Sink::new("flat", None);
    let Some(model) = k.guard("flat_model", FlatModel::new(poisson())) else { return k.checks };
    let field = MaterialField { base: poisson(), bumps: Vec::new(), working_box: WorkingBox::default() };
    let g = BoundaryMetric::identity();
    let (tau, xi) = (0.7, [0.4, -1.3]);
    if let (Ok(a), Ok(b), Ok(c)) = (
        flat_dn_multiplier(&model, tau, xi),
        flat_dn_multiplier(&model, 2.0 * tau, [2.0 * xi[0], 2.0 * xi[1]]),
        dn_symbol(&EllipticPoint::new(0.0, [0.0, 0.0], tau, xi), &field, &g),
    ) {
        k.below("multiplier_equals_dn_symbol", (a.entries - c.entries).norm() / c.entries.norm(), 1e-15);
        k.flag("multiplier_exactly_homogeneous", b.entries == a.entries * C64::new(2.0, 0.0));
    }
    let kg = Grid2 { min: [2.0, -3.0], max: [8.0, 3.0], n: [32, 32] };
    let u_hat: Vec<[C64; 3]> = kg
        .nodes()
        .map(|xi| {
            let e = (-((xi[0] - 5.0).powi(2) + xi[1].powi(2)) / 2.0).exp();
            [C64::new(e, 0.0), C64::new(0.0, 0.5 * e), C64::new(-e, e)]
        })
        .collect();
    let tau = model.c_r;
    if let Some((xg, fft)) = k.guard("fft", apply_multiplier_fft(&model, tau, &kg, &u_hat)) {
        let picks = [0usize, 5, 77, 500, 1023];
        let pts: Vec<[f64; 2]> = picks.iter().map(|&i| xg.node_at(i)).collect();
        if let Some(dense) = k.guard("dense", apply_multiplier_dense(&model, tau, &kg, &u_hat, &pts)) {
            let (mut num, mut den) = (0.0f64, 0.0f64);
            for (j, &i) in picks.iter().enumerate() {
                for c in 0..3 {
                    num = num.max((fft[i][c] - dense[j][c]).norm());
                    den = den.max(dense[j][c].norm());
                }
            }
            k.below("fft_vs_dense_multiplier_rel", num / den, 1e-8);
        }
    }
    k.checks
}

// --------------------------------------------------------------- evanescent

fn criterion_10(seed: u64) -> Vec<Check> {
    let mut k = Sink::new("evanescent", Some(10));
    let m = poisson();
    let c = rayleigh_speed(&m).map(|r| r.c_r).unwrap_or(f64::NAN);
    let xt = [3.0, 4.0];
    let f = [C64::new(0.2, 0.1), C64::new(-0.3, 0.0), C64::new(0.0, 1.0)];
    let depths: Vec<f64> = (0..6).map(|i| i as f64 * 0.1).collect();
    if let (Some((s, _)), Some(kr)) = (k.guard("mode", evanescent_mode(&m, 5.0 * c, xt, f, &depths)), k.guard("kernels", kernels(c, &m))) {
        let (at, bt) = (5.0 * kr.a, 5.0 * kr.b);
        let mag = |w: [f64; 2]| w[0].hypot(w[1]);
        let mut e = 0.0f64;
        for (comp, rate) in [(0, at), (1, at), (2, bt)] {
            let slope = (mag(s[5].w[comp]).ln() - mag(s[0].w[comp]).ln()) / 0.5;
            e = e.max((slope + rate).abs());
        }
        k.below("single_mode_log_slope_error", e, 1e-6);
        k.flag("trace_recovered_at_zero_depth", (0..3).all(|i| s[0].u[i] == [f[i].re, f[i].im]));
    }
    let mut r = rng(seed, 10);
    let mut ordered = true;
    for _ in 0..1000 {
        let m = random_material(&mut r);
        if let Ok(kr) = kernels(r.gen_range(0.01..0.99) * m.cs(), &m) {
            ordered &= kr.a <= kr.b;
        }
    }
    k.flag("alpha_le_beta_on_elliptic_samples", ordered);
    // profile: exact trace, and the lower solid decays as exp(+alpha- x3)
    let g = BoundaryMetric::identity();
    let xi_grid = Grid2 { min: [2.0, 0.0], max: [2.0, 0.0], n: [1, 1] };
    let xg = Grid2 { min: [0.0, 0.0], max: [0.5, 0.0], n: [2, 1] };
    let bp = stoneley_pair();
    if let (Some(pair), Some(root)) = (k.guard("pair", flat_pair_field(&bp)), k.guard("root", stoneley_speed(&bp).and_then(|r| r.require()))) {
        let medium = Medium::Stoneley(pair);
        let f_hat = vec![[C64::new(0.3, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.8)]];
        let n = 2.0;
        let (d1, d2) = (-40.0 / n, -50.0 / n);
        if let Some(b) = k.guard("profile", evanescent_profile(&xi_grid, &f_hat, &xg, &[0.0, d1, d2], &medium, &g)) {
            let exact = b.samples[0].u[0].iter().zip(&f_hat[0]).all(|(a, b)| a == b);
            k.flag("profile_trace_exact_at_zero_depth", exact);
            k.flag("profile_decay_rates_ordered", b.ordered);
            let nrm = |u: &[C64; 3]| u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let slope = (nrm(&b.samples[2].u[0]).ln() - nrm(&b.samples[1].u[0]).ln()) / (d2 - d1);
            let a_minus = kernels(root.0, &bp.minus).map(|kr| n * kr.a).unwrap_or(f64::NAN);
            k.below("lower_side_growth_rate_is_alpha_minus", (slope - a_minus).abs() / a_minus, 1e-6);
        }
    }
    k.checks
}

/// Run the full suite.
pub fn run(cfg: &ScenarioConfig) -> VerifyReport {
    let v = cfg.verify;
    let seed = cfg.seed;
    let mut checks = Vec::new();
    checks.extend(material_checks(seed));
    checks.extend(criterion_1());
    checks.extend(criterion_2(seed, v.random_materials, v.scan_points));
    checks.extend(criterion_3(seed, v.elliptic_points));
    checks.extend(criterion_4(seed, v.stoneley_samples, v.stoneley_pairs));
    checks.extend(criterion_5());
    checks.extend(criterion_6());
    checks.extend(criterion_7());
    checks.extend(criterion_8(v.packet_n));
    checks.extend(synthesis_checks());
    checks.extend(criterion_9());
    checks.extend(flat_oracle_checks());
    checks.extend(criterion_10(seed));
    checks.extend(criterion_11(seed));
    let failed: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| format!("{}/{}", c.group, c.name)).collect();
    VerifyReport {
        scenario: cfg.name.clone(),
        seed,
        note: "synthesized fields are leading-order asymptotics",
        passed: failed.is_empty(),
        failed,
        checks,
    }
}

/// Checks of a single acceptance criterion (1..=11).
pub fn criterion(n: u8, cfg: &ScenarioConfig) -> Vec<Check> {
    let v = cfg.verify;
    let seed = cfg.seed;
    match n {
        1 => criterion_1(),
        2 => criterion_2(seed, v.random_materials, v.scan_points),
        3 => criterion_3(seed, v.elliptic_points),
        4 => criterion_4(seed, v.stoneley_samples, v.stoneley_pairs),
        5 => criterion_5(),
        6 => criterion_6(),
        7 => criterion_7(),
        8 => criterion_8(v.packet_n),
        9 => criterion_9(),
        10 => criterion_10(seed),
        11 => criterion_11(seed),
        _ => Vec::new(),
    }
}
