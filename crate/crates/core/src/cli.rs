//! Batch front end. Every command reads one scenario config and writes one
//! artifact, either to stdout or into `--out <dir>`.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::config::ScenarioConfig;
use crate::dispersion::{kernels, rayleigh_residual, rayleigh_speed, stoneley_m1, stoneley_matrices, stoneley_speed};
use crate::error::{Error, Result};
use crate::io;
use crate::material::EllipticPoint;
use crate::ray::{trace_dynamic, trace_ray, transport_amplitude, BankOptions, ChartOptions, Medium, RayContext};
use crate::symbol::{
    boundary_restriction_symbols, diagonalize_dn, diagonalize_stoneley, dn_jump_symbol, dn_symbol, r0_leading,
    r0_leading_stoneley,
};
use crate::synthesis::{
    cauchy_field, large_t_field, mode_column, polarization_series, retrograde_check, CauchyOptions, WavePacketData,
};
use crate::verify;

#[derive(Parser, Debug)]
#[command(name = "surfwave", version, about = "Rayleigh and Stoneley surface waves")]
pub struct Cli {
    /// Scenario config (JSON); defaults describe the Poisson solid.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// c_s, c_p, c_R and (for pairs) c_ST at `scan.x`.
    Speeds,
    /// R(s), S(s), m1(s), m2(s) on (0, c_s).
    Scan,
    /// DN symbol (or interface jump symbol) at `point`.
    Symbol,
    /// Exact diagonalization and the lower-order transport term at `point`.
    Diag,
    /// Bicharacteristic with Jacobi fields and transport from `ray`.
    Trace,
    /// Boundary field snapshots from `synth`.
    Synth,
    /// Polarization series and retrograde report from `ellipse`.
    Ellipse,
    /// Full invariant suite.
    Verify,
}

impl Command {
    fn artifact(self) -> &'static str {
        match self {
            Command::Speeds => "speeds.json",
            Command::Scan => "scan.csv",
            Command::Symbol => "symbol.json",
            Command::Diag => "diag.json",
            Command::Trace => "trace.csv",
            Command::Synth => "synth.csv",
            Command::Ellipse => "ellipse.json",
            Command::Verify => "verify.json",
        }
    }
}

enum Artifact {
    Json(serde_json::Value),
    Csv(&'static [&'static str], Vec<Vec<f64>>),
}

fn json<T: Serialize>(v: &T) -> Result<Artifact> {
    Ok(Artifact::Json(serde_json::to_value(v)?))
}

fn emit(a: &Artifact, out: Option<&Path>, name: &str) -> Result<()> {
    let path = out.map(|d| d.join(name));
    if let Some(d) = out {
        std::fs::create_dir_all(d)?;
    }
    match (a, path) {
        (Artifact::Json(v), Some(p)) => io::write_json_file(&p, v),
        (Artifact::Json(v), None) => {
            let mut s = std::io::stdout().lock();
            serde_json::to_writer_pretty(&mut s, v)?;
            s.write_all(b"\n")?;
            Ok(())
        }
        (Artifact::Csv(h, rows), Some(p)) => io::write_csv_file(&p, h, rows.iter().cloned()),
        (Artifact::Csv(h, rows), None) => io::write_csv(std::io::stdout().lock(), h, rows.iter().cloned()),
    }
}

#[derive(Serialize)]
struct Speeds {
    c_s: f64,
    c_p: f64,
    c_r: f64,
    rayleigh_slope: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    c_st: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stoneley_exists: Option<bool>,
}

fn speeds(cfg: &ScenarioConfig) -> Result<Artifact> {
    let m = cfg.material.point(cfg.scan.x);
    let r = rayleigh_speed(&m)?;
    let st = match &cfg.pair {
        Some(p) => Some(stoneley_speed(&p.at(cfg.scan.x))?),
        None => None,
    };
    json(&Speeds {
        c_s: m.cs(),
        c_p: m.cp(),
        c_r: r.c_r,
        rayleigh_slope: r.slope,
        c_st: st.and_then(|s| s.c_st),
        stoneley_exists: st.map(|s| s.exists),
    })
}

const SCAN_HEADER: [&str; 6] = ["s", "R", "S", "m1", "m2", "det_cleared"];

fn scan(cfg: &ScenarioConfig) -> Result<Artifact> {
    let m = cfg.material.point(cfg.scan.x);
    let pair = cfg.pair.as_ref().map(|p| p.at(cfg.scan.x));
    // interface kernels need s below both shear speeds
    let top = pair.map_or(m.cs(), |p| p.cs_min().min(m.cs()));
    let n = cfg.scan.samples;
    let mut rows = Vec::with_capacity(n);
    for i in 1..=n {
        let s = top * i as f64 / (n + 1) as f64;
        let r = rayleigh_residual(s, &m)?;
        let (sv, m1, m2, det) = match &pair {
            Some(p) => {
                let mm = stoneley_matrices(s, p)?;
                let ev = crate::dispersion::stoneley_residual(s, p)?;
                (ev, stoneley_m1(s, p), mm.m2, mm.det_cleared())
            }
            None => (f64::NAN, f64::NAN, f64::NAN, f64::NAN),
        };
        rows.push(vec![s, r, sv, m1, m2, det]);
    }
    Ok(Artifact::Csv(&SCAN_HEADER, rows))
}

fn point(cfg: &ScenarioConfig, medium: &Medium) -> Result<EllipticPoint> {
    let p = cfg.point;
    let cs = match medium {
        Medium::Rayleigh(f) => f.point(p.x).cs(),
        Medium::Stoneley(pair) => pair.at(p.x).cs_min(),
    };
    let n = cfg.metric.covector_norm(p.x, p.xi)?;
    Ok(EllipticPoint::new(0.0, p.x, p.slowness_fraction * cs * n, p.xi))
}

fn symbol(cfg: &ScenarioConfig) -> Result<Artifact> {
    let medium = cfg.medium()?;
    let pt = point(cfg, &medium)?;
    match &medium {
        Medium::Rayleigh(f) => {
            #[derive(Serialize)]
            struct Out {
                symbol: crate::symbol::Symbol3,
                hermitian_defect: f64,
                u_out: crate::symbol::Symbol3,
                u_out_inv: crate::symbol::Symbol3,
                m_out: crate::symbol::Symbol3,
            }
            let s = dn_symbol(&pt, f, &cfg.metric)?;
            let b = boundary_restriction_symbols(&pt, f, &cfg.metric)?;
            json(&Out { hermitian_defect: s.hermitian_defect(), symbol: s, u_out: b.u_out, u_out_inv: b.u_out_inv, m_out: b.m_out })
        }
        Medium::Stoneley(p) => json(&dn_jump_symbol(&pt, p, &cfg.metric)?),
    }
}

fn diag(cfg: &ScenarioConfig) -> Result<Artifact> {
    let medium = cfg.medium()?;
    let pt = point(cfg, &medium)?;
    #[derive(Serialize)]
    struct Out {
        point: EllipticPoint,
        diagonalization: crate::symbol::DiagonalizationResult,
        unitarity_defect: f64,
        diagonal_residual: f64,
        /// Lower-order transport term, on the characteristic `tau = c|xi|_g`.
        characteristic_point: EllipticPoint,
        r0: crate::symbol::R0Value,
    }
    let x = pt.x;
    let on_char = EllipticPoint::new(0.0, x, medium.speed(x, None)? * cfg.metric.covector_norm(x, pt.xi)?, pt.xi);
    let (d, sym, r0) = match &medium {
        Medium::Rayleigh(f) => (
            diagonalize_dn(&pt, f, &cfg.metric)?,
            dn_symbol(&pt, f, &cfg.metric)?.entries,
            r0_leading(&on_char, f, &cfg.metric)?,
        ),
        Medium::Stoneley(p) => (
            diagonalize_stoneley(&pt, p, &cfg.metric)?,
            dn_jump_symbol(&pt, p, &cfg.metric)?.symbol.entries,
            r0_leading_stoneley(&on_char, p, &cfg.metric)?,
        ),
    };
    json(&Out {
        point: pt,
        unitarity_defect: d.unitarity_defect(),
        diagonal_residual: d.diagonal_residual(&sym),
        diagonalization: d,
        characteristic_point: on_char,
        r0,
    })
}

fn trace(cfg: &ScenarioConfig) -> Result<Artifact> {
    let medium = cfg.medium()?;
    let r = cfg.ray;
    let states = if r.dynamic {
        let ctx = RayContext::new(&medium, &cfg.metric)?;
        let mut d = trace_dynamic(r.x0, r.xi0, r.t_end, r.dt, &ctx)?;
        transport_amplitude(&mut d, &medium, &cfg.metric, None)?;
        d.states
    } else {
        trace_ray(r.x0, r.xi0, r.t_end, r.dt, &medium, &cfg.metric)?
    };
    Ok(Artifact::Csv(&io::RAY_HEADER, io::ray_rows(&states)))
}

fn synth(cfg: &ScenarioConfig) -> Result<Artifact> {
    let medium = cfg.medium()?;
    let s = &cfg.synth;
    let opts = CauchyOptions {
        force_ray_charts: s.force_ray_charts,
        dtheta: s.dtheta,
        bank: BankOptions { seed_spacing: s.seed_spacing, ..Default::default() },
    };
    let fields = match &s.line_source {
        Some(ls) => {
            let src = ls.source_data()?;
            s.times.iter().map(|&t| large_t_field(&src, t, &s.x_grid, &medium, &cfg.metric, &opts)).collect::<Result<Vec<_>>>()?
        }
        None => {
            let packet = WavePacketData::gaussian(s.packet, s.n_xi)?;
            s.times.iter().map(|&t| cauchy_field(&packet, t, &s.x_grid, &medium, &cfg.metric, &opts)).collect::<Result<Vec<_>>>()?
        }
    };
    Ok(Artifact::Csv(&io::FIELD_HEADER, io::field_rows(&fields)))
}

fn ellipse(cfg: &ScenarioConfig) -> Result<Artifact> {
    let medium = cfg.medium()?;
    let e = cfg.ellipse;
    let col = mode_column(&medium, e.x)?;
    let lam = col.speed * cfg.metric.covector_norm(e.x, e.xi0)?;
    let period = 2.0 * std::f64::consts::PI / lam;
    let times: Vec<f64> = (0..e.samples).map(|k| period * k as f64 / e.samples as f64).collect();
    let series = polarization_series(&medium, &cfg.metric, e.x, e.xi0, &times, &ChartOptions::default())?;
    let report = retrograde_check(&series, e.part)?;
    let decay = match &medium {
        Medium::Rayleigh(f) => kernels(col.speed, &f.point(e.x)).ok().map(|k| [k.a, k.b]),
        Medium::Stoneley(_) => None,
    };
    #[derive(Serialize)]
    struct Out<'a> {
        wave: &'static str,
        speed: f64,
        axis_ratio: f64,
        decay_kernels: Option<[f64; 2]>,
        report: crate::synthesis::RetrogradeReport,
        series: &'a [crate::synthesis::PolarizationSample],
    }
    json(&Out { wave: medium.name(), speed: col.speed, axis_ratio: col.axis_ratio(), decay_kernels: decay, report, series: &series })
}

/// Run a parsed command line; returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("surfwave: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::Config("at `--threads`: must be >= 1".into()));
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let mut cfg = match &cli.config {
        Some(p) => ScenarioConfig::load(p)?,
        None => ScenarioConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    let out = cli.out.as_deref();
    let name = cli.command.artifact();
    let artifact = match cli.command {
        Command::Speeds => speeds(&cfg)?,
        Command::Scan => scan(&cfg)?,
        Command::Symbol => symbol(&cfg)?,
        Command::Diag => diag(&cfg)?,
        Command::Trace => trace(&cfg)?,
        Command::Synth => synth(&cfg)?,
        Command::Ellipse => ellipse(&cfg)?,
        Command::Verify => {
            let report = verify::run(&cfg);
            for c in report.checks.iter().filter(|c| !c.passed) {
                eprintln!("FAIL {}/{}: {} (bound {})", c.group, c.name, c.value, c.bound);
            }
            emit(&json(&report)?, out, name)?;
            return Ok(if report.passed { 0 } else { 1 });
        }
    };
    emit(&artifact, out, name)?;
    Ok(0)
}
