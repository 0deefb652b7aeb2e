use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter {name} must be strictly positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },
    #[error("point ({}, {}) lies outside the working box", .x[0], .x[1])]
    OutsideWorkingBox { x: [f64; 2] },
    #[error("metric is degenerate at ({}, {}): smallest eigenvalue {min_eig}", .x[0], .x[1])]
    DegenerateMetric { x: [f64; 2], min_eig: f64 },
    #[error("slowness s = {s} outside the elliptic range (0, {limit})")]
    OutsideEllipticRange { s: f64, limit: f64 },
    #[error("phase-space point outside the strict elliptic interior: {reason}")]
    OutsideEllipticInterior { reason: String },
    #[error("expected exactly one sign change of the secular function, found {found}")]
    RootCountMismatch { found: usize },
    #[error("eigenvalues coincide: |m1 - m3| = {gap}")]
    DegenerateEigenvalue { gap: f64 },
    #[error("no Stoneley root exists for this material pair")]
    NoStoneleyRoot,
    #[error("slowness {s} lies outside the characteristic tube around {c}")]
    OutsideTube { s: f64, c: f64 },
    #[error("ray left the working box at t = {t}")]
    LeftWorkingBox { t: f64 },
    #[error("Hamiltonian drift {drift:.3e} exceeds the step tolerance")]
    StepTooLarge { drift: f64 },
    #[error("caustic encountered at t = {t} (det J = {det_jac:.3e})")]
    CausticEncountered { t: f64, det_jac: f64 },
    #[error("phase chart does not cover ({}, {})", .x[0], .x[1])]
    InterpolationGap { x: [f64; 2] },
    #[error("point is off the characteristic variety: |s - c| = {gap:.3e}")]
    OffCharacteristic { gap: f64 },
    #[error("source still active: t = {t} < T = {t_end}")]
    SourceNotExpired { t: f64, t_end: f64 },
    #[error("polarization ellipse is degenerate (semi-axis {axis:.3e})")]
    DegenerateEllipse { axis: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidInput(_) | Error::NonPositiveParameter { .. } => 2,
            Error::Io(_) | Error::Json(_) => 2,
            _ => 3,
        }
    }
}
