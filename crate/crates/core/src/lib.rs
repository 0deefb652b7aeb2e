//! Rayleigh and Stoneley surface waves in isotropic elasticity with variable
//! coefficients.
//!
//! The crate is organised bottom-up:
//!
//! * [`material`] — densities, Lamé fields, boundary metric, phase-space points.
//! * [`dispersion`] — Rayleigh/Stoneley secular functions and their roots.
//! * [`symbol`] — Dirichlet-to-Neumann principal symbols and their exact
//!   diagonalisation, elliptic factors and the lower-order transport symbol.
//! * [`ray`] — bicharacteristics, Jacobi fields, phase Hessians and the
//!   leading-amplitude transport equation; phase charts for synthesis.
//! * [`synthesis`] — oscillatory-integral synthesis of boundary fields,
//!   polarization ellipses and evanescent bulk extension.
//! * [`flat`] — exact constant-coefficient solutions used as oracles.
//! * [`config`], [`io`], [`verify`], [`cli`] — batch front end.
//!
//! All synthesized fields are leading-order asymptotics.

pub mod cli;
pub mod config;
pub mod dispersion;
pub mod error;
pub mod flat;
pub mod io;
pub mod jet;
pub mod material;
pub mod grid;
pub mod ray;
pub mod symbol;
pub mod synthesis;
pub mod verify;

pub use num_complex::Complex64 as C64;

pub use error::{Error, Result};
pub use material::{
    BoundaryMetric, Bimaterial, Bump, EllipticPoint, MaterialBump, MaterialField, MaterialPair, MaterialPoint,
    Param, WorkingBox,
};
pub use ray::Medium;
