//! WENO reconstructions of order `2r - 1` with Jiang-Shu, WENO-Z,
//! Yamaleev-Carpenter and OWENO (discriminant-indicator) weights.
//!
//! * [`scalar`]: the numeric field abstraction (`f64`, double-double, exact rationals).
//! * [`tables`]: exact-rational coefficient tables for a given `r` and data mode.
//! * [`recon`]: smoothness indicators, weights and the reconstruction itself.
//! * [`lab`]: single-point order-of-accuracy studies and slope probes.
//! * [`claw`]: a 1D finite-difference conservation-law solver.

pub mod claw;
pub mod error;
pub mod lab;
pub mod recon;
pub mod scalar;
pub mod tables;

pub use error::{Error, Result};
pub use recon::{ReconstructionResult, StencilValues, Variant, WeightParams, WenoKernel};
pub use scalar::{DoubleDouble, Rational, Scalar};
pub use tables::{build_tables, DataMode, SchemeTables};
