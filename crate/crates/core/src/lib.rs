//! Spectral verification toolkit for stretched ("oblong") conformal metrics on the 2-sphere.
//!
//! The metrics are `c * exp(-2 psi(t)) (dt^2 + dtheta^2)` on the cylinder `R x [0, 2pi)`,
//! which compactify to `S^2`. For the operator `-Laplacian + alpha * K` the toolkit computes
//! the low spectrum by Fourier separation in `theta` and finite differences in `t`,
//! evaluates Rayleigh quotients of explicit test functions, fits power-law decay
//! exponents over sweeps in the stretch parameter `L`, and assembles a machine-readable
//! claim report.
//!
//! Module map:
//!
//! - [`metric`]: the conformal factor, curvature, area density and total area.
//! - [`quadrature`]: adaptive Gauss-Kronrod integration with analytic tail bounds.
//! - [`discretize`]: mode separation and tridiagonal pencil assembly.
//! - [`eigen`]: Sturm bisection and global spectrum assembly.
//! - [`rayleigh`]: Rayleigh quotients of test functions.
//! - [`claims`]: sweeps, exponent fits, and the claim report.
//! - [`format`]: 17-significant-digit number formatting for CSV and JSON.
//! - [`cli`]: the `oblong` command-line front end.

// NaN must fail every validity check, so `!(x > 0.0)` is used on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod claims;
pub mod cli;
pub mod discretize;
pub mod eigen;
mod error;
pub mod format;
pub mod metric;
pub mod quadrature;
pub mod rayleigh;

pub use error::{Error, Result};
pub use metric::ConformalCylinderMetric;

/// Version string embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
