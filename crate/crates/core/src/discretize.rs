//! Fourier separation of `-Laplacian + alpha K` and finite-difference assembly.
//!
//! For `u = f(t) cos(k theta)` (or `sin`) the eigenvalue equation becomes the
//! Sturm-Liouville problem
//!
//! ```text
//! -f'' + (k^2 + alpha psi''(t)) f = lambda c exp(-2 psi(t)) f
//! ```
//!
//! on the line, using `Laplacian = c^-1 exp(2 psi) (d_tt + d_thetatheta)` and
//! `K exp(-2 psi) = psi'' / c`. The line is truncated to `[-T, T]` and discretized
//! with second-order central differences on `n` interior points and a lumped
//! (diagonal) mass matrix, giving a symmetric tridiagonal pencil `A f = lambda W f`.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::metric::ConformalCylinderMetric;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

impl BoundaryCondition {
    /// Neumann for the axisymmetric mode, Dirichlet otherwise: mode-`k`
    /// eigenfunctions decay like `exp(-k|t|)` toward the poles while `k = 0`
    /// eigenfunctions tend to constants.
    pub fn default_for_mode(k: u32) -> Self {
        if k == 0 {
            Self::Neumann
        } else {
            Self::Dirichlet
        }
    }
}

/// One Fourier sector of the discretized problem.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeProblem {
    pub k: u32,
    pub alpha: f64,
    /// Truncation half-width `T`; the domain is `[-T, T]`.
    pub half_width: f64,
    /// Number of interior grid points.
    pub n: usize,
    pub bc: BoundaryCondition,
}

impl ModeProblem {
    pub fn new(k: u32, alpha: f64, half_width: f64, n: usize) -> Self {
        Self {
            k,
            alpha,
            half_width,
            n,
            bc: BoundaryCondition::default_for_mode(k),
        }
    }

    pub fn with_bc(mut self, bc: BoundaryCondition) -> Self {
        self.bc = bc;
        self
    }

    /// Grid step `h = 2T / (n + 1)`.
    pub fn step(&self) -> f64 {
        2.0 * self.half_width / (self.n as f64 + 1.0)
    }
}

/// Coefficients of the separated mode-`k` problem `-f'' + q f = lambda w f`.
#[derive(Clone, Copy, Debug)]
pub struct SeparatedMode<'a> {
    metric: &'a ConformalCylinderMetric,
    k: u32,
    alpha: f64,
}

impl SeparatedMode<'_> {
    /// `q(t) = k^2 + alpha psi''(t)`.
    pub fn potential(&self, t: f64) -> f64 {
        let k = self.k as f64;
        let curvature = if self.alpha == 0.0 {
            0.0
        } else {
            self.alpha * self.metric.psi_second(t)
        };
        k * k + curvature
    }

    /// `w(t) = c exp(-2 psi(t))`.
    pub fn weight(&self, t: f64) -> f64 {
        self.metric.conformal_weight(t)
    }
}

pub fn separate_mode(metric: &ConformalCylinderMetric, k: u32, alpha: f64) -> SeparatedMode<'_> {
    SeparatedMode { metric, k, alpha }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PencilMeta {
    pub k: u32,
    pub alpha: f64,
    pub half_width: f64,
    pub n: usize,
    pub bc: BoundaryCondition,
    pub metric: String,
}

/// `A f = lambda W f` with `A` symmetric tridiagonal and `W` positive diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagonalPencil {
    pub diag: Vec<f64>,
    /// Sub- (and super-) diagonal of `A`.
    pub offdiag: Vec<f64>,
    pub weight: Vec<f64>,
    pub meta: Option<PencilMeta>,
}

/// A symmetric tridiagonal matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

/// Assembles the pencil for `-f'' + q f = lambda w f` on `[-T, T]` with `n`
/// interior points `t_i = -T + i h`, `i = 1..=n`.
///
/// Dirichlet sets the values at `t = +-T` to zero. Neumann reflects the ghost
/// value across the half-cell next to each end (`f_0 = f_1`), which keeps the
/// stencil symmetric and makes constants exact null vectors when `q = 0`.
pub fn assemble_pencil<Q, W>(
    potential: Q,
    weight: W,
    half_width: f64,
    n: usize,
    bc: BoundaryCondition,
) -> Result<TridiagonalPencil>
where
    Q: Fn(f64) -> f64,
    W: Fn(f64) -> f64,
{
    if n < 3 {
        return Err(invalid("n", format!("need at least 3 grid points, got {n}")));
    }
    if !(half_width > 0.0 && half_width.is_finite()) {
        return Err(invalid("T", format!("must be positive and finite, got {half_width}")));
    }
    let h = 2.0 * half_width / (n as f64 + 1.0);
    let inv_h2 = 1.0 / (h * h);
    let mut diag = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);
    for i in 1..=n {
        let t = -half_width + i as f64 * h;
        diag.push(2.0 * inv_h2 + potential(t));
        let wi = weight(t);
        if !(wi > 0.0 && wi.is_finite()) {
            return Err(Error::NonPositiveWeight {
                index: i - 1,
                value: wi,
            });
        }
        w.push(wi);
    }
    if bc == BoundaryCondition::Neumann {
        diag[0] -= inv_h2;
        diag[n - 1] -= inv_h2;
    }
    Ok(TridiagonalPencil {
        diag,
        offdiag: vec![-inv_h2; n - 1],
        weight: w,
        meta: None,
    })
}

/// Discretizes one Fourier sector of `-Laplacian + alpha K` on `metric`.
pub fn build_pencil(metric: &ConformalCylinderMetric, problem: &ModeProblem) -> Result<TridiagonalPencil> {
    if !problem.alpha.is_finite() {
        return Err(invalid("alpha", "must be finite"));
    }
    let mode = separate_mode(metric, problem.k, problem.alpha);
    let mut pencil = assemble_pencil(
        |t| mode.potential(t),
        |t| mode.weight(t),
        problem.half_width,
        problem.n,
        problem.bc,
    )?;
    pencil.meta = Some(PencilMeta {
        k: problem.k,
        alpha: problem.alpha,
        half_width: problem.half_width,
        n: problem.n,
        bc: problem.bc,
        metric: metric.descriptor(),
    });
    Ok(pencil)
}

/// Congruence by `W^(-1/2)`: the returned matrix has exactly the pencil's spectrum.
pub fn reduce_to_standard(pencil: &TridiagonalPencil) -> Result<SymTridiagonal> {
    let n = pencil.diag.len();
    if pencil.weight.len() != n || pencil.offdiag.len() + 1 != n {
        return Err(invalid("pencil", "inconsistent array lengths"));
    }
    if let Some((index, &value)) = pencil
        .weight
        .iter()
        .enumerate()
        .find(|(_, &w)| !(w > 0.0 && w.is_finite()))
    {
        return Err(Error::NonPositiveWeight { index, value });
    }
    let diag = pencil.diag.iter().zip(&pencil.weight).map(|(a, w)| a / w).collect();
    let offdiag = pencil
        .offdiag
        .iter()
        .zip(pencil.weight.windows(2))
        .map(|(b, w)| b / (w[0] * w[1]).sqrt())
        .collect();
    Ok(SymTridiagonal { diag, offdiag })
}
