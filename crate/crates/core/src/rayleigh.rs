//! Rayleigh quotients of `-Laplacian + alpha K` for `theta`-independent test functions.
//!
//! For `u = u(t)` in the `(t, theta)` chart:
//!
//! - `int |grad u|^2 dmu = 2 pi int u'^2 dt` (Dirichlet energy is conformally invariant),
//! - `int K u^2 dmu = 2 pi int psi'' u^2 dt` (`K dmu` is scale free),
//! - `int u^2 dmu = 2 pi int c exp(-2 psi) u^2 dt`.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::metric::{ConformalCylinderMetric, Family, Profile};
use crate::quadrature::{integrate, integrate_line, Envelope};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TestParity {
    Even,
    Odd,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Support {
    /// `u` vanishes outside `[lo, hi]`.
    Interval { lo: f64, hi: f64 },
    /// `u` is defined on the whole line with `|u| <= sup_abs` and `u'^2` bounded
    /// by the given envelope.
    Line { sup_abs: f64, derivative_sq: Envelope },
}

/// A test function `u(t)` with its analytic derivative.
#[derive(Clone)]
pub struct TestFunction {
    pub name: String,
    pub value: Profile,
    pub derivative: Profile,
    pub support: Support,
    /// Points where `u'` may jump.
    pub breakpoints: Vec<f64>,
    pub parity: TestParity,
}

impl std::fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TestFunction")
            .field("name", &self.name)
            .field("support", &self.support)
            .field("parity", &self.parity)
            .finish_non_exhaustive()
    }
}

/// `sin(pi t / L)` on `[-L, L]`, zero outside.
pub fn cutoff_sine(half_length: f64) -> Result<TestFunction> {
    if !(half_length > 0.0 && half_length.is_finite()) {
        return Err(invalid("L", format!("must be positive and finite, got {half_length}")));
    }
    let l = half_length;
    let freq = PI / l;
    Ok(TestFunction {
        name: format!("cutoff_sine(L={l})"),
        value: Arc::new(move |t: f64| if t.abs() <= l { (freq * t).sin() } else { 0.0 }),
        derivative: Arc::new(move |t: f64| if t.abs() < l { freq * (freq * t).cos() } else { 0.0 }),
        support: Support::Interval { lo: -l, hi: l },
        breakpoints: vec![-l, 0.0, l],
        parity: TestParity::Odd,
    })
}

/// `tanh t`: the first spherical harmonic `cos(polar angle)` on the round sphere.
pub fn tanh_profile() -> TestFunction {
    TestFunction {
        name: "tanh".into(),
        value: Arc::new(f64::tanh),
        derivative: Arc::new(|t: f64| 1.0 / t.cosh().powi(2)),
        support: Support::Line {
            sup_abs: 1.0,
            // sech^4 t <= 16 e^(-4|t|)
            derivative_sq: Envelope::new(16.0_f64.ln(), 4.0),
        },
        breakpoints: vec![0.0],
        parity: TestParity::Odd,
    }
}

/// The constant function 1.
pub fn constant_one() -> TestFunction {
    TestFunction {
        name: "one".into(),
        value: Arc::new(|_| 1.0),
        derivative: Arc::new(|_| 0.0),
        support: Support::Line {
            sup_abs: 1.0,
            derivative_sq: Envelope::zero(),
        },
        breakpoints: vec![0.0],
        parity: TestParity::Even,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RayleighReport {
    /// `int |grad u|^2 dmu`.
    pub dirichlet_energy: f64,
    /// `int K u^2 dmu`.
    pub curvature_term: f64,
    /// `int u^2 dmu`.
    pub mass_term: f64,
    /// `(dirichlet_energy + alpha curvature_term) / mass_term`.
    pub quotient: f64,
    pub alpha: f64,
    pub half_length: Option<f64>,
    pub metric: String,
    pub test_function: String,
}

fn integrate_parts<F: Fn(f64) -> f64>(
    f: F,
    support: Support,
    envelope: impl FnOnce(f64) -> Result<Envelope>,
    breakpoints: &[f64],
    rel_tol: f64,
) -> Result<f64> {
    match support {
        Support::Interval { lo, hi } => Ok(integrate(f, lo, hi, breakpoints, rel_tol, 0.0)?.value),
        Support::Line { sup_abs, .. } => {
            let env = envelope(sup_abs)?;
            Ok(integrate_line(f, env, breakpoints, rel_tol, 0.0)?.0.value)
        }
    }
}

/// Evaluates the three integrals of the Rayleigh quotient by quadrature.
pub fn rayleigh_quotient(
    metric: &ConformalCylinderMetric,
    alpha: f64,
    u: &TestFunction,
    rel_tol: f64,
) -> Result<RayleighReport> {
    if !alpha.is_finite() {
        return Err(invalid("alpha", "must be finite"));
    }
    if !(rel_tol > 0.0) {
        return Err(invalid("rel_tol", "must be positive"));
    }
    let mut breaks = u.breakpoints.clone();
    breaks.extend(metric.breakpoints());
    let missing = || Error::MissingTailBound(metric.descriptor());

    let energy = integrate_parts(
        |t| (u.derivative)(t).powi(2),
        u.support,
        |_| match u.support {
            Support::Line { derivative_sq, .. } => Ok(derivative_sq),
            Support::Interval { .. } => unreachable!("interval support needs no envelope"),
        },
        &breaks,
        rel_tol,
    )?;
    let curvature = integrate_parts(
        |t| metric.psi_second(t) * (u.value)(t).powi(2),
        u.support,
        |sup| Ok(metric.psi_second_envelope().ok_or_else(missing)?.scaled(sup * sup)),
        &breaks,
        rel_tol,
    )?;
    let mass = integrate_parts(
        |t| metric.conformal_weight(t) * (u.value)(t).powi(2),
        u.support,
        |sup| Ok(metric.weight_envelope().ok_or_else(missing)?.scaled(sup * sup)),
        &breaks,
        rel_tol,
    )?;
    if !(mass > 0.0) {
        return Err(invalid("u", "test function has zero mass"));
    }
    let dirichlet_energy = 2.0 * PI * energy;
    let curvature_term = 2.0 * PI * curvature;
    let mass_term = 2.0 * PI * mass;
    Ok(RayleighReport {
        dirichlet_energy,
        curvature_term,
        mass_term,
        quotient: (dirichlet_energy + alpha * curvature_term) / mass_term,
        alpha,
        half_length: metric.half_length(),
        metric: metric.descriptor(),
        test_function: u.name.clone(),
    })
}

/// Upper bound for `lambda_1^alpha` from an odd test function on a metric even in `t`.
///
/// The ground state of `-Laplacian + alpha K` is simple, hence invariant under
/// `t -> -t`, and being positive it is even. An odd `u` is then orthogonal to it and
/// its Rayleigh quotient bounds `lambda_1^alpha` from above.
pub fn upper_bound_lambda1_with(
    metric: &ConformalCylinderMetric,
    alpha: f64,
    u: &TestFunction,
    rel_tol: f64,
) -> Result<RayleighReport> {
    if !metric.is_even() {
        return Err(Error::NotEven("metric is not even in t"));
    }
    if u.parity != TestParity::Odd {
        return Err(Error::NotEven("test function is not odd in t"));
    }
    rayleigh_quotient(metric, alpha, u, rel_tol)
}

/// [`upper_bound_lambda1_with`] using the canonical odd test function of the family:
/// the cutoff sine for stretched metrics and `tanh t` for the round sphere.
pub fn upper_bound_lambda1(metric: &ConformalCylinderMetric, alpha: f64, rel_tol: f64) -> Result<f64> {
    let u = match metric.family() {
        Family::Stretched { half_length } => cutoff_sine(*half_length)?,
        Family::RoundSphere => tanh_profile(),
        Family::Custom(_) => return Err(Error::NotEven("no canonical odd test function for custom metrics")),
    };
    Ok(upper_bound_lambda1_with(metric, alpha, &u, rel_tol)?.quotient)
}
