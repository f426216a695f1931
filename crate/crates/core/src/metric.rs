//! Conformal cylinder metrics `c * exp(-2 psi(t)) (dt^2 + dtheta^2)`.
//!
//! The coordinate `t` runs over the real line and `theta` over `[0, 2pi)`; the two
//! ends `t -> +-inf` close up into the poles of a sphere when `exp(-2 psi)` decays
//! like `exp(-2|t|)`. With this normalization:
//!
//! - area density relative to `dt dtheta` is `c * exp(-2 psi)`,
//! - Gauss curvature is `K = exp(2 psi) psi'' / c`,
//! - so `K dmu = psi'' dt dtheta` does not depend on `c`.
//!
//! The stretched family has `psi(t) = log(1 + e^(t - L)) + log(1 + e^(-t - L))`:
//! a flat cylinder of length about `2L` capped by two nearly round hemispheres.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::quadrature::{integrate_line, Envelope};

/// A real function of `t`, shared between threads.
pub type Profile = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// `log(1 + e^x)` without overflow.
#[inline]
pub fn log1p_exp(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

/// The logistic function `1 / (1 + e^(-x))` without overflow.
#[inline]
fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Exact area of the unscaled stretched metric:
/// `4 pi (L coth L - 1) / (1 - e^(-2L))^2`.
pub fn area_closed_form(half_length: f64) -> f64 {
    let l = half_length;
    let numerator = if l < 1e-4 {
        // L coth L - 1 = L^2/3 - L^4/45 + ...
        l * l / 3.0 - l.powi(4) / 45.0
    } else {
        l / l.tanh() - 1.0
    };
    let denominator = (-2.0 * l).exp_m1().powi(2);
    4.0 * PI * numerator / denominator
}

/// `area_closed_form(L) - 4 pi (L - 1)`, evaluated without cancellation.
pub fn area_remainder(half_length: f64) -> f64 {
    let l = half_length;
    4.0 * PI * l * (-2.0 * l).exp() * area_remainder_coefficient(l)
}

/// `C(L)` in `area_closed_form(L) = 4 pi (L - 1) + 4 pi C(L) L e^(-2L)`.
///
/// With `x = e^(-2L)`,
/// `C(L) = ((4L - 2) - 3(L - 1) x + (L - 1) x^2) / (L (1 - x)^3)`. It exceeds 4 only
/// for `L < 0.4588`, has a minimum near 3.04 at `L ~ 1.3` and tends to 4 from below.
pub fn area_remainder_coefficient(half_length: f64) -> f64 {
    let l = half_length;
    let x = (-2.0 * l).exp();
    let one_minus_x = -(-2.0 * l).exp_m1();
    ((4.0 * l - 2.0) - 3.0 * (l - 1.0) * x + (l - 1.0) * x * x) / (l * one_minus_x.powi(3))
}

/// Lower bounds used by the spectral mode cutoff, for the unscaled metric.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeBounds {
    /// `min_t exp(2 psi(t))`.
    pub min_inverse_weight: f64,
    /// `min_t exp(2 psi(t)) psi''(t)`.
    pub min_curvature: f64,
}

/// A user-supplied conformal factor. All three derivatives must be analytic.
#[derive(Clone)]
pub struct CustomProfile {
    pub name: String,
    pub psi: Profile,
    pub psi_prime: Profile,
    pub psi_second: Profile,
    /// Bound on `exp(-2 psi)`; required for area and line integrals.
    pub weight_envelope: Option<Envelope>,
    /// Bound on `|psi''|`; required for curvature integrals.
    pub psi_second_envelope: Option<Envelope>,
    /// Whether `psi` is even in `t`.
    pub even: bool,
    pub bounds: Option<ModeBounds>,
}

impl fmt::Debug for CustomProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomProfile")
            .field("name", &self.name)
            .field("weight_envelope", &self.weight_envelope)
            .field("psi_second_envelope", &self.psi_second_envelope)
            .field("even", &self.even)
            .field("bounds", &self.bounds)
            .finish_non_exhaustive()
    }
}

#[derive(Clone, Debug)]
pub enum Family {
    /// The stretched family with half-length `L`.
    Stretched {
        half_length: f64,
    },
    /// The unit round sphere, `psi = log cosh t`.
    RoundSphere,
    Custom(CustomProfile),
}

#[derive(Clone, Debug)]
pub struct ConformalCylinderMetric {
    family: Family,
    scale: f64,
}

impl ConformalCylinderMetric {
    /// The stretched metric with half-length `L > 0` and unit scale.
    pub fn stretched(half_length: f64) -> Result<Self> {
        if !(half_length > 0.0 && half_length.is_finite()) {
            return Err(invalid("L", format!("must be positive and finite, got {half_length}")));
        }
        Ok(Self {
            family: Family::Stretched { half_length },
            scale: 1.0,
        })
    }

    /// The stretched metric rescaled to total area `4 pi`.
    pub fn stretched_normalized(half_length: f64) -> Result<Self> {
        let m = Self::stretched(half_length)?;
        m.with_scale(4.0 * PI / area_closed_form(half_length))
    }

    pub fn round_sphere() -> Self {
        Self {
            family: Family::RoundSphere,
            scale: 1.0,
        }
    }

    pub fn custom(profile: CustomProfile) -> Self {
        Self {
            family: Family::Custom(profile),
            scale: 1.0,
        }
    }

    /// Replaces the metric scale `c`.
    pub fn with_scale(mut self, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(invalid("scale", format!("must be positive and finite, got {scale}")));
        }
        self.scale = scale;
        Ok(self)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `L` for the stretched family.
    pub fn half_length(&self) -> Option<f64> {
        match self.family {
            Family::Stretched { half_length } => Some(half_length),
            _ => None,
        }
    }

    pub fn is_even(&self) -> bool {
        match &self.family {
            Family::Stretched { .. } | Family::RoundSphere => true,
            Family::Custom(p) => p.even,
        }
    }

    /// Short human-readable label, stable across runs.
    pub fn descriptor(&self) -> String {
        let base = match &self.family {
            Family::Stretched { half_length } => format!("stretched(L={half_length})"),
            Family::RoundSphere => "round_sphere".to_string(),
            Family::Custom(p) => format!("custom({})", p.name),
        };
        if self.scale == 1.0 {
            base
        } else {
            format!("{base}*{:.16e}", self.scale)
        }
    }

    /// Default truncation half-width for the `t` interval.
    pub fn default_half_width(&self) -> f64 {
        match self.family {
            Family::Stretched { half_length } => half_length + 25.0,
            // sech^2(12) ~ 1.5e-10 already; a shorter interval halves the grid step
            Family::RoundSphere => 12.0,
            Family::Custom(_) => 25.0,
        }
    }

    /// The conformal factor `psi(t)` (independent of the scale).
    pub fn psi(&self, t: f64) -> f64 {
        match &self.family {
            Family::Stretched { half_length: l } => log1p_exp(t - l) + log1p_exp(-t - l),
            Family::RoundSphere => {
                let a = t.abs();
                a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
            }
            Family::Custom(p) => (p.psi)(t),
        }
    }

    pub fn psi_prime(&self, t: f64) -> f64 {
        match &self.family {
            Family::Stretched { half_length: l } => logistic(t - l) - logistic(-t - l),
            Family::RoundSphere => t.tanh(),
            Family::Custom(p) => (p.psi_prime)(t),
        }
    }

    /// `psi''(t)`. For the stretched family this is
    /// `(1 + cosh t cosh L) / (cosh t + cosh L)^2`, evaluated after multiplying
    /// through by `4 e^(-2L)` so that nothing overflows.
    pub fn psi_second(&self, t: f64) -> f64 {
        match &self.family {
            Family::Stretched { half_length: l } => {
                let (a2, s, b) = stretched_terms(t, *l);
                let r = 1.0 / (s + b);
                (4.0 * a2 * r + b * (s * r)) * r
            }
            Family::RoundSphere => sech_squared(t),
            Family::Custom(p) => (p.psi_second)(t),
        }
    }

    /// Gauss curvature of the scaled metric.
    pub fn gauss_curvature(&self, t: f64) -> f64 {
        let unscaled = match &self.family {
            // 4 e^(-2L) (1 + cosh L cosh t)
            Family::Stretched { half_length: l } => {
                let (a2, s, b) = stretched_terms(t, *l);
                4.0 * a2 + s * b
            }
            Family::RoundSphere => 1.0,
            Family::Custom(p) => (2.0 * (p.psi)(t)).exp() * (p.psi_second)(t),
        };
        unscaled / self.scale
    }

    /// Area density `c * exp(-2 psi(t))` relative to `dt dtheta`.
    ///
    /// The stretched family uses `e^(2L) / (4 (cosh t + cosh L)^2)` with numerator and
    /// denominator multiplied by `e^(-2L)`.
    pub fn conformal_weight(&self, t: f64) -> f64 {
        let unscaled = match &self.family {
            Family::Stretched { half_length: l } => {
                let (_, s, b) = stretched_terms(t, *l);
                1.0 / ((s + b) * (s + b))
            }
            Family::RoundSphere => sech_squared(t),
            Family::Custom(p) => (-2.0 * (p.psi)(t)).exp(),
        };
        self.scale * unscaled
    }

    /// Envelope of [`conformal_weight`](Self::conformal_weight), including the scale.
    pub fn weight_envelope(&self) -> Option<Envelope> {
        let env = match &self.family {
            // weight <= e^(2L) e^(-2|t|)
            Family::Stretched { half_length: l } => Envelope::new(2.0 * l, 2.0),
            Family::RoundSphere => Envelope::new(4.0_f64.ln(), 2.0),
            Family::Custom(p) => p.weight_envelope?,
        };
        Some(env.scaled(self.scale))
    }

    /// Envelope of `|psi''|`.
    pub fn psi_second_envelope(&self) -> Option<Envelope> {
        match &self.family {
            // psi'' <= 2 cosh L / cosh t <= 4 e^L e^(-|t|)
            Family::Stretched { half_length: l } => Some(Envelope::new(4.0_f64.ln() + l, 1.0)),
            Family::RoundSphere => Some(Envelope::new(4.0_f64.ln(), 2.0)),
            Family::Custom(p) => p.psi_second_envelope,
        }
    }

    /// Lower bounds on `exp(2 psi)/c` and on `K`, both attained at `t = 0` for the
    /// built-in families.
    pub fn mode_bounds(&self) -> Option<ModeBounds> {
        let unscaled = match &self.family {
            Family::Stretched { half_length: l } => {
                let a = (-l).exp();
                ModeBounds {
                    min_inverse_weight: (1.0 + a).powi(4),
                    min_curvature: 4.0 * a * a + 2.0 * a * (1.0 + a * a),
                }
            }
            Family::RoundSphere => ModeBounds {
                min_inverse_weight: 1.0,
                min_curvature: 1.0,
            },
            Family::Custom(p) => p.bounds?,
        };
        Some(ModeBounds {
            min_inverse_weight: unscaled.min_inverse_weight / self.scale,
            min_curvature: unscaled.min_curvature / self.scale,
        })
    }

    /// Total area `2 pi int c exp(-2 psi) dt`, by quadrature plus an analytic tail bound.
    pub fn area(&self, rel_tol: f64) -> Result<f64> {
        if !(rel_tol > 0.0 && rel_tol <= 1e-2) {
            return Err(invalid("rel_tol", format!("must lie in (0, 1e-2], got {rel_tol}")));
        }
        let envelope = self
            .weight_envelope()
            .ok_or_else(|| Error::MissingTailBound(self.descriptor()))?;
        let breaks = self.breakpoints();
        let (integral, _) = integrate_line(|t| self.conformal_weight(t), envelope, &breaks, rel_tol, 0.0)?;
        Ok(2.0 * PI * integral.value)
    }

    /// Points where the integrands change character (the neck ends for the stretched
    /// family).
    pub(crate) fn breakpoints(&self) -> Vec<f64> {
        match self.family {
            Family::Stretched { half_length } => vec![-half_length, 0.0, half_length],
            _ => vec![0.0],
        }
    }
}

#[inline]
fn sech_squared(t: f64) -> f64 {
    let e = (-2.0 * t.abs()).exp();
    4.0 * e / ((1.0 + e) * (1.0 + e))
}

/// For the stretched family returns `(e^(-2L), s, b)` with
/// `s = e^(t-L) + e^(-t-L) = 2 e^(-L) cosh t` and `b = 1 + e^(-2L) = 2 e^(-L) cosh L`.
#[inline]
fn stretched_terms(t: f64, l: f64) -> (f64, f64, f64) {
    let a2 = (-2.0 * l).exp();
    let s = (t - l).exp() + (-t - l).exp();
    (a2, s, 1.0 + a2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn psi_at_origin() {
        let m = ConformalCylinderMetric::stretched(1.0).unwrap();
        let expected = 2.0 * (1.0 + (-1.0_f64).exp()).ln();
        assert!((m.psi(0.0) - expected).abs() < 1e-15);
        // 0.626523375036445668... (30-digit evaluation)
        assert!((m.psi(0.0) - 0.626_523_375_036_445_7).abs() < 1e-15);
        assert_eq!(ConformalCylinderMetric::round_sphere().psi(0.0), 0.0);
    }

    #[test]
    fn psi_asymptote_and_large_arguments() {
        let l = 3.0;
        let m = ConformalCylinderMetric::stretched(l).unwrap();
        for t in [40.0, 100.0, 700.0, -700.0] {
            let v = m.psi(t);
            assert!(v.is_finite());
            assert!((v - t.abs() + l).abs() < 1e-15 * t.abs().max(1.0) + 2.0 * (-(t.abs() - l)).exp());
        }
        assert!(m.conformal_weight(700.0) >= 0.0);
        assert!(m.gauss_curvature(700.0).is_finite());
        assert!(m.psi_second(700.0).is_finite());
    }

    #[test]
    fn curvature_at_origin() {
        let m = ConformalCylinderMetric::stretched(1.0).unwrap();
        let expected = 4.0 * (-2.0_f64).exp() * (1.0 + 1.0_f64.cosh());
        assert!(rel(m.gauss_curvature(0.0), expected) < 1e-14);
        // 1.376674152025063296...
        assert!((m.gauss_curvature(0.0) - 1.376_674_152_025_063_3).abs() < 1e-14);
        // cross-check against e^{2 psi} psi''
        let alt = (2.0 * m.psi(0.0)).exp() * m.psi_second(0.0);
        assert!(rel(alt, expected) < 1e-14);
        let sphere = ConformalCylinderMetric::round_sphere();
        assert_eq!(sphere.gauss_curvature(3.7), 1.0);
    }

    #[test]
    fn weight_at_origin_and_limit() {
        let m = ConformalCylinderMetric::stretched(1.0).unwrap();
        let expected = 1.0_f64.exp().powi(2) / (4.0 * (1.0 + 1.0_f64.cosh()).powi(2));
        assert!(rel(m.conformal_weight(0.0), expected) < 1e-14);
        // 0.285633216767045681...
        assert!((m.conformal_weight(0.0) - 0.285_633_216_767_045_7).abs() < 1e-15);
        assert!(rel(m.conformal_weight(0.0), (-2.0 * m.psi(0.0)).exp()) < 1e-14);
        assert_eq!(ConformalCylinderMetric::round_sphere().conformal_weight(0.0), 1.0);

        let l = 2.0;
        let m = ConformalCylinderMetric::stretched(l).unwrap();
        let t = 60.0;
        assert!(rel(m.conformal_weight(t) * (2.0 * t).exp(), (2.0 * l).exp()) < 1e-12);
    }

    #[test]
    fn curvature_scales_inversely() {
        let m = ConformalCylinderMetric::stretched(4.0).unwrap();
        let s = m.clone().with_scale(0.25).unwrap();
        for t in [-6.0, 0.0, 1.5, 9.0] {
            assert!(rel(s.gauss_curvature(t), 4.0 * m.gauss_curvature(t)) < 1e-15);
            assert!(rel(s.conformal_weight(t), 0.25 * m.conformal_weight(t)) < 1e-15);
        }
    }

    #[test]
    fn area_matches_closed_form_at_one() {
        let m = ConformalCylinderMetric::stretched(1.0).unwrap();
        let closed = area_closed_form(1.0);
        let expected = 4.0 * PI * (1.0 / 1.0_f64.tanh() - 1.0) / (1.0 - (-2.0_f64).exp()).powi(2);
        assert!(rel(closed, expected) < 1e-14);
        // 5.261477080624883740... (closed form and 30-digit quadrature agree)
        assert!((closed - 5.261_477_080_624_884).abs() < 1e-13);
        assert!(rel(m.area(1e-10).unwrap(), closed) < 1e-10);
    }

    #[test]
    fn round_sphere_area() {
        let a = ConformalCylinderMetric::round_sphere().area(1e-10).unwrap();
        assert!(rel(a, 4.0 * PI) < 1e-10);
    }

    #[test]
    fn normalized_area_is_four_pi() {
        for l in [1.0, 7.0, 30.0] {
            let m = ConformalCylinderMetric::stretched_normalized(l).unwrap();
            assert!(rel(m.area(1e-10).unwrap(), 4.0 * PI) < 1e-9);
        }
    }

    #[test]
    fn area_asymptotics() {
        let l = 10.0;
        // remainder is 4 pi (4L - 2) e^{-2L} to leading order
        let slack = 4.0 * PI * 4.0 * l * (-20.0_f64).exp();
        assert!((area_closed_form(l) - 4.0 * PI * 9.0).abs() <= slack);
        // the cancellation-free remainder agrees with direct subtraction where the latter is accurate
        for l in [0.5, 1.0, 2.0, 3.0] {
            let direct = area_closed_form(l) - 4.0 * PI * (l - 1.0);
            assert!((area_remainder(l) - direct).abs() < 1e-12 * area_closed_form(l));
        }
        assert!(area_remainder(80.0) > 0.0);
    }

    #[test]
    fn area_small_l_branch_is_continuous() {
        let below = area_closed_form(0.999e-4);
        let above = area_closed_form(1.001e-4);
        assert!(rel(below, above) < 1e-3);
    }

    #[test]
    fn area_rejects_bad_tolerance() {
        let m = ConformalCylinderMetric::round_sphere();
        assert!(m.area(0.0).is_err());
        assert!(m.area(0.5).is_err());
    }

    #[test]
    fn custom_without_envelope_has_no_area() {
        let p = CustomProfile {
            name: "cosh".into(),
            psi: Arc::new(|t: f64| t.cosh().ln()),
            psi_prime: Arc::new(|t: f64| t.tanh()),
            psi_second: Arc::new(|t: f64| 1.0 / t.cosh().powi(2)),
            weight_envelope: None,
            psi_second_envelope: None,
            even: true,
            bounds: None,
        };
        let m = ConformalCylinderMetric::custom(p);
        assert!(matches!(m.area(1e-8), Err(Error::MissingTailBound(_))));
        assert!((m.gauss_curvature(0.3) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn constructor_validation() {
        assert!(ConformalCylinderMetric::stretched(0.0).is_err());
        assert!(ConformalCylinderMetric::stretched(f64::NAN).is_err());
        assert!(ConformalCylinderMetric::round_sphere().with_scale(-1.0).is_err());
    }

    #[test]
    fn mode_bounds_match_pointwise_minimum() {
        let m = ConformalCylinderMetric::stretched(3.0)
            .unwrap()
            .with_scale(0.5)
            .unwrap();
        let b = m.mode_bounds().unwrap();
        assert!(rel(b.min_curvature, m.gauss_curvature(0.0)) < 1e-14);
        assert!(rel(b.min_inverse_weight, 1.0 / m.conformal_weight(0.0)) < 1e-14);
        for i in -100..=100 {
            let t = i as f64 * 0.1;
            assert!(m.gauss_curvature(t) >= b.min_curvature * (1.0 - 1e-14));
        }
    }
}
