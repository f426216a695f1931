//! Adaptive Gauss-Kronrod (7/15) quadrature.
//!
//! Finite intervals are handled by global adaptive bisection driven by the
//! `|K15 - G7|` error estimate. Integrals over the whole line are truncated to
//! `[-T, T]`, where `T` is chosen from an exponential envelope
//! `|f(t)| <= exp(log_amplitude - rate * |t|)` so that the discarded tails stay
//! below half of the requested tolerance.

// nodes and weights as tabulated, to 30 digits
#![allow(clippy::excessive_precision)]

use crate::error::{invalid, Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_SEGMENTS: usize = 20_000;

/// Pointwise bound `|f(t)| <= exp(log_amplitude - rate * |t|)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Envelope {
    pub log_amplitude: f64,
    pub rate: f64,
}

impl Envelope {
    pub fn new(log_amplitude: f64, rate: f64) -> Self {
        Self { log_amplitude, rate }
    }

    /// The zero function.
    pub fn zero() -> Self {
        Self::new(f64::NEG_INFINITY, 1.0)
    }

    /// Envelope of the product of two enveloped functions.
    pub fn times(self, other: Envelope) -> Self {
        Self::new(self.log_amplitude + other.log_amplitude, self.rate + other.rate)
    }

    /// Envelope of `s * f` for a constant `s > 0`.
    pub fn scaled(self, s: f64) -> Self {
        Self::new(self.log_amplitude + s.ln(), self.rate)
    }

    /// Bound on `int_{from}^{inf} |f|`, for `from >= 0`.
    pub fn tail(&self, from: f64) -> f64 {
        (self.log_amplitude - self.rate * from).exp() / self.rate
    }
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Result of an adaptive integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
}

/// Integrates `f` over `[a, b]`, starting from the given breakpoints (points outside
/// `(a, b)` are ignored) and splitting any initial piece longer than `max_piece`.
///
/// Terminates once the summed error estimate is at most
/// `max(rel_tol * |value|, abs_tol)`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    rel_tol: f64,
    abs_tol: f64,
) -> Result<Integral> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(invalid(
            "interval",
            format!("[{a}, {b}] is not a finite nonempty interval"),
        ));
    }
    if !(rel_tol > 0.0) || abs_tol < 0.0 {
        return Err(invalid("rel_tol", "tolerances must be positive"));
    }
    let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|&p| p > a && p < b).collect();
    cuts.push(a);
    cuts.push(b);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let max_piece = 2.0;
    let mut segments = Vec::new();
    for w in cuts.windows(2) {
        let pieces = ((w[1] - w[0]) / max_piece).ceil().max(1.0) as usize;
        let step = (w[1] - w[0]) / pieces as f64;
        for i in 0..pieces {
            let lo = w[0] + step * i as f64;
            let hi = if i + 1 == pieces { w[1] } else { lo + step };
            segments.push(kronrod(&f, lo, hi));
        }
    }

    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if !value.is_finite() {
            return Err(invalid("integrand", "produced a non-finite value"));
        }
        let tol = (rel_tol * value.abs()).max(abs_tol);
        if error <= tol {
            return Ok(Integral {
                value,
                error_estimate: error,
            });
        }
        if segments.len() >= MAX_SEGMENTS {
            return Err(Error::QuadratureFailed {
                tol,
                estimate: error,
                segments: segments.len(),
            });
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("at least one segment");
        let s = segments.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            return Err(Error::QuadratureFailed {
                tol,
                estimate: error,
                segments: segments.len() + 1,
            });
        }
        segments.push(kronrod(&f, s.a, mid));
        segments.push(kronrod(&f, mid, s.b));
    }
}

/// Integrates `f` over the whole real line given an exponential envelope for `|f|`.
///
/// The truncation half-width is increased until the two analytic tails together are
/// at most `max(rel_tol * |value|, abs_tol) / 2`; the interior quadrature gets the
/// other half of the budget. Returns the interior value together with the half-width
/// used.
pub fn integrate_line<F: Fn(f64) -> f64>(
    f: F,
    envelope: Envelope,
    breakpoints: &[f64],
    rel_tol: f64,
    abs_tol: f64,
) -> Result<(Integral, f64)> {
    if !(envelope.rate > 0.0) {
        return Err(invalid("envelope", "decay rate must be positive"));
    }
    let inner = breakpoints.iter().fold(1.0_f64, |m, p| m.max(p.abs() + 1.0));
    // Half-width at which both tails together fall below `budget`.
    let width_for = |budget: f64| -> f64 {
        let t = (envelope.log_amplitude + (2.0 / (envelope.rate * budget)).ln()) / envelope.rate;
        if t.is_finite() {
            t.max(inner)
        } else {
            inner
        }
    };

    let mut half_width = width_for(0.25 * rel_tol.max(abs_tol));
    for _ in 0..8 {
        let integral = integrate(&f, -half_width, half_width, breakpoints, 0.5 * rel_tol, 0.5 * abs_tol)?;
        let allowed = 0.5 * (rel_tol * integral.value.abs()).max(abs_tol);
        let tails = 2.0 * envelope.tail(half_width);
        if tails <= allowed {
            return Ok((integral, half_width));
        }
        if allowed <= 0.0 {
            break;
        }
        half_width = width_for(allowed).max(half_width + 1.0);
    }
    Err(Error::QuadratureFailed {
        tol: rel_tol,
        estimate: 2.0 * envelope.tail(half_width),
        segments: 0,
    })
}
