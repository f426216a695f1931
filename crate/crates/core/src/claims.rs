//! Parameter sweeps, power-law fits and the claim report.
//!
//! Every check produces one [`ClaimRecord`]. Spectra of the area-normalized metric
//! `gamma_L` are obtained from the unscaled metric through
//! `lambda(c g) = lambda(g) / c`; one direct solve per report guards that path.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::discretize::{build_pencil, reduce_to_standard, ModeProblem};
use crate::eigen::{
    global_spectrum, smallest_eigenvalues, stretched_spectrum_for_normalization, SpectrumFlag, SpectrumNumerics,
};
use crate::error::{invalid, Error, Result};
use crate::metric::{area_closed_form, area_remainder_coefficient, ConformalCylinderMetric};
use crate::quadrature::integrate_line;
use crate::rayleigh::{constant_one, cutoff_sine, rayleigh_quotient, upper_bound_lambda1_with};
use crate::VERSION;

pub const REPORT_VERSION: u32 = 1;

/// Upper bound for `C(L)` in the area expansion; `C(L) < 4` once `L > 0.4588`.
pub const AREA_REMAINDER_BOUND: f64 = 4.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClaimNumerics {
    /// Interior grid points per Fourier mode.
    pub n: usize,
    /// Bisection tolerance, in the units of the area-`4 pi` metric.
    pub eigen_abs_tol: f64,
    pub quad_rel_tol: f64,
    /// Truncation half-width for round-sphere controls.
    pub sphere_half_width: f64,
}

impl Default for ClaimNumerics {
    fn default() -> Self {
        Self {
            n: 4000,
            eigen_abs_tol: 1e-8,
            quad_rel_tol: 1e-10,
            sphere_half_width: 12.0,
        }
    }
}

impl ClaimNumerics {
    pub fn spectrum(&self) -> SpectrumNumerics {
        SpectrumNumerics {
            n: self.n,
            abs_tol: self.eigen_abs_tol,
            ..SpectrumNumerics::default()
        }
    }

    fn sphere_spectrum(&self) -> SpectrumNumerics {
        SpectrumNumerics {
            half_width: Some(self.sphere_half_width),
            ..self.spectrum()
        }
    }
}

/// Closed intervals for fitted log-log slopes, plus the mass floor constant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Bands {
    pub lambda1_unnormalized: [f64; 2],
    pub lambda1_normalized: [f64; 2],
    pub dirichlet_energy: [f64; 2],
    pub curvature_term: [f64; 2],
    pub mass_term: [f64; 2],
    /// `c` in `mass_term >= c L`.
    pub mass_floor: f64,
    /// Smallest `L` included in the Rayleigh exponent fits.
    pub rayleigh_fit_min_l: f64,
}

impl Default for Bands {
    fn default() -> Self {
        Self {
            lambda1_unnormalized: [-2.3, -1.8],
            lambda1_normalized: [-1.25, -0.8],
            dirichlet_energy: [-1.1, -0.9],
            curvature_term: [-2.4, -1.6],
            mass_term: [0.9, 1.1],
            mass_floor: 1.0,
            rayleigh_fit_min_l: 10.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClaimConfig {
    #[serde(rename = "L_values")]
    pub l_values: Vec<f64>,
    pub alpha_values: Vec<f64>,
    pub adm_mass: f64,
    pub numerics: ClaimNumerics,
    pub bands: Bands,
}

impl Default for ClaimConfig {
    fn default() -> Self {
        Self {
            l_values: vec![1.0, 2.0, 5.0, 10.0, 20.0, 40.0, 80.0],
            alpha_values: vec![0.0, 1.0, 2.0],
            adm_mass: 1.0,
            numerics: ClaimNumerics::default(),
            bands: Bands::default(),
        }
    }
}

impl ClaimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.l_values.is_empty() {
            return Err(invalid("L_values", "must not be empty"));
        }
        if self.l_values.iter().any(|l| !(l.is_finite() && *l >= 1.0)) {
            return Err(invalid("L_values", "entries must be finite and >= 1"));
        }
        if self.l_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("L_values", "must be strictly increasing"));
        }
        if self.alpha_values.is_empty() || self.alpha_values.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
            return Err(invalid("alpha_values", "need at least one finite alpha >= 0"));
        }
        if !(self.adm_mass > 0.0 && self.adm_mass.is_finite()) {
            return Err(invalid("adm_mass", "must be positive"));
        }
        let n = &self.numerics;
        if n.n < 3 {
            return Err(invalid("n", "need at least 3 grid points"));
        }
        if !(n.eigen_abs_tol > 0.0) {
            return Err(invalid("eigen_abs_tol", "must be positive"));
        }
        if !(n.quad_rel_tol > 0.0 && n.quad_rel_tol <= 1e-2) {
            return Err(invalid("quad_rel_tol", "must lie in (0, 1e-2]"));
        }
        if !(n.sphere_half_width > 0.0) {
            return Err(invalid("sphere_half_width", "must be positive"));
        }
        Ok(())
    }
}

/// Least-squares fit of `log value = a + slope log L`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PowerFit {
    pub slope: f64,
    pub intercept: f64,
    /// Largest absolute deviation of `log value` from the fitted line.
    pub residual: f64,
}

/// Fits a power law through all points.
pub fn fit_power_law(l_values: &[f64], values: &[f64]) -> Result<PowerFit> {
    if l_values.len() != values.len() {
        return Err(invalid("values", "length differs from L list"));
    }
    let mut distinct: Vec<f64> = l_values.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: distinct.len(),
        });
    }
    for (&l, &v) in l_values.iter().zip(values) {
        if !(v > 0.0) || !(l > 0.0) {
            return Err(Error::NonPositiveValue { l, value: v });
        }
    }
    let xs: Vec<f64> = l_values.iter().map(|l| l.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).abs())
        .fold(0.0, f64::max);
    Ok(PowerFit {
        slope,
        intercept,
        residual,
    })
}

/// Power-law fit over the three largest `L`.
pub fn fit_decay_exponent(l_values: &[f64], values: &[f64]) -> Result<PowerFit> {
    if l_values.len() != values.len() {
        return Err(invalid("values", "length differs from L list"));
    }
    let mut pairs: Vec<(f64, f64)> = l_values.iter().copied().zip(values.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let tail = &pairs[pairs.len().saturating_sub(3)..];
    let (ls, vs): (Vec<f64>, Vec<f64>) = tail.iter().copied().unzip();
    fit_power_law(&ls, &vs)
}

/// One `(L, alpha)` sample of the sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepPoint {
    #[serde(rename = "L")]
    pub l: f64,
    pub alpha: f64,
    /// Exact area of the unscaled metric.
    pub area_hat: f64,
    pub lambda0_hat: f64,
    pub lambda1_hat: f64,
    pub lambda0_normalized: f64,
    pub lambda1_normalized: f64,
    /// `sqrt(1 / (2 lambda1))` on the area-`4 pi` metric.
    pub rhs_eq1: f64,
    /// `sqrt((2 + alpha) / (4 lambda1))` on the area-`4 pi` metric.
    pub rhs_eq3: f64,
    /// `lambda1 * area / ((2 + alpha) 4 pi)`.
    pub hersch_ratio: f64,
    pub flags: Vec<SpectrumFlag>,
}

pub fn sweep_point(l: f64, alpha: f64, numerics: &ClaimNumerics) -> Result<SweepPoint> {
    let (spectrum, factor) = stretched_spectrum_for_normalization(l, alpha, 2, &numerics.spectrum())?;
    let lambda1_normalized = spectrum.lambda1 * factor;
    Ok(SweepPoint {
        l,
        alpha,
        area_hat: area_closed_form(l),
        lambda0_hat: spectrum.lambda0,
        lambda1_hat: spectrum.lambda1,
        lambda0_normalized: spectrum.lambda0 * factor,
        lambda1_normalized,
        rhs_eq1: (1.0 / (2.0 * lambda1_normalized)).sqrt(),
        rhs_eq3: ((2.0 + alpha) / (4.0 * lambda1_normalized)).sqrt(),
        hersch_ratio: lambda1_normalized / (2.0 + alpha),
        flags: spectrum.flags,
    })
}

/// Sweep in `L`-major order, then `alpha`.
pub fn run_sweep(l_values: &[f64], alpha_values: &[f64], numerics: &ClaimNumerics) -> Result<Vec<SweepPoint>> {
    let grid: Vec<(f64, f64)> = l_values
        .iter()
        .flat_map(|&l| alpha_values.iter().map(move |&a| (l, a)))
        .collect();
    grid.par_iter().map(|&(l, a)| sweep_point(l, a, numerics)).collect()
}

pub const SWEEP_CSV_HEADER: &str =
    "L,alpha,area_hat,lambda0_hat,lambda1_hat,lambda1_normalized,rhs_eq1,rhs_eq3,hersch_ratio";

pub fn sweep_csv(points: &[SweepPoint]) -> String {
    use crate::format::sig17;
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for p in points {
        let row = [
            p.l,
            p.alpha,
            p.area_hat,
            p.lambda0_hat,
            p.lambda1_hat,
            p.lambda1_normalized,
            p.rhs_eq1,
            p.rhs_eq3,
            p.hersch_ratio,
        ]
        .map(sig17)
        .join(",");
        out.push_str(&row);
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimRecord {
    pub id: String,
    /// The formula being checked.
    pub anchor: String,
    pub inputs: Value,
    pub values: Value,
    pub target: Value,
    /// Signed slack: nonnegative when the claim holds.
    pub margin: f64,
    pub pass: bool,
    pub flags: Vec<String>,
}

impl ClaimRecord {
    fn new(id: &str, statement: &str) -> Self {
        Self {
            id: id.to_string(),
            anchor: statement.to_string(),
            inputs: Value::Object(Map::new()),
            values: Value::Object(Map::new()),
            target: Value::Object(Map::new()),
            margin: f64::NAN,
            pass: false,
            flags: Vec::new(),
        }
    }

    fn failed(id: &str, statement: &str, err: &Error) -> Self {
        let mut r = Self::new(id, statement);
        r.flags.push(format!("error: {err}"));
        r
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Environment {
    pub numerics: ClaimNumerics,
    /// Unix seconds; `None` for reproducible output.
    pub timestamp: Option<u64>,
    pub toolkit_version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimReport {
    pub version: u32,
    pub config: ClaimConfig,
    pub claims: Vec<ClaimRecord>,
    pub environment: Environment,
}

impl ClaimReport {
    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    pub fn claim(&self, id: &str) -> Option<&ClaimRecord> {
        self.claims.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(crate::format::to_json_string(self)?)
    }
}

fn band_margin(x: f64, band: [f64; 2]) -> f64 {
    (x - band[0]).min(band[1] - x)
}

fn flag_strings(flags: &[SpectrumFlag]) -> Vec<String> {
    flags
        .iter()
        .map(|f| serde_json::to_string(f).expect("flag serializes"))
        .collect()
}

fn sweep_flags(points: &[&SweepPoint]) -> Vec<String> {
    points
        .iter()
        .filter(|p| !p.flags.is_empty())
        .map(|p| format!("L={} alpha={}: {}", p.l, p.alpha, flag_strings(&p.flags).join("; ")))
        .collect()
}

fn by_alpha(points: &[SweepPoint], alpha: f64) -> Vec<&SweepPoint> {
    points.iter().filter(|p| p.alpha == alpha).collect()
}

/// Minimum of `K` on `gamma_L` over a 4001-point grid on `[-(L + 25), L + 25]`.
pub fn check_curvature_positivity(config: &ClaimConfig) -> ClaimRecord {
    let mut r = ClaimRecord::new(
        "curvature_positivity",
        "K(gamma_L) = 4 e^{-2L} (1 + cosh L cosh t) / c > 0",
    );
    let mut minima = Vec::new();
    let mut at_origin = Vec::new();
    for &l in &config.l_values {
        let m = match ConformalCylinderMetric::stretched_normalized(l) {
            Ok(m) => m,
            Err(e) => return ClaimRecord::failed(&r.id, &r.anchor, &e),
        };
        let half = l + 25.0;
        let min = (0..=4000)
            .map(|i| m.gauss_curvature(-half + 2.0 * half * i as f64 / 4000.0))
            .fold(f64::INFINITY, f64::min);
        minima.push(min);
        // closed form at t = 0, scaled by area / 4 pi
        let origin = 4.0 * (-2.0 * l).exp() * (1.0 + l.cosh()) * area_closed_form(l) / (4.0 * PI);
        at_origin.push(origin);
        if min > origin * (1.0 + 1e-12) {
            r.flags.push(format!(
                "L={l}: grid minimum {min:e} above closed-form value at t=0 {origin:e}"
            ));
        }
    }
    let sphere = ConformalCylinderMetric::round_sphere();
    let sphere_min = (0..=400)
        .map(|i| sphere.gauss_curvature(-12.0 + 0.06 * i as f64))
        .fold(f64::INFINITY, f64::min);
    let floor = minima.iter().copied().fold(f64::INFINITY, f64::min);
    r.inputs = json!({"L": config.l_values, "grid_points": 4001});
    r.values = json!({"min_K": minima, "K_at_origin": at_origin, "round_sphere_min_K": sphere_min});
    r.target = json!({"min_K": "> 0", "round_sphere_min_K": 1.0});
    r.margin = floor;
    r.pass = floor > 0.0 && (sphere_min - 1.0).abs() < 1e-12 && r.flags.is_empty();
    r
}

/// Relative gap between `4 e^{-2L} (1 + cosh L cosh t)` and `e^{2 psi} psi''` on
/// `gamma_hat_L`, both from closed forms, over 2001 points of `[-(L + 25), L + 25]`.
pub fn curvature_identity_gap(l: f64) -> Result<f64> {
    let m = ConformalCylinderMetric::stretched(l)?;
    let half = l + 25.0;
    let e = (-2.0 * l).exp();
    Ok((0..=2000)
        .map(|i| {
            let t = -half + 2.0 * half * i as f64 / 2000.0;
            let closed = 4.0 * (e + e * l.cosh() * t.cosh());
            let direct = (2.0 * m.psi(t)).exp() * m.psi_second(t);
            ((direct - closed) / closed).abs()
        })
        .fold(0.0, f64::max))
}

pub fn check_curvature_identity(config: &ClaimConfig) -> ClaimRecord {
    let mut r = ClaimRecord::new(
        "curvature_identity",
        "e^{2 psi_L} psi_L'' = 4 e^{-2L} (1 + cosh L cosh t)",
    );
    let gaps: Result<Vec<f64>> = config.l_values.iter().map(|&l| curvature_identity_gap(l)).collect();
    let gaps = match gaps {
        Ok(g) => g,
        Err(e) => return ClaimRecord::failed(&r.id, &r.anchor, &e),
    };
    let worst = gaps.iter().copied().fold(0.0, f64::max);
    r.inputs = json!({"L": config.l_values, "grid_points": 2001});
    r.values = json!({"max_rel_gap": gaps});
    r.target = json!({"max_rel_gap": 1e-12});
    r.margin = 1e-12 - worst;
    r.pass = worst <= 1e-12;
    r
}

pub fn check_area_normalization(config: &ClaimConfig) -> ClaimRecord {
    let mut r = ClaimRecord::new(
        "area_normalization",
        "area(gamma_hat_L) = 4 pi (L coth L - 1)/(1 - e^{-2L})^2 = 4 pi (L - 1) + O(L e^{-2L}); area(gamma_L) = 4 pi",
    );
    let tol = config.numerics.quad_rel_tol;
    let rows: Result<Vec<(f64, f64, f64)>> = config
        .l_values
        .par_iter()
        .map(|&l| {
            let hat = ConformalCylinderMetric::stretched(l)?.area(tol)?;
            let normalized = ConformalCylinderMetric::stretched_normalized(l)?.area(tol)?;
            Ok((hat, normalized, area_remainder_coefficient(l)))
        })
        .collect();
    let rows = match rows {
        Ok(rows) => rows,
        Err(e) => return ClaimRecord::failed(&r.id, &r.anchor, &e),
    };
    let closed: Vec<f64> = config.l_values.iter().map(|&l| area_closed_form(l)).collect();
    let hat_err: Vec<f64> = rows
        .iter()
        .zip(&closed)
        .map(|(row, c)| ((row.0 - c) / c).abs())
        .collect();
    let norm_err: Vec<f64> = rows.iter().map(|row| ((row.1 - 4.0 * PI) / (4.0 * PI)).abs()).collect();
    let coeff: Vec<f64> = rows.iter().map(|row| row.2).collect();
    let worst = hat_err.iter().chain(&norm_err).copied().fold(0.0, f64::max);
    let c_rec = coeff.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    r.inputs = json!({"L": config.l_values, "quad_rel_tol": tol});
    r.values = json!({
        "area_hat_quadrature": rows.iter().map(|x| x.0).collect::<Vec<_>>(),
        "area_hat_closed_form": closed,
        "area_hat_rel_error": hat_err,
        "area_normalized": rows.iter().map(|x| x.1).collect::<Vec<_>>(),
        "area_normalized_rel_error": norm_err,
        "remainder_coefficient": coeff,
        "remainder_coefficient_max": c_rec,
    });
    r.target = json!({"rel_error": 1e-8, "remainder_coefficient": AREA_REMAINDER_BOUND});
    r.margin = (1e-8 - worst).min(AREA_REMAINDER_BOUND - c_rec);
    r.pass = worst <= 1e-8 && c_rec <= AREA_REMAINDER_BOUND;
    r
}

/// `int K dmu = 4 pi` on every `gamma_L`, integrating `K * weight` from the two
/// closed forms.
pub fn check_gauss_bonnet(config: &ClaimConfig) -> ClaimRecord {
    let mut r = ClaimRecord::new("gauss_bonnet", "int K dmu(gamma_L) = 4 pi");
    let tol = config.numerics.quad_rel_tol;
    let totals: Result<Vec<f64>> = config
        .l_values
        .par_iter()
        .map(|&l| {
            let m = ConformalCylinderMetric::stretched_normalized(l)?;
            let env = m.psi_second_envelope().expect("stretched family has envelopes");
            let (integral, _) = integrate_line(
                |t| m.gauss_curvature(t) * m.conformal_weight(t),
                env,
                &[-l, 0.0, l],
                tol,
                0.0,
            )?;
            Ok(2.0 * PI * integral.value)
        })
        .collect();
    let totals = match totals {
        Ok(t) => t,
        Err(e) => return ClaimRecord::failed(&r.id, &r.anchor, &e),
    };
    let errs: Vec<f64> = totals.iter().map(|t| ((t - 4.0 * PI) / (4.0 * PI)).abs()).collect();
    let worst = errs.iter().copied().fold(0.0, f64::max);
    r.inputs = json!({"L": config.l_values});
    r.values = json!({"total_curvature": totals, "rel_error": errs});
    r.target = json!({"total_curvature": 4.0 * PI, "rel_tol": 1e-6});
    r.margin = 1e-6 - worst;
    r.pass = worst <= 1e-6;
    r
}

/// `lambda_0^1(gamma_L) > 0`, and `<= 1` from the constant test function.
pub fn check_ms_hypothesis(config: &ClaimConfig) -> ClaimRecord {
    let mut r = ClaimRecord::new(
        "ms_hypothesis",
        "lambda_0^1(gamma_L) = inf (int |grad u|^2 + K u^2)/int u^2 > 0",
    );
    let numerics = config.numerics.spectrum();
    let rows: Result<Vec<(f64, f64, Vec<SpectrumFlag>)>> = config
        .l_values
        .par_iter()
        .map(|&l| {
            let (s, factor) = stretched_spectrum_for_normalization(l, 1.0, 2, &numerics)?;
            let m = ConformalCylinderMetric::stretched_normalized(l)?;
            let bound = rayleigh_quotient(&m, 1.0, &constant_one(), config.numerics.quad_rel_tol)?.quotient;
            Ok((s.lambda0 * factor, bound, s.flags))
        })
        .collect();
    let rows = match rows {
        Ok(rows) => rows,
        Err(e) => return ClaimRecord::failed(&r.id, &r.anchor, &e),
    };
    let sphere = global_spectrum(
        &ConformalCylinderMetric::round_sphere(),
        1.0,
        2,
        &config.numerics.sphere_spectrum(),
    );
    let sphere_l0 = match sphere {
        Ok(s) => s.lambda0,
        Err(e) => return ClaimRecord::failed(&r.id, &r.anchor, &e),
    };
    for (l, row) in config.l_values.iter().zip(&rows) {
        if !row.2.is_empty() {
            r.flags.push(format!("L={l}: {}", flag_strings(&row.2).join("; ")));
        }
    }
    let l0: Vec<f64> = rows.iter().map(|x| x.0).collect();
    let bounds: Vec<f64> = rows.iter().map(|x| x.1).collect();
    let positive = l0.iter().copied().fold(f64::INFINITY, f64::min);
    let upper = l0.iter().map(|v| 1.0 + 1e-6 - v).fold(f64::INFINITY, f64::min);
    r.inputs = json!({"L": config.l_values, "alpha": 1.0});
    r.values = json!({
        "lambda0": l0,
        "constant_test_function_quotient": bounds,
        "round_sphere_lambda0": sphere_l0,
    });
    r.target = json!({"lambda0": "> 0 and <= 1 + 1e-6", "round_sphere_lambda0": 1.0});
    r.margin = positive.min(upper);
    r.pass = positive > 0.0
        && upper >= 0.0
        && bounds.iter().all(|b| (b - 1.0).abs() <= 1e-6)
        && (sphere_l0 - 1.0).abs() <= 1e-4
        && r.flags.is_empty();
    r
}

pub fn check_hersch_el_soufi_ilias(config: &ClaimConfig, points: &[SweepPoint]) -> ClaimRecord {
    let mut r = ClaimRecord::new(
        "hersch_el_soufi_ilias",
        "lambda_1^alpha * area <= (2 + alpha) 4 pi; lambda_1 * area <= 8 pi with equality on the round sphere",
    );
    let slack: Vec<f64> = points
        .iter()
        .map(|p| (2.0 + p.alpha) * 4.0 * PI + 1e-6 - p.lambda1_normalized * 4.0 * PI)
        .collect();
    let sphere = match global_spectrum(
        &ConformalCylinderMetric::round_sphere(),
        0.0,
        2,
        &config.numerics.sphere_spectrum(),
    ) {
        Ok(s) => s,
        Err(e) => return ClaimRecord::failed(&r.id, &r.anchor, &e),
    };
    let sphere_product = sphere.lambda1 * 4.0 * PI;
    let sphere_err = (sphere_product - 8.0 * PI).abs();
    r.flags = sweep_flags(&points.iter().collect::<Vec<_>>());
    r.inputs = json!({"L": config.l_values, "alpha": config.alpha_values});
    r.values = json!({
        "points": points.iter().map(|p| json!({"L": p.l, "alpha": p.alpha, "ratio": p.hersch_ratio})).collect::<Vec<_>>(),
        "round_sphere_lambda1_area": sphere_product,
    });
    r.target = json!({"ratio": "<= 1 (+1e-6 / ((2+alpha) 4 pi))", "round_sphere_lambda1_area": 8.0 * PI, "round_sphere_abs_tol": 1e-4});
    let min_slack = slack.iter().copied().fold(f64::INFINITY, f64::min);
    r.margin = min_slack.min(1e-4 - sphere_err);
    r.pass = min_slack >= 0.0 && sphere_err <= 1e-4 && r.flags.is_empty();
    r
}

fn check_decay(
    id: &str,
    statement: &str,
    config: &ClaimConfig,
    points: &[SweepPoint],
    band: [f64; 2],
    pick: impl Fn(&SweepPoint) -> f64,
) -> ClaimRecord {
    let mut r = ClaimRecord::new(id, statement);
    let mut fits = Vec::new();
    let mut margin = f64::INFINITY;
    let mut ok = true;
    for &alpha in &config.alpha_values {
        let pts = by_alpha(points, alpha);
        let ls: Vec<f64> = pts.iter().map(|p| p.l).collect();
        let vs: Vec<f64> = pts.iter().map(|p| pick(p)).collect();
        match fit_decay_exponent(&ls, &vs) {
            Ok(fit) => {
                let m = band_margin(fit.slope, band);
                margin = margin.min(m);
                ok &= m >= 0.0;
                let used = &ls[ls.len() - 3..];
                fits.push(
                    json!({"alpha": alpha, "L_fit": used, "slope": fit.slope, "residual": fit.residual, "values": vs}),
                );
            }
            Err(e) => {
                ok = false;
                r.flags.push(format!("alpha={alpha}: {e}"));
            }
        }
    }
    r.flags.extend(sweep_flags(&points.iter().collect::<Vec<_>>()));
    r.inputs = json!({"L": config.l_values, "alpha": config.alpha_values});
    r.values = json!({"fits": fits});
    r.target = json!({"slope_band": band});
    r.margin = margin;
    r.pass = ok && r.flags.is_empty();
    r
}

pub fn check_decay_unnormalized(config: &ClaimConfig, points: &[SweepPoint]) -> ClaimRecord {
    check_decay(
        "decay_exponent_unnormalized",
        "lambda_1^alpha(gamma_hat_L) = O(L^-2)",
        config,
        points,
        config.bands.lambda1_unnormalized,
        |p| p.lambda1_hat,
    )
}

pub fn check_decay_normalized(config: &ClaimConfig, points: &[SweepPoint]) -> ClaimRecord {
    check_decay(
        "decay_exponent_normalized",
        "lambda_1^alpha(gamma_L) = O(L^-1)",
        config,
        points,
        config.bands.lambda1_normalized,
        |p| p.lambda1_normalized,
    )
}

/// The three integrals for the cutoff sine on `gamma_hat_L`.
pub fn check_rayleigh_integrals(config: &ClaimConfig) -> ClaimRecord {
    let mut r = ClaimRecord::new(
        "rayleigh_integrals",
        "u = sin(pi t / L) 1_{|t|<=L}: int |grad u|^2 = 2 pi^3 / L = O(L^-1), int K u^2 = O(L^-2), int u^2 >= c L",
    );
    let tol = config.numerics.quad_rel_tol;
    let reports: Result<Vec<_>> = config
        .l_values
        .par_iter()
        .map(|&l| rayleigh_quotient(&ConformalCylinderMetric::stretched(l)?, 0.0, &cutoff_sine(l)?, tol))
        .collect();
    let reports = match reports {
        Ok(x) => x,
        Err(e) => return ClaimRecord::failed(&r.id, &r.anchor, &e),
    };
    let energy: Vec<f64> = reports.iter().map(|x| x.dirichlet_energy).collect();
    let curvature: Vec<f64> = reports.iter().map(|x| x.curvature_term).collect();
    let mass: Vec<f64> = reports.iter().map(|x| x.mass_term).collect();
    let energy_err: Vec<f64> = config
        .l_values
        .iter()
        .zip(&energy)
        .map(|(l, e)| {
            let exact = 2.0 * PI.powi(3) / l;
            ((e - exact) / exact).abs()
        })
        .collect();
    let floor = config.bands.mass_floor;
    let floor_slack: Vec<f64> = config.l_values.iter().zip(&mass).map(|(l, m)| m - floor * l).collect();

    let idx: Vec<usize> = (0..config.l_values.len())
        .filter(|&i| config.l_values[i] >= config.bands.rayleigh_fit_min_l)
        .collect();
    let pick = |v: &[f64]| idx.iter().map(|&i| v[i]).collect::<Vec<_>>();
    let ls = pick(&config.l_values);
    let mut margin = 1e-8 - energy_err.iter().copied().fold(0.0, f64::max);
    margin = margin.min(floor_slack.iter().copied().fold(f64::INFINITY, f64::min));
    let mut ok = margin >= 0.0;
    let mut fits = Map::new();
    for (name, series, band) in [
        ("dirichlet_energy", &energy, config.bands.dirichlet_energy),
        ("curvature_term", &curvature, config.bands.curvature_term),
        ("mass_term", &mass, config.bands.mass_term),
    ] {
        match fit_power_law(&ls, &pick(series)) {
            Ok(fit) => {
                let m = band_margin(fit.slope, band);
                ok &= m >= 0.0;
                margin = margin.min(m);
                fits.insert(
                    name.into(),
                    json!({"slope": fit.slope, "residual": fit.residual, "band": band}),
                );
            }
            Err(e) => {
                ok = false;
                r.flags.push(format!("{name}: {e}"));
            }
        }
    }
    r.inputs = json!({"L": config.l_values, "L_fit": ls});
    r.values = json!({
        "dirichlet_energy": energy,
        "dirichlet_energy_rel_error": energy_err,
        "curvature_term": curvature,
        "mass_term": mass,
        "fits": fits,
    });
    r.target = json!({"dirichlet_energy_rel_tol": 1e-8, "mass_floor": floor});
    r.margin = margin;
    r.pass = ok && r.flags.is_empty();
    r
}

/// The cutoff-sine quotient bounds `lambda_1^alpha(gamma_hat_L)` from above.
pub fn check_rayleigh_upper_bound(config: &ClaimConfig, points: &[SweepPoint]) -> ClaimRecord {
    let mut r = ClaimRecord::new(
        "rayleigh_upper_bound",
        "odd u is orthogonal to the even ground state, so R[u] >= lambda_1^alpha(gamma_hat_L)",
    );
    let tol = config.numerics.quad_rel_tol;
    let quotients: Result<Vec<f64>> = points
        .par_iter()
        .map(|p| {
            let m = ConformalCylinderMetric::stretched(p.l)?;
            Ok(upper_bound_lambda1_with(&m, p.alpha, &cutoff_sine(p.l)?, tol)?.quotient)
        })
        .collect();
    let quotients = match quotients {
        Ok(q) => q,
        Err(e) => return ClaimRecord::failed(&r.id, &r.anchor, &e),
    };
    let slack: Vec<f64> = quotients
        .iter()
        .zip(points)
        .map(|(q, p)| q - p.lambda1_hat + 1e-6)
        .collect();
    r.flags = sweep_flags(&points.iter().collect::<Vec<_>>());
    r.inputs = json!({"L": config.l_values, "alpha": config.alpha_values});
    r.values = json!({
        "points": points.iter().zip(&quotients).map(|(p, q)| json!({"L": p.l, "alpha": p.alpha, "quotient": q, "lambda1_hat": p.lambda1_hat})).collect::<Vec<_>>(),
    });
    r.target = json!({"quotient": ">= lambda1_hat - 1e-6"});
    r.margin = slack.iter().copied().fold(f64::INFINITY, f64::min);
    r.pass = r.margin >= 0.0 && r.flags.is_empty();
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Inequality {
    /// `m >= sqrt(1 / (2 lambda_1^alpha))`.
    Eq1,
    /// `m >= sqrt((2 + alpha) / (4 lambda_1^alpha))`.
    Eq3,
}

/// Looks for a swept `L` at which the right-hand side exceeds the mass, for every alpha.
pub fn check_counterexample(config: &ClaimConfig, points: &[SweepPoint], which: Inequality) -> ClaimRecord {
    let (id, statement) = match which {
        Inequality::Eq1 => (
            "counterexample_eq1",
            "m_ADM = 1 < sqrt(1 / (2 lambda_1^alpha(gamma_L))) for some L",
        ),
        Inequality::Eq3 => (
            "counterexample_eq3",
            "m_ADM = 1 < sqrt((2 + alpha) / (4 lambda_1^alpha(gamma_L))) for some L",
        ),
    };
    let mut r = ClaimRecord::new(id, statement);
    let mut per_alpha = Vec::new();
    let mut margin = f64::INFINITY;
    let mut ok = true;
    for &alpha in &config.alpha_values {
        let pts = by_alpha(points, alpha);
        let rhs: Vec<f64> = pts
            .iter()
            .map(|p| match which {
                Inequality::Eq1 => p.rhs_eq1,
                Inequality::Eq3 => p.rhs_eq3,
            })
            .collect();
        let witness = pts
            .iter()
            .zip(&rhs)
            .find(|(p, v)| **v > config.adm_mass && p.flags.is_empty())
            .map(|(p, _)| p.l);
        let best = rhs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        margin = margin.min(best - config.adm_mass);
        ok &= witness.is_some();
        per_alpha.push(
            json!({"alpha": alpha, "L": pts.iter().map(|p| p.l).collect::<Vec<_>>(), "rhs": rhs, "witness_L": witness}),
        );
    }
    r.flags = sweep_flags(&points.iter().collect::<Vec<_>>());
    r.inputs = json!({"L": config.l_values, "alpha": config.alpha_values, "adm_mass": config.adm_mass});
    r.values = json!({"per_alpha": per_alpha});
    r.target = json!({"rhs": "> adm_mass at some swept L"});
    r.margin = margin;
    r.pass = ok;
    r
}

/// An Eq1 violation implies an Eq3 violation when `alpha >= 0`.
pub fn check_eq1_implies_eq3(config: &ClaimConfig, points: &[SweepPoint]) -> ClaimRecord {
    let mut r = ClaimRecord::new("eq1_implies_eq3", "sqrt((2 + alpha)/4) >= sqrt(1/2) for alpha >= 0");
    let contradictions: Vec<Value> = points
        .iter()
        .filter(|p| p.rhs_eq1 > config.adm_mass && !(p.rhs_eq3 > config.adm_mass))
        .map(|p| json!({"L": p.l, "alpha": p.alpha}))
        .collect();
    let ratio_min = points
        .iter()
        .map(|p| p.rhs_eq3 - p.rhs_eq1)
        .fold(f64::INFINITY, f64::min);
    r.inputs = json!({"L": config.l_values, "alpha": config.alpha_values});
    r.values = json!({"contradictions": contradictions, "min_rhs_eq3_minus_rhs_eq1": ratio_min});
    r.target = json!({"contradictions": 0});
    r.margin = ratio_min;
    r.pass = contradictions.is_empty() && ratio_min >= 0.0;
    r
}

/// `lambda_1^alpha(gamma_L)` is nondecreasing in alpha since `K > 0`.
pub fn check_alpha_monotonicity(config: &ClaimConfig, points: &[SweepPoint]) -> ClaimRecord {
    let mut r = ClaimRecord::new("alpha_monotonicity", "alpha -> lambda_1^alpha nondecreasing when K > 0");
    let tol = 2.0 * config.numerics.eigen_abs_tol;
    let mut alphas = config.alpha_values.clone();
    alphas.sort_by(f64::total_cmp);
    let mut margin = f64::INFINITY;
    let mut violations = Vec::new();
    for &l in &config.l_values {
        let row: Vec<f64> = alphas
            .iter()
            .filter_map(|&a| points.iter().find(|p| p.l == l && p.alpha == a))
            .map(|p| p.lambda1_normalized)
            .collect();
        for w in row.windows(2) {
            let d = w[1] - w[0] + tol;
            margin = margin.min(d);
            if d < 0.0 {
                violations.push(json!({"L": l, "values": row}));
            }
        }
    }
    r.inputs = json!({"L": config.l_values, "alpha": alphas});
    r.values = json!({"violations": violations});
    r.target = json!({"increment": ">= -2 * eigen_abs_tol"});
    r.margin = if margin.is_finite() { margin } else { 0.0 };
    r.pass = violations.is_empty();
    r
}

/// Informational: `lambda_1^alpha(gamma_L)` decreasing along the sweep. Violations are
/// flagged, never failed.
pub fn check_lambda1_decreasing(config: &ClaimConfig, points: &[SweepPoint]) -> ClaimRecord {
    let mut r = ClaimRecord::new("lambda1_decreasing_in_L", "L -> lambda_1^alpha(gamma_L) decreasing");
    let mut margin = f64::INFINITY;
    for &alpha in &config.alpha_values {
        let pts = by_alpha(points, alpha);
        for w in pts.windows(2) {
            let d = w[0].lambda1_normalized - w[1].lambda1_normalized;
            margin = margin.min(d);
            if d <= 0.0 {
                r.flags
                    .push(format!("alpha={alpha}: increase from L={} to L={}", w[0].l, w[1].l));
            }
        }
    }
    r.inputs = json!({"L": config.l_values, "alpha": config.alpha_values});
    r.values = json!({"min_decrease": margin});
    r.target = json!({"kind": "informational"});
    r.margin = if margin.is_finite() { margin } else { 0.0 };
    r.pass = true;
    r
}

/// Every sweep spectrum has a clean gap `lambda_0 < lambda_1` and no numerical flags.
pub fn check_spectra_unflagged(config: &ClaimConfig, points: &[SweepPoint]) -> ClaimRecord {
    let mut r = ClaimRecord::new("spectral_gap", "lambda_0^alpha < lambda_1^alpha");
    let gaps: Vec<f64> = points
        .iter()
        .map(|p| p.lambda1_normalized - p.lambda0_normalized)
        .collect();
    r.flags = sweep_flags(&points.iter().collect::<Vec<_>>());
    r.inputs = json!({"L": config.l_values, "alpha": config.alpha_values});
    r.values = json!({"gaps": gaps});
    r.target = json!({"gap": "> 10 * eigen_abs_tol"});
    r.margin = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    r.pass = r.flags.is_empty() && r.margin > 0.0;
    r
}

/// Direct solve on `gamma_L` against the rescaled unnormalized solve.
pub fn check_rescaling(config: &ClaimConfig, points: &[SweepPoint]) -> ClaimRecord {
    let mut r = ClaimRecord::new("scale_covariance", "lambda(c g) = lambda(g) / c");
    let Some(p) = points.last() else {
        r.flags.push("empty sweep".into());
        return r;
    };
    let direct = ConformalCylinderMetric::stretched_normalized(p.l)
        .and_then(|m| global_spectrum(&m, p.alpha, 2, &config.numerics.spectrum()));
    let direct = match direct {
        Ok(s) => s,
        Err(e) => return ClaimRecord::failed(&r.id, &r.anchor, &e),
    };
    let tol = 2.0 * config.numerics.eigen_abs_tol;
    let d0 = (direct.lambda0 - p.lambda0_normalized).abs();
    let d1 = (direct.lambda1 - p.lambda1_normalized).abs();
    r.inputs = json!({"L": p.l, "alpha": p.alpha});
    r.values = json!({
        "direct": [direct.lambda0, direct.lambda1],
        "rescaled": [p.lambda0_normalized, p.lambda1_normalized],
        "abs_diff": [d0, d1],
    });
    r.target = json!({"abs_tol": tol});
    r.margin = tol - d0.max(d1);
    r.pass = r.margin >= 0.0;
    r
}

fn sector_eigenvalue(
    metric: &ConformalCylinderMetric,
    alpha: f64,
    half_width: f64,
    n: usize,
    index: usize,
    tol: f64,
) -> Result<f64> {
    let pencil = build_pencil(metric, &ModeProblem::new(0, alpha, half_width, n))?;
    let reduced = reduce_to_standard(&pencil)?;
    Ok(smallest_eigenvalues(&reduced.diag, &reduced.offdiag, index + 1, tol)[index])
}

/// Observed order `log2((l_h - l_{h/2}) / (l_{h/2} - l_{h/4}))` of the axisymmetric
/// `lambda_1` on grids with `n + 1 = 250, 500, 1000`.
pub fn observed_order(metric: &ConformalCylinderMetric, alpha: f64, half_width: f64) -> Result<(f64, [f64; 3])> {
    let mut v = [0.0; 3];
    for (slot, cells) in v.iter_mut().zip([250usize, 500, 1000]) {
        *slot = sector_eigenvalue(metric, alpha, half_width, cells - 1, 1, 1e-14)?;
    }
    Ok((((v[0] - v[1]) / (v[1] - v[2])).log2(), v))
}

pub fn check_convergence_order(config: &ClaimConfig) -> ClaimRecord {
    let mut r = ClaimRecord::new("convergence_order", "second-order central differences: p in [1.7, 2.3]");
    let cases = [
        (
            "round_sphere",
            ConformalCylinderMetric::round_sphere(),
            0.0,
            config.numerics.sphere_half_width,
        ),
        (
            "stretched_L5",
            ConformalCylinderMetric::stretched(5.0).expect("L = 5 is valid"),
            1.0,
            30.0,
        ),
    ];
    let mut rows = Vec::new();
    let mut margin = f64::INFINITY;
    for (name, metric, alpha, half) in cases {
        match observed_order(&metric, alpha, half) {
            Ok((p, v)) => {
                margin = margin.min(band_margin(p, [1.7, 2.3]));
                rows.push(json!({"case": name, "alpha": alpha, "T": half, "order": p, "values": v}));
            }
            Err(e) => return ClaimRecord::failed(&r.id, &r.anchor, &e),
        }
    }
    r.inputs = json!({"cells": [250, 500, 1000]});
    r.values = json!({"cases": rows});
    r.target = json!({"order_band": [1.7, 2.3]});
    r.margin = margin;
    r.pass = margin >= 0.0;
    r
}

/// `T -> T + 5` at fixed grid step changes nothing beyond the eigen tolerance.
pub fn check_truncation_insensitivity(config: &ClaimConfig) -> ClaimRecord {
    let mut r = ClaimRecord::new(
        "truncation_insensitivity",
        "eigenvalues independent of the truncation T >= L + 25",
    );
    let Some(&l) = config.l_values.iter().rev().find(|&&l| l <= 80.0) else {
        r.flags.push("no swept L <= 80".into());
        return r;
    };
    let n = config.numerics.n;
    let tight = config.numerics.eigen_abs_tol * 1e-3;
    type Row = (f64, [f64; 2], [f64; 2]);
    let rows: Result<Vec<Row>> = config
        .alpha_values
        .par_iter()
        .map(|&alpha| {
            let metric = ConformalCylinderMetric::stretched(l)?;
            let half = metric.default_half_width();
            let h = 2.0 * half / (n as f64 + 1.0);
            let longer = half + 5.0;
            let n_long = (2.0 * longer / h).round() as usize - 1;
            let solve = |half_width: f64, points: usize| {
                global_spectrum(
                    &metric,
                    alpha,
                    2,
                    &SpectrumNumerics {
                        n: points,
                        half_width: Some(half_width),
                        abs_tol: tight,
                        ..SpectrumNumerics::default()
                    },
                )
            };
            let a = solve(half, n)?;
            let b = solve(longer, n_long)?;
            Ok((alpha, [a.lambda0, a.lambda1], [b.lambda0, b.lambda1]))
        })
        .collect();
    let rows = match rows {
        Ok(x) => x,
        Err(e) => return ClaimRecord::failed(&r.id, &r.anchor, &e),
    };
    let mut worst = 0.0_f64;
    let mut out = Vec::new();
    for (alpha, a, b) in &rows {
        let d = (a[0] - b[0]).abs().max((a[1] - b[1]).abs());
        worst = worst.max(d);
        out.push(json!({"alpha": alpha, "T": [a, b], "max_abs_change": d}));
    }
    r.inputs = json!({"L": l, "alpha": config.alpha_values, "extra_width": 5.0});
    r.values = json!({"rows": out});
    r.target = json!({"max_abs_change": config.numerics.eigen_abs_tol});
    r.margin = config.numerics.eigen_abs_tol - worst;
    r.pass = r.margin > 0.0;
    r
}

/// Solving two extra Fourier modes past the cutoff leaves the values unchanged.
pub fn check_mode_cutoff(config: &ClaimConfig, points: &[SweepPoint]) -> ClaimRecord {
    let mut r = ClaimRecord::new(
        "mode_cutoff_soundness",
        "k^2 min(e^{2 psi}/c) + alpha min K bounds mode k from below",
    );
    let diffs: Result<Vec<f64>> = points
        .par_iter()
        .map(|p| {
            let extra = SpectrumNumerics {
                extra_modes: 2,
                ..config.numerics.spectrum()
            };
            let (s, factor) = stretched_spectrum_for_normalization(p.l, p.alpha, 2, &extra)?;
            Ok((s.lambda0 * factor - p.lambda0_normalized)
                .abs()
                .max((s.lambda1 * factor - p.lambda1_normalized).abs()))
        })
        .collect();
    let diffs = match diffs {
        Ok(d) => d,
        Err(e) => return ClaimRecord::failed(&r.id, &r.anchor, &e),
    };
    let worst = diffs.iter().copied().fold(0.0, f64::max);
    r.inputs = json!({"L": config.l_values, "alpha": config.alpha_values, "extra_modes": 2});
    r.values = json!({"max_abs_change": worst});
    r.target = json!({"max_abs_change": config.numerics.eigen_abs_tol});
    r.margin = config.numerics.eigen_abs_tol - worst;
    r.pass = r.margin >= 0.0;
    r
}

/// Runs every check. Deterministic for a given configuration apart from the timestamp.
pub fn full_report(config: &ClaimConfig, timestamp: Option<u64>) -> Result<ClaimReport> {
    config.validate()?;
    let points = run_sweep(&config.l_values, &config.alpha_values, &config.numerics)?;
    let claims = vec![
        check_curvature_positivity(config),
        check_curvature_identity(config),
        check_area_normalization(config),
        check_gauss_bonnet(config),
        check_ms_hypothesis(config),
        check_hersch_el_soufi_ilias(config, &points),
        check_decay_unnormalized(config, &points),
        check_decay_normalized(config, &points),
        check_rayleigh_integrals(config),
        check_rayleigh_upper_bound(config, &points),
        check_counterexample(config, &points, Inequality::Eq1),
        check_counterexample(config, &points, Inequality::Eq3),
        check_eq1_implies_eq3(config, &points),
        check_alpha_monotonicity(config, &points),
        check_lambda1_decreasing(config, &points),
        check_spectra_unflagged(config, &points),
        check_rescaling(config, &points),
        check_convergence_order(config),
        check_truncation_insensitivity(config),
        check_mode_cutoff(config, &points),
    ];
    Ok(ClaimReport {
        version: REPORT_VERSION,
        config: config.clone(),
        claims,
        environment: Environment {
            numerics: config.numerics.clone(),
            timestamp,
            toolkit_version: VERSION.to_string(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let ls = [5.0, 10.0, 20.0, 40.0];
        let vs: Vec<f64> = ls.iter().map(|l| 3.0 / (l * l)).collect();
        let fit = fit_decay_exponent(&ls, &vs).unwrap();
        assert!((fit.slope + 2.0).abs() < 1e-12);
        assert!(fit.residual < 1e-12);
        assert!((fit.intercept - 3.0_f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn decay_fit_uses_three_largest() {
        // first point is off the power law and must be ignored
        let ls = [1.0, 10.0, 20.0, 40.0];
        let vs = [100.0, 0.1, 0.05, 0.025];
        let fit = fit_decay_exponent(&ls, &vs).unwrap();
        assert!((fit.slope + 1.0).abs() < 1e-12);
    }

    #[test]
    fn fit_rejects_bad_input() {
        assert!(matches!(
            fit_decay_exponent(&[1.0, 2.0], &[1.0, 2.0]),
            Err(Error::TooFewPoints { .. })
        ));
        assert!(matches!(
            fit_decay_exponent(&[1.0, 2.0, 3.0], &[1.0, 0.0, 2.0]),
            Err(Error::NonPositiveValue { .. })
        ));
        assert!(matches!(
            fit_power_law(&[2.0, 2.0, 2.0], &[1.0, 1.0, 1.0]),
            Err(Error::TooFewPoints { .. })
        ));
    }

    #[test]
    fn config_validation() {
        let mut c = ClaimConfig::default();
        assert!(c.validate().is_ok());
        c.l_values = vec![2.0, 1.0];
        assert!(c.validate().is_err());
        c = ClaimConfig::default();
        c.alpha_values = vec![-1.0];
        assert!(c.validate().is_err());
        c = ClaimConfig::default();
        c.adm_mass = 0.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn config_json_round_trip() {
        let c = ClaimConfig::default();
        let text = serde_json::to_string(&c).unwrap();
        assert!(text.contains("\"L_values\""));
        let back: ClaimConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        let partial: ClaimConfig = serde_json::from_str(r#"{"L_values": [10, 20, 40]}"#).unwrap();
        assert_eq!(partial.l_values, vec![10.0, 20.0, 40.0]);
        assert_eq!(partial.alpha_values, vec![0.0, 1.0, 2.0]);
        assert!(serde_json::from_str::<ClaimConfig>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn round_sphere_control_for_eq1() {
        // lambda_1 = 2 gives sqrt(1/4) = 1/2 < 1: no violation
        let rhs = (1.0_f64 / (2.0 * 2.0)).sqrt();
        assert_eq!(rhs, 0.5);
    }

    #[test]
    fn csv_header_and_rows() {
        let numerics = ClaimNumerics {
            n: 400,
            ..ClaimNumerics::default()
        };
        let pts = run_sweep(&[5.0, 10.0], &[0.0, 1.0], &numerics).unwrap();
        let csv = sweep_csv(&pts);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], SWEEP_CSV_HEADER);
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("5.0000000000000000e+0,0.0000000000000000e+0,"));
        assert!(lines[4].starts_with("1.0000000000000000e+1,1.0000000000000000e+0,"));
        for p in &pts {
            // at alpha = 0 the two right-hand sides coincide
            if p.alpha == 0.0 {
                assert!((p.rhs_eq1 - p.rhs_eq3).abs() < 1e-15);
            }
        }
    }
}
