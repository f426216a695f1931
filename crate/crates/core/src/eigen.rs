//! Sturm-sequence bisection for symmetric tridiagonal matrices, and assembly of the
//! global spectrum of `-Laplacian + alpha K` from its Fourier sectors.

use std::f64::consts::PI;

use serde::Serialize;

use crate::discretize::{build_pencil, reduce_to_standard, BoundaryCondition, ModeProblem};
use crate::error::{invalid, Error, Result};
use crate::metric::{area_closed_form, ConformalCylinderMetric};

/// Number of eigenvalues of the symmetric tridiagonal matrix strictly below `lambda`.
///
/// Counts negative pivots of the `LDL^T` factorization of `T - lambda I`. A pivot
/// smaller in magnitude than `pivmin = MIN_POSITIVE * max(1, max e_i^2)` is replaced
/// by `+pivmin`, a diagonal perturbation of that size; an eigenvalue exactly at
/// `lambda` is therefore not counted.
pub fn sturm_count(diag: &[f64], offdiag: &[f64], lambda: f64) -> usize {
    let n = diag.len();
    if n == 0 {
        return 0;
    }
    let emax = offdiag.iter().fold(0.0_f64, |m, e| m.max(e.abs()));
    let pivmin = f64::MIN_POSITIVE * emax.max(1.0) * emax.max(1.0);
    let pivmin = if pivmin.is_finite() { pivmin } else { f64::MIN_POSITIVE };

    let mut count = 0;
    let mut q = diag[0] - lambda;
    if q.abs() < pivmin {
        q = pivmin;
    }
    if q < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let e = offdiag[i - 1];
        // e * (e / q) instead of e^2 / q keeps graded matrices from overflowing
        q = (diag[i] - lambda) - e * (e / q);
        if q.abs() < pivmin || q.is_nan() {
            q = pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Gershgorin interval containing the whole spectrum.
pub fn gershgorin_bounds(diag: &[f64], offdiag: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let left = if i > 0 { offdiag[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { offdiag[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    (lo, hi)
}

/// The `count` smallest eigenvalues in ascending order, each the midpoint of a
/// bisection bracket of width at most `abs_tol` (or as narrow as floating point
/// allows).
pub fn smallest_eigenvalues(diag: &[f64], offdiag: &[f64], count: usize, abs_tol: f64) -> Vec<f64> {
    let n = diag.len();
    let count = count.min(n);
    if count == 0 {
        return Vec::new();
    }
    let (gl, gu) = gershgorin_bounds(diag, offdiag);
    let pad = 2.0 * f64::EPSILON * gl.abs().max(gu.abs()) + f64::MIN_POSITIVE;
    let (gl, gu) = (gl - pad, gu + pad);

    let mut out = Vec::with_capacity(count);
    let mut floor = gl;
    for j in 0..count {
        let mut lo = floor;
        let mut hi = gu;
        while hi - lo > abs_tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if sturm_count(diag, offdiag, mid) <= j {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        floor = lo;
        out.push(0.5 * (lo + hi));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// One eigenvalue of the surface operator, labelled by its Fourier sector.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub value: f64,
    pub k: u32,
    /// 1 for `k = 0`, 2 for `k >= 1` (`cos k theta` and `sin k theta`).
    pub multiplicity: u32,
    /// Position within the mode-`k` spectrum.
    pub sector_index: usize,
    /// Parity in `t` of the eigenfunction, for metrics even in `t`. The `j`-th
    /// eigenvector of a reflection-symmetric Jacobi matrix has parity `(-1)^j`.
    pub parity: Option<Parity>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpectrumFlag {
    /// `lambda1 - lambda0` is below ten times the eigen tolerance.
    DegenerateGap { gap: f64 },
    /// The truncation half-width is shorter than `L + 10`.
    ShortTruncation { half_width: f64, recommended: f64 },
    /// The lowest eigenvalue does not come from the axisymmetric even sector.
    GroundStateNotAxisymmetric { k: u32 },
}

/// Grid and tolerance settings for [`global_spectrum`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumNumerics {
    /// Interior grid points per mode.
    pub n: usize,
    /// Truncation half-width; `None` uses the metric default.
    pub half_width: Option<f64>,
    /// Boundary condition override; `None` uses the per-mode default.
    pub bc: Option<BoundaryCondition>,
    pub abs_tol: f64,
    /// Solve exactly the modes `0..=k_max` instead of using the cutoff bound.
    pub k_max: Option<u32>,
    /// Modes to solve past the point where the cutoff bound first triggers.
    pub extra_modes: u32,
}

impl Default for SpectrumNumerics {
    fn default() -> Self {
        Self {
            n: 4000,
            half_width: None,
            bc: None,
            abs_tol: 1e-8,
            k_max: None,
            extra_modes: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModeRecord {
    pub k: u32,
    pub bc: BoundaryCondition,
    pub solved: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumericsUsed {
    pub half_width: f64,
    pub n: usize,
    pub abs_tol: f64,
    pub modes: Vec<ModeRecord>,
    /// First mode excluded by the cutoff bound (`None` with an explicit `k_max`).
    pub cutoff_mode: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumResult {
    /// Ascending by `(value, k, sector_index)`; multiplicities cover at least the
    /// requested number of values.
    pub entries: Vec<SpectrumEntry>,
    pub requested: usize,
    pub lambda0: f64,
    /// Second value of the spectrum counted with multiplicity.
    pub lambda1: f64,
    pub numerics: NumericsUsed,
    pub flags: Vec<SpectrumFlag>,
}

impl SpectrumResult {
    /// The requested values, expanded by multiplicity.
    pub fn values(&self) -> Vec<f64> {
        self.expanded().into_iter().map(|e| e.value).collect()
    }

    /// The requested entries, one per value counted with multiplicity.
    pub fn expanded(&self) -> Vec<&SpectrumEntry> {
        self.entries
            .iter()
            .flat_map(|e| std::iter::repeat_n(e, e.multiplicity as usize))
            .take(self.requested)
            .collect()
    }

    pub fn is_flagged(&self) -> bool {
        !self.flags.is_empty()
    }

    pub fn ground_entry(&self) -> &SpectrumEntry {
        &self.entries[0]
    }
}

fn nth_with_multiplicity(sorted: &[SpectrumEntry], index: usize) -> Option<f64> {
    let mut seen = 0usize;
    for e in sorted {
        seen += e.multiplicity as usize;
        if seen > index {
            return Some(e.value);
        }
    }
    None
}

fn sort_entries(entries: &mut [SpectrumEntry]) {
    entries.sort_by(|a, b| {
        a.value
            .total_cmp(&b.value)
            .then(a.k.cmp(&b.k))
            .then(a.sector_index.cmp(&b.sector_index))
    });
}

/// Eigenvalues of `-Laplacian + alpha K` on `metric`, merged over Fourier modes.
///
/// Without an explicit `k_max`, modes are solved in order until the first `k` whose
/// lower bound `k^2 min(exp(2 psi)/c) + alpha min K` exceeds the current
/// `num_values`-th smallest candidate; this bound holds for the discrete problem
/// as well and needs `alpha >= 0` and `K > 0`.
///
/// At least two values are always computed so that `lambda1` is defined.
pub fn global_spectrum(
    metric: &ConformalCylinderMetric,
    alpha: f64,
    num_values: usize,
    numerics: &SpectrumNumerics,
) -> Result<SpectrumResult> {
    if num_values == 0 {
        return Err(invalid("num_values", "must be at least 1"));
    }
    if !alpha.is_finite() {
        return Err(invalid("alpha", "must be finite"));
    }
    if !(numerics.abs_tol > 0.0) {
        return Err(invalid("abs_tol", "must be positive"));
    }
    let target = num_values.max(2);
    if numerics.n < target {
        return Err(invalid(
            "n",
            format!("grid of {} points cannot supply {target} values", numerics.n),
        ));
    }
    let bounds = match numerics.k_max {
        Some(_) => None,
        None => {
            if alpha < 0.0 {
                return Err(Error::CutoffUnavailable("the cutoff bound requires alpha >= 0"));
            }
            let b = metric
                .mode_bounds()
                .ok_or(Error::CutoffUnavailable("metric provides no lower bounds"))?;
            if !(b.min_inverse_weight > 0.0) || (alpha > 0.0 && !(b.min_curvature > 0.0)) {
                return Err(Error::CutoffUnavailable("lower bounds are not positive"));
            }
            Some(b)
        }
    };
    let half_width = numerics.half_width.unwrap_or_else(|| metric.default_half_width());
    let even = metric.is_even();

    let mut entries: Vec<SpectrumEntry> = Vec::new();
    let mut modes = Vec::new();
    let mut cutoff_mode = None;
    let mut extra_left = numerics.extra_modes;
    let mut k: u32 = 0;
    loop {
        if let Some(k_max) = numerics.k_max {
            if k > k_max {
                break;
            }
        } else if k > 0 {
            let b = bounds.expect("bounds exist without k_max");
            let kf = k as f64;
            let lower = kf * kf * b.min_inverse_weight + alpha * b.min_curvature;
            if let Some(threshold) = nth_with_multiplicity(&entries, target - 1) {
                if lower > threshold {
                    if cutoff_mode.is_none() {
                        cutoff_mode = Some(k);
                    }
                    if extra_left == 0 {
                        break;
                    }
                    extra_left -= 1;
                }
            }
        }

        let mut problem = ModeProblem::new(k, alpha, half_width, numerics.n);
        if let Some(bc) = numerics.bc {
            problem = problem.with_bc(bc);
        }
        let pencil = build_pencil(metric, &problem)?;
        let reduced = reduce_to_standard(&pencil)?;
        let wanted = if k == 0 { target } else { target.div_ceil(2) };
        let values = smallest_eigenvalues(&reduced.diag, &reduced.offdiag, wanted, numerics.abs_tol);
        modes.push(ModeRecord {
            k,
            bc: problem.bc,
            solved: values.len(),
        });
        entries.extend(values.into_iter().enumerate().map(|(j, value)| SpectrumEntry {
            value,
            k,
            multiplicity: if k == 0 { 1 } else { 2 },
            sector_index: j,
            parity: even.then_some(if j % 2 == 0 { Parity::Even } else { Parity::Odd }),
        }));
        sort_entries(&mut entries);
        k += 1;
    }

    // keep just enough entries to cover `target` values
    let mut seen = 0usize;
    let keep = entries
        .iter()
        .position(|e| {
            seen += e.multiplicity as usize;
            seen >= target
        })
        .map_or(entries.len(), |p| p + 1);
    entries.truncate(keep);

    let lambda0 = nth_with_multiplicity(&entries, 0).ok_or_else(|| invalid("spectrum", "no eigenvalues"))?;
    let lambda1 =
        nth_with_multiplicity(&entries, 1).ok_or_else(|| invalid("spectrum", "fewer than two eigenvalues"))?;

    let mut flags = Vec::new();
    let gap = lambda1 - lambda0;
    if gap < 10.0 * numerics.abs_tol {
        flags.push(SpectrumFlag::DegenerateGap { gap });
    }
    if let Some(l) = metric.half_length() {
        if half_width < l + 10.0 {
            flags.push(SpectrumFlag::ShortTruncation {
                half_width,
                recommended: l + 25.0,
            });
        }
    }
    let ground = &entries[0];
    if ground.k != 0 || (even && ground.parity != Some(Parity::Even)) {
        flags.push(SpectrumFlag::GroundStateNotAxisymmetric { k: ground.k });
    }

    Ok(SpectrumResult {
        entries,
        requested: num_values,
        lambda0,
        lambda1,
        numerics: NumericsUsed {
            half_width,
            n: numerics.n,
            abs_tol: numerics.abs_tol,
            modes,
            cutoff_mode,
        },
        flags,
    })
}

/// The unscaled spectrum of the stretched metric solved so that rescaling to area
/// `4 pi` keeps the result within `numerics.abs_tol`.
pub fn stretched_spectrum_for_normalization(
    half_length: f64,
    alpha: f64,
    num_values: usize,
    numerics: &SpectrumNumerics,
) -> Result<(SpectrumResult, f64)> {
    let metric = ConformalCylinderMetric::stretched(half_length)?;
    // lambda(c g) = lambda(g) / c with c = 4 pi / area
    let factor = area_closed_form(half_length) / (4.0 * PI);
    let tightened = SpectrumNumerics {
        abs_tol: numerics.abs_tol / factor.max(1.0),
        ..numerics.clone()
    };
    Ok((global_spectrum(&metric, alpha, num_values, &tightened)?, factor))
}

/// `lambda_1^alpha` of the area-`4 pi` stretched metric, obtained from the unscaled
/// metric through `lambda(c g) = lambda(g) / c`.
pub fn lambda1_normalized(half_length: f64, alpha: f64, numerics: &SpectrumNumerics) -> Result<f64> {
    if !(half_length >= 1.0) {
        return Err(invalid(
            "L",
            format!("normalized family needs L >= 1, got {half_length}"),
        ));
    }
    let (spectrum, factor) = stretched_spectrum_for_normalization(half_length, alpha, 2, numerics)?;
    Ok(spectrum.lambda1 * factor)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_by_three_laplacian() {
        let d = [2.0, 2.0, 2.0];
        let e = [-1.0, -1.0];
        assert_eq!(sturm_count(&d, &e, 2.0), 1);
        assert_eq!(sturm_count(&d, &e, 0.5), 0);
        assert_eq!(sturm_count(&d, &e, 0.6), 1);
        let l = smallest_eigenvalues(&d, &e, 3, 1e-12);
        let s = 2.0_f64.sqrt();
        for (got, want) in l.iter().zip([2.0 - s, 2.0, 2.0 + s]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn count_outside_gershgorin() {
        let d = [1.0, -3.0, 4.0, 0.5];
        let e = [0.7, -2.0, 1.1];
        let (lo, hi) = gershgorin_bounds(&d, &e);
        assert_eq!(sturm_count(&d, &e, lo - 1e-9), 0);
        assert_eq!(sturm_count(&d, &e, hi + 1e-9), 4);
    }

    #[test]
    fn toeplitz_formula() {
        let n = 40;
        let (a, b) = (3.0, -1.25);
        let d = vec![a; n];
        let e = vec![b; n - 1];
        let l = smallest_eigenvalues(&d, &e, n, 1e-11);
        let mut exact: Vec<f64> = (1..=n)
            .map(|j| a + 2.0 * b * (j as f64 * PI / (n as f64 + 1.0)).cos())
            .collect();
        exact.sort_by(f64::total_cmp);
        for (g, w) in l.iter().zip(&exact) {
            assert!((g - w).abs() < 1e-11);
        }
    }

    #[test]
    fn positive_definite_gives_positive() {
        let m = ConformalCylinderMetric::stretched(3.0).unwrap();
        let p = build_pencil(&m, &ModeProblem::new(1, 1.0, 28.0, 300)).unwrap();
        let r = reduce_to_standard(&p).unwrap();
        assert!(smallest_eigenvalues(&r.diag, &r.offdiag, 1, 1e-10)[0] > 0.0);
    }

    fn sphere_numerics() -> SpectrumNumerics {
        SpectrumNumerics {
            half_width: Some(12.0),
            abs_tol: 1e-10,
            ..SpectrumNumerics::default()
        }
    }

    #[test]
    fn round_sphere_spectrum() {
        let m = ConformalCylinderMetric::round_sphere();
        let s = global_spectrum(&m, 0.0, 9, &sphere_numerics()).unwrap();
        let expected = [0.0, 2.0, 2.0, 2.0, 6.0, 6.0, 6.0, 6.0, 6.0];
        let got = s.values();
        assert_eq!(got.len(), 9);
        for (g, w) in got.iter().zip(expected) {
            assert!((g - w).abs() < 1e-4, "{got:?}");
        }
        assert_eq!(s.ground_entry().k, 0);
        assert!(s.flags.is_empty());
        assert_eq!(s.numerics.cutoff_mode, Some(3));
    }

    #[test]
    fn round_sphere_shift_by_alpha() {
        let m = ConformalCylinderMetric::round_sphere();
        let base = global_spectrum(&m, 0.0, 4, &sphere_numerics()).unwrap().values();
        let shifted = global_spectrum(&m, 2.0, 4, &sphere_numerics()).unwrap().values();
        for (b, s) in base.iter().zip(&shifted) {
            assert!((s - b - 2.0).abs() < 1e-9);
        }
        for (s, w) in shifted.iter().zip([2.0, 4.0, 4.0, 4.0]) {
            assert!((s - w).abs() < 1e-4);
        }
    }

    #[test]
    fn single_value_at_alpha_zero_is_zero() {
        let m = ConformalCylinderMetric::stretched(10.0).unwrap();
        let s = global_spectrum(&m, 0.0, 1, &SpectrumNumerics::default()).unwrap();
        assert_eq!(s.values().len(), 1);
        assert!(s.values()[0].abs() < 1e-6);
        // lambda1 sits in the odd axisymmetric sector
        let s = global_spectrum(&m, 0.0, 2, &SpectrumNumerics::default()).unwrap();
        let second = s.expanded()[1];
        assert_eq!((second.k, second.parity), (0, Some(Parity::Odd)));
        assert!(s.lambda1 > 0.0);
    }

    #[test]
    fn negative_alpha_needs_k_max() {
        let m = ConformalCylinderMetric::round_sphere();
        let err = global_spectrum(&m, -1.0, 2, &sphere_numerics()).unwrap_err();
        assert!(matches!(err, Error::CutoffUnavailable(_)));
        let explicit = SpectrumNumerics {
            k_max: Some(2),
            ..sphere_numerics()
        };
        let s = global_spectrum(&m, -1.0, 4, &explicit).unwrap();
        assert!((s.lambda0 + 1.0).abs() < 1e-4);
        assert!((s.lambda1 - 1.0).abs() < 1e-4);
    }

    #[test]
    fn short_truncation_is_flagged() {
        let m = ConformalCylinderMetric::stretched(10.0).unwrap();
        let numerics = SpectrumNumerics {
            half_width: Some(15.0),
            n: 500,
            ..SpectrumNumerics::default()
        };
        let s = global_spectrum(&m, 0.0, 2, &numerics).unwrap();
        assert!(s
            .flags
            .iter()
            .any(|f| matches!(f, SpectrumFlag::ShortTruncation { .. })));
    }

    #[test]
    fn normalized_routes_agree() {
        let numerics = SpectrumNumerics {
            n: 1500,
            ..SpectrumNumerics::default()
        };
        for (l, alpha) in [(4.0, 0.0), (12.0, 1.0)] {
            let via_rescale = lambda1_normalized(l, alpha, &numerics).unwrap();
            let metric = ConformalCylinderMetric::stretched_normalized(l).unwrap();
            let direct = global_spectrum(&metric, alpha, 2, &numerics).unwrap().lambda1;
            assert!(
                (via_rescale - direct).abs() < 2.0 * numerics.abs_tol,
                "{via_rescale} vs {direct}"
            );
        }
        assert!(lambda1_normalized(0.5, 0.0, &numerics).is_err());
    }
}
