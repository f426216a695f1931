mod common;

use std::f64::consts::PI;

use common::{dense_from_tridiagonal, jacobi_eigenvalues};
use oblong::claims::fit_power_law;
use oblong::discretize::{build_pencil, reduce_to_standard, ModeProblem};
use oblong::eigen::{gershgorin_bounds, global_spectrum, smallest_eigenvalues, sturm_count, SpectrumNumerics};
use oblong::format::sig17;
use oblong::metric::{area_closed_form, area_remainder, area_remainder_coefficient, ConformalCylinderMetric};
use proptest::prelude::*;

fn tridiagonal(max_n: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (3..max_n).prop_flat_map(|n| {
        (
            prop::collection::vec(-10.0..10.0f64, n),
            prop::collection::vec(-5.0..5.0f64, n - 1),
        )
    })
}

fn small_numerics() -> SpectrumNumerics {
    SpectrumNumerics {
        n: 300,
        abs_tol: 1e-11,
        ..SpectrumNumerics::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sturm_count_matches_dense_count((d, e) in tridiagonal(30), x in -20.0..20.0f64) {
        let eig = jacobi_eigenvalues(dense_from_tridiagonal(&d, &e));
        // skip probes sitting on an eigenvalue
        prop_assume!(eig.iter().all(|v| (v - x).abs() > 1e-9));
        let below = eig.iter().filter(|&&v| v < x).count();
        prop_assert_eq!(sturm_count(&d, &e, x), below);
    }

    #[test]
    fn sturm_count_is_monotone((d, e) in tridiagonal(40), a in -30.0..30.0f64, b in -30.0..30.0f64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(sturm_count(&d, &e, lo) <= sturm_count(&d, &e, hi));
    }

    #[test]
    fn bisection_is_sorted_bounded_and_matches_dense((d, e) in tridiagonal(30)) {
        let n = d.len();
        let got = smallest_eigenvalues(&d, &e, n, 1e-12);
        let (lo, hi) = gershgorin_bounds(&d, &e);
        prop_assert!(got.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(got.iter().all(|v| *v >= lo - 1e-12 && *v <= hi + 1e-12));
        let want = jacobi_eigenvalues(dense_from_tridiagonal(&d, &e));
        for (g, w) in got.iter().zip(&want) {
            prop_assert!((g - w).abs() < 1e-9, "{} vs {}", g, w);
        }
    }

    #[test]
    fn stretched_profile_is_even_and_positive(l in 0.5..100.0f64, t in -200.0..200.0f64) {
        let m = ConformalCylinderMetric::stretched(l).unwrap();
        prop_assert_eq!(m.psi(t), m.psi(-t));
        prop_assert_eq!(m.psi_second(t), m.psi_second(-t));
        prop_assert!(m.gauss_curvature(t) > 0.0);
        prop_assert!(m.conformal_weight(t) > 0.0);
        prop_assert!(m.psi_prime(t).abs() <= 1.0);
    }

    #[test]
    fn curvature_scales_inversely(l in 1.0..50.0f64, c in 0.01..100.0f64, t in -80.0..80.0f64) {
        let m = ConformalCylinderMetric::stretched(l).unwrap();
        let s = m.clone().with_scale(c).unwrap();
        let rel = (s.gauss_curvature(t) * c - m.gauss_curvature(t)).abs() / m.gauss_curvature(t);
        prop_assert!(rel < 1e-14);
        let rel_w = (s.conformal_weight(t) - c * m.conformal_weight(t)).abs() / (c * m.conformal_weight(t));
        prop_assert!(rel_w < 1e-14);
    }

    #[test]
    fn area_remainder_stays_below_four(l in 0.46..400.0f64) {
        let c = area_remainder_coefficient(l);
        prop_assert!(c > 0.0 && c < 4.0, "C({}) = {}", l, c);
        let direct = area_closed_form(l) - 4.0 * PI * (l - 1.0);
        prop_assert!((direct - area_remainder(l)).abs() <= 1e-14 * area_closed_form(l).max(1.0));
    }

    #[test]
    fn power_law_fit_recovers_exponent(p in -3.0..3.0f64, a in 0.1..10.0f64) {
        let ls = [3.0, 7.0, 19.0, 50.0];
        let vs: Vec<f64> = ls.iter().map(|l: &f64| a * l.powf(p)).collect();
        let fit = fit_power_law(&ls, &vs).unwrap();
        prop_assert!((fit.slope - p).abs() < 1e-10);
        prop_assert!(fit.residual < 1e-10);
    }

    #[test]
    fn sig17_round_trips(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        let s = sig17(x);
        prop_assert_eq!(s.parse::<f64>().unwrap(), x);
        prop_assert!(s.contains("e+") || s.contains("e-"));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn spectrum_scales_inversely(l in 1.0..30.0f64, c in 0.1..10.0f64, alpha in 0.0..2.0f64) {
        let m = ConformalCylinderMetric::stretched(l).unwrap();
        let numerics = SpectrumNumerics { half_width: Some(l + 25.0), ..small_numerics() };
        let base = global_spectrum(&m, alpha, 4, &numerics).unwrap();
        let scaled = global_spectrum(&m.with_scale(c).unwrap(), alpha, 4, &numerics).unwrap();
        for (a, b) in base.values().iter().zip(scaled.values()) {
            prop_assert!((a / c - b).abs() < 1e-9 * (1.0 + a / c), "{} vs {}", a / c, b);
        }
    }

    #[test]
    fn spectrum_is_monotone_in_alpha(l in 1.0..40.0f64, a1 in 0.0..3.0f64, da in 0.0..3.0f64) {
        let m = ConformalCylinderMetric::stretched(l).unwrap();
        let lo = global_spectrum(&m, a1, 4, &small_numerics()).unwrap().values();
        let hi = global_spectrum(&m, a1 + da, 4, &small_numerics()).unwrap().values();
        for (x, y) in lo.iter().zip(&hi) {
            prop_assert!(y + 1e-10 >= *x);
        }
    }

    #[test]
    fn modes_increase_with_k(l in 1.0..40.0f64, alpha in 0.0..2.0f64, k in 0u32..5) {
        let m = ConformalCylinderMetric::stretched(l).unwrap();
        let eig = |k| {
            let r = reduce_to_standard(&build_pencil(&m, &ModeProblem::new(k, alpha, l + 25.0, 300)).unwrap()).unwrap();
            smallest_eigenvalues(&r.diag, &r.offdiag, 1, 1e-12)[0]
        };
        prop_assert!(eig(k + 1) > eig(k));
    }

    #[test]
    fn ground_state_is_axisymmetric_and_even(l in 1.0..60.0f64, alpha in 0.0..3.0f64) {
        let m = ConformalCylinderMetric::stretched(l).unwrap();
        let s = global_spectrum(&m, alpha, 3, &small_numerics()).unwrap();
        let g = s.ground_entry();
        prop_assert_eq!(g.k, 0);
        prop_assert_eq!(g.sector_index, 0);
        prop_assert!(s.lambda0 <= s.lambda1);
    }
}
