mod common;

use common::{dirichlet_laplacian_eigenvalues, jacobi_eigenvalues, max_abs_diff, pencil_eigenvalues};
use oblong::discretize::{assemble_pencil, build_pencil, reduce_to_standard, BoundaryCondition, ModeProblem};
use oblong::eigen::{global_spectrum, smallest_eigenvalues, SpectrumNumerics};
use oblong::metric::ConformalCylinderMetric;

const TOL: f64 = 1e-9;

fn bisection(metric: &ConformalCylinderMetric, problem: &ModeProblem, count: usize) -> Vec<f64> {
    let reduced = reduce_to_standard(&build_pencil(metric, problem).unwrap()).unwrap();
    smallest_eigenvalues(&reduced.diag, &reduced.offdiag, count, 1e-13)
}

fn oracle(metric: &ConformalCylinderMetric, problem: &ModeProblem, count: usize) -> Vec<f64> {
    let pencil = build_pencil(metric, problem).unwrap();
    let mut v = pencil_eigenvalues(&pencil, 1.0);
    v.truncate(count);
    v
}

#[test]
fn jacobi_matches_closed_form_laplacian() {
    let n = 60;
    let h = 0.1;
    let diag = vec![2.0 / (h * h); n];
    let off = vec![-1.0 / (h * h); n - 1];
    let got = jacobi_eigenvalues(common::dense_from_tridiagonal(&diag, &off));
    let want = dirichlet_laplacian_eigenvalues(n, h);
    assert!(max_abs_diff(&got, &want) < 1e-10);
}

#[test]
fn bisection_matches_discrete_laplacian_exactly() {
    for &n in &[3usize, 17, 200] {
        let t = 1.5;
        let pencil = assemble_pencil(|_| 0.0, |_| 1.0, t, n, BoundaryCondition::Dirichlet).unwrap();
        let got = smallest_eigenvalues(&pencil.diag, &pencil.offdiag, n.min(10), 1e-13);
        let h = 2.0 * t / (n as f64 + 1.0);
        let want = &dirichlet_laplacian_eigenvalues(n, h)[..n.min(10)];
        assert!(max_abs_diff(&got, want) < TOL, "n={n}");
    }
}

#[test]
fn sphere_pencils_agree_with_dense_oracle() {
    let sphere = ConformalCylinderMetric::round_sphere();
    for k in 0..3 {
        for &alpha in &[0.0, 2.0] {
            let p = ModeProblem::new(k, alpha, 12.0, 200);
            let a = bisection(&sphere, &p, 6);
            let b = oracle(&sphere, &p, 6);
            assert!(max_abs_diff(&a, &b) < TOL, "k={k} alpha={alpha}: {a:?} vs {b:?}");
        }
    }
}

#[test]
fn stretched_pencils_agree_with_dense_oracle() {
    for &l in &[1.0, 5.0, 20.0] {
        let m = ConformalCylinderMetric::stretched(l).unwrap();
        for k in 0..3 {
            for &alpha in &[0.0, 1.0, 2.0] {
                let p = ModeProblem::new(k, alpha, l + 25.0, 199);
                let a = bisection(&m, &p, 5);
                let b = oracle(&m, &p, 5);
                assert!(max_abs_diff(&a, &b) < TOL, "L={l} k={k} alpha={alpha}: {a:?} vs {b:?}");
            }
        }
    }
}

#[test]
fn boundary_override_agrees_with_dense_oracle() {
    let m = ConformalCylinderMetric::stretched(2.0).unwrap();
    for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
        let p = ModeProblem::new(1, 1.0, 20.0, 150).with_bc(bc);
        assert!(max_abs_diff(&bisection(&m, &p, 4), &oracle(&m, &p, 4)) < TOL);
    }
}

#[test]
fn global_spectrum_matches_merged_dense_modes() {
    // independent merge of per-mode dense spectra with multiplicity two for k >= 1
    let m = ConformalCylinderMetric::stretched(5.0).unwrap();
    let numerics = SpectrumNumerics {
        n: 200,
        half_width: Some(30.0),
        abs_tol: 1e-12,
        k_max: Some(4),
        ..SpectrumNumerics::default()
    };
    let got = global_spectrum(&m, 1.0, 8, &numerics).unwrap().values();
    let mut all = Vec::new();
    for k in 0..=4u32 {
        let vals = oracle(&m, &ModeProblem::new(k, 1.0, 30.0, 200), 8);
        for v in vals {
            all.push(v);
            if k > 0 {
                all.push(v);
            }
        }
    }
    all.sort_by(f64::total_cmp);
    all.truncate(8);
    assert!(max_abs_diff(&got, &all) < TOL, "{got:?} vs {all:?}");
}
