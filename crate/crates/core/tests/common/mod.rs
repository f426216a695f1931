#![allow(dead_code)]

use oblong::discretize::TridiagonalPencil;

pub type Dense = Vec<Vec<f64>>;

pub fn dense_from_tridiagonal(diag: &[f64], offdiag: &[f64]) -> Dense {
    let n = diag.len();
    let mut a = vec![vec![0.0; n]; n];
    for i in 0..n {
        a[i][i] = diag[i];
    }
    for (i, &e) in offdiag.iter().enumerate() {
        a[i][i + 1] = e;
        a[i + 1][i] = e;
    }
    a
}

/// Eigenvalues of a symmetric matrix by cyclic two-sided Jacobi, ascending.
///
/// Rotations stop once `|a_pq| <= eps sqrt(|a_pp a_qq|)`, which keeps small
/// eigenvalues of graded positive definite matrices accurate to relative precision.
pub fn jacobi_eigenvalues(mut a: Dense) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 || apq.abs() <= f64::EPSILON * (a[p][p] * a[q][q]).abs().sqrt() {
                    a[p][q] = 0.0;
                    a[q][p] = 0.0;
                    continue;
                }
                rotated = true;
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                let (upper, lower) = a.split_at_mut(q);
                for (apk, aqk) in upper[p].iter_mut().zip(lower[0].iter_mut()) {
                    let (x, y) = (*apk, *aqk);
                    *apk = c * x - s * y;
                    *aqk = s * x + c * y;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
            }
        }
        if !rotated {
            break;
        }
    }
    let mut d: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    d.sort_by(f64::total_cmp);
    d
}

/// Generalized eigenvalues of `A f = lambda W f` for a tridiagonal `A` and diagonal
/// `W`, from the dense matrix `W^{-1/2} A W^{-1/2} + shift I`.
pub fn pencil_eigenvalues(pencil: &TridiagonalPencil, shift: f64) -> Vec<f64> {
    let n = pencil.diag.len();
    let s: Vec<f64> = pencil.weight.iter().map(|w| 1.0 / w.sqrt()).collect();
    let mut a = vec![vec![0.0; n]; n];
    for i in 0..n {
        a[i][i] = pencil.diag[i] * s[i] * s[i] + shift;
    }
    for i in 0..n - 1 {
        let v = pencil.offdiag[i] * s[i] * s[i + 1];
        a[i][i + 1] = v;
        a[i + 1][i] = v;
    }
    jacobi_eigenvalues(a).into_iter().map(|x| x - shift).collect()
}

/// Eigenvalues of the Dirichlet second difference `tridiag(-1, 2, -1) / h^2`.
pub fn dirichlet_laplacian_eigenvalues(n: usize, h: f64) -> Vec<f64> {
    (1..=n)
        .map(|j| {
            let s = (j as f64 * std::f64::consts::PI / (2.0 * (n as f64 + 1.0))).sin();
            4.0 * s * s / (h * h)
        })
        .collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
