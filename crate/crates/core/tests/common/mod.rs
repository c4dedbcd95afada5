//! Slow, independent reference computations shared by the integration tests.

#![allow(dead_code)]

use relmass::eigen::Matrix;

/// Cyclic Jacobi rotations on a dense symmetric matrix. Returns eigenvalues
/// (ascending) and the matching orthonormal eigenvectors as rows.
pub fn jacobi_eigen(a: &Matrix) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.n();
    assert!(n <= 128, "reference solver is for small matrices");
    let mut m: Vec<Vec<f64>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| m[i][j] * m[i][j]).sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    // columns of v are eigenvectors
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i][i].total_cmp(&m[j][j]));
    let values = order.iter().map(|&i| m[i][i]).collect();
    let vectors = order.iter().map(|&i| (0..n).map(|k| v[k][i]).collect()).collect();
    (values, vectors)
}

/// `p_{i,j}(t)` from a reference decomposition.
pub fn reference_prob(values: &[f64], vectors: &[Vec<f64>], i: usize, j: usize, t: f64) -> f64 {
    values.iter().zip(vectors).map(|(lambda, f)| (-lambda * t).exp() * f[i] * f[j]).sum()
}

/// Heat kernel `e^{-tL}` from the reference decomposition.
pub fn reference_kernel(laplacian: &Matrix, t: f64) -> Vec<Vec<f64>> {
    let (values, vectors) = jacobi_eigen(laplacian);
    let n = values.len();
    (0..n).map(|i| (0..n).map(|j| reference_prob(&values, &vectors, i, j, t)).collect()).collect()
}
