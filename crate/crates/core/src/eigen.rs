//! Dense symmetric eigensolver: Householder reduction to tridiagonal form
//! followed by the implicit-shift QL iteration.
//!
//! Both stages follow the classical tred2/tql2 recurrences, rearranged so that
//! every inner loop walks a contiguous row. Eigenvectors are returned as rows.

use std::ops::{Index, IndexMut};

use crate::{Error, Result};

/// Square row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Validation("matrix rows must all have length n".into()));
        }
        Ok(Self { n, data: rows.concat() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        let n = self.n;
        &mut self.data[i * n..(i + 1) * n]
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut t = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                t.data[j * n + i] = self.data[i * n + j];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                let orow = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol))
    }

    /// Two distinct rows, mutably. Requires `i < j`.
    fn rows_mut_pair(&mut self, i: usize, j: usize) -> (&mut [f64], &mut [f64]) {
        debug_assert!(i < j);
        let n = self.n;
        let (head, tail) = self.data.split_at_mut(j * n);
        (&mut head[i * n..(i + 1) * n], &mut tail[..n])
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// Eigenvalues in ascending order with orthonormal eigenvectors as the rows
/// of `vectors` (row `i` belongs to `values[i]`).
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

const MAX_QL_ITERATIONS: usize = 60;

pub fn symmetric_eigen(a: &Matrix) -> Result<EigenPairs> {
    let n = a.n();
    if n == 0 {
        return Ok(EigenPairs { values: Vec::new(), vectors: Matrix::zeros(0) });
    }
    if !a.is_symmetric(1e-12 * (1.0 + a.data.iter().fold(0.0f64, |m, x| m.max(x.abs())))) {
        return Err(Error::Validation("eigensolver input is not symmetric".into()));
    }
    let mut z = a.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut z, &mut d, &mut e);
    // QL rotates pairs of eigenvector columns; as rows they stay contiguous.
    let mut zt = z.transpose();
    tridiagonal_ql(&mut d, &mut e, &mut zt)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let values = order.iter().map(|&i| d[i]).collect();
    let mut vectors = Matrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.row_mut(dst).copy_from_slice(zt.row(src));
    }
    Ok(EigenPairs { values, vectors })
}

/// Householder reduction of the symmetric matrix `a` (lower triangle used).
/// On return `d` holds the diagonal, `e[1..]` the subdiagonal, and `a` the
/// accumulated orthogonal transform with the basis in its columns.
fn tridiagonalize(a: &mut Matrix, d: &mut [f64], e: &mut [f64]) {
    let n = a.n();
    let mut p = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = a.row(i)[..i].iter().map(|x| x.abs()).sum();
            if scale == 0.0 {
                e[i] = a[(i, l)];
            } else {
                {
                    let row = &mut a.row_mut(i)[..i];
                    for x in row.iter_mut() {
                        *x /= scale;
                        h += *x * *x;
                    }
                }
                let f = a[(i, l)];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[(i, l)] = f - g;

                // p = A u over the leading i x i block, lower triangle only
                p[..i].fill(0.0);
                {
                    let (upper, lower) = a.data.split_at(i * n);
                    let u = &lower[..i];
                    for j in 0..i {
                        let row_j = &upper[j * n..j * n + j + 1];
                        let uj = u[j];
                        let mut s = row_j[j] * uj;
                        for k in 0..j {
                            s += row_j[k] * u[k];
                            p[k] += row_j[k] * uj;
                        }
                        p[j] += s;
                    }
                }
                let mut f = 0.0;
                for j in 0..i {
                    let uj = a[(i, j)];
                    a[(j, i)] = uj / h;
                    e[j] = p[j] / h;
                    f += e[j] * uj;
                }
                let hh = f / (h + h);
                let (upper, lower) = a.data.split_at_mut(i * n);
                let u = &lower[..i];
                for j in 0..i {
                    let fj = u[j];
                    let gj = e[j] - hh * fj;
                    e[j] = gj;
                    let row_j = &mut upper[j * n..j * n + j + 1];
                    for k in 0..=j {
                        row_j[k] -= fj * e[k] + gj * u[k];
                    }
                }
            }
        } else {
            e[i] = a[(i, l)];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;

    let mut g = vec![0.0; n];
    for i in 0..n {
        if d[i] != 0.0 {
            // g_j = sum_k a[i][k] a[k][j];  a[k][j] -= g_j a[k][i]   (j, k < i)
            g[..i].fill(0.0);
            for k in 0..i {
                let aik = a[(i, k)];
                if aik != 0.0 {
                    let row_k = &a.row(k)[..i];
                    for (gj, &akj) in g[..i].iter_mut().zip(row_k) {
                        *gj += aik * akj;
                    }
                }
            }
            for k in 0..i {
                let aki = a[(k, i)];
                if aki != 0.0 {
                    let row_k = &mut a.row_mut(k)[..i];
                    for (akj, &gj) in row_k.iter_mut().zip(&g[..i]) {
                        *akj -= gj * aki;
                    }
                }
            }
        }
        d[i] = a[(i, i)];
        a[(i, i)] = 1.0;
        for j in 0..i {
            a[(j, i)] = 0.0;
            a[(i, j)] = 0.0;
        }
    }
}

/// Implicit-shift QL on the tridiagonal `(d, e)`; rotations are applied to
/// the rows of `zt`.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], zt: &mut Matrix) -> Result<()> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERATIONS {
                return Err(Error::Numerical(format!(
                    "QL iteration did not converge for eigenvalue {l}"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;

                let (zi, zi1) = zt.rows_mut_pair(i, i + 1);
                for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                    let f = *b;
                    *b = s * *a + c * f;
                    *a = c * *a - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(ep: &EigenPairs) -> Matrix {
        let n = ep.values.len();
        let mut out = Matrix::zeros(n);
        for (k, &lam) in ep.values.iter().enumerate() {
            let f = ep.vectors.row(k);
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] += lam * f[i] * f[j];
                }
            }
        }
        out
    }

    fn orthonormality_error(v: &Matrix) -> f64 {
        let n = v.n();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = v.row(i).iter().zip(v.row(j)).map(|(a, b)| a * b).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    #[test]
    fn two_by_two() {
        let a = Matrix::from_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
        let ep = symmetric_eigen(&a).unwrap();
        assert!(ep.values[0].abs() < 1e-15);
        assert!((ep.values[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn diagonal_and_trivial_sizes() {
        let a = Matrix::from_rows(&[vec![3.0, 0.0, 0.0], vec![0.0, -1.0, 0.0], vec![0.0, 0.0, 2.0]]).unwrap();
        let ep = symmetric_eigen(&a).unwrap();
        assert_eq!(ep.values, vec![-1.0, 2.0, 3.0]);
        let one = Matrix::from_rows(&[vec![5.0]]).unwrap();
        assert_eq!(symmetric_eigen(&one).unwrap().values, vec![5.0]);
        assert!(symmetric_eigen(&Matrix::zeros(0)).unwrap().values.is_empty());
    }

    #[test]
    fn rejects_asymmetric_input() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(symmetric_eigen(&a), Err(Error::Validation(_))));
    }

    #[test]
    fn reconstructs_pseudo_random_matrix() {
        // deterministic LCG fill; no dependency on the RNG used elsewhere
        let n = 57;
        let mut state: u64 = 0x2545F4914F6CDD1D;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let mut a = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let x = next();
                a[(i, j)] = x;
                a[(j, i)] = x;
            }
        }
        let ep = symmetric_eigen(&a).unwrap();
        assert!(ep.values.windows(2).all(|w| w[0] <= w[1]));
        assert!(reconstruct(&ep).max_abs_diff(&a) < 1e-12);
        assert!(orthonormality_error(&ep.vectors) < 1e-12);
    }

    #[test]
    fn handles_heavy_degeneracy() {
        // J - I on 20 vertices: eigenvalue 19 once, -1 nineteen times
        let n = 20;
        let mut a = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    a[(i, j)] = 1.0;
                }
            }
        }
        let ep = symmetric_eigen(&a).unwrap();
        assert!(ep.values[..19].iter().all(|&x| (x + 1.0).abs() < 1e-12));
        assert!((ep.values[19] - 19.0).abs() < 1e-12);
        assert!(orthonormality_error(&ep.vectors) < 1e-12);
        assert!(reconstruct(&ep).max_abs_diff(&a) < 1e-12);
    }
}
