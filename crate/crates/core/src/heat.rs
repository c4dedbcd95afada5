//! Exact heat kernels `p_{u,v}(t) = [exp(-tL)]_{u,v}` and the relative mass
//! `r_{u,v}(t) = p_{u,v}(t) / p_{u,u}(t)` from a spectral decomposition.

use std::io::Write;

use crate::eigen::{symmetric_eigen, Matrix};
use crate::graph::WeightedGraph;
use crate::output::fmt17;
use crate::{Error, Result};

/// Largest graph decomposed densely.
pub const MAX_SPECTRAL_VERTICES: usize = 4096;

/// Probabilities this far outside `[0, 1]` are treated as roundoff and clamped.
pub const CLAMP_SLACK: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    /// Row `i` is the unit eigenvector for `eigenvalues[i]`.
    eigenvectors: Matrix,
    source: String,
}

impl SpectralDecomposition {
    /// Decomposes the Laplacian of a connected graph.
    pub fn new(graph: &WeightedGraph) -> Result<Self> {
        let n = graph.n();
        if n > MAX_SPECTRAL_VERTICES {
            return Err(Error::Size(format!(
                "{n} vertices exceeds the dense limit of {MAX_SPECTRAL_VERTICES}"
            )));
        }
        if !graph.is_connected() {
            return Err(Error::Disconnected);
        }
        let pairs = symmetric_eigen(&graph.laplacian())?;
        let dec = Self {
            eigenvalues: pairs.values,
            eigenvectors: pairs.vectors,
            source: graph.provenance().to_string(),
        };
        if dec.eigenvalues[0].abs() > 1e-10 {
            return Err(Error::Numerical(format!(
                "smallest Laplacian eigenvalue {} is not zero",
                dec.eigenvalues[0]
            )));
        }
        Ok(dec)
    }

    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, i: usize) -> &[f64] {
        self.eigenvectors.row(i)
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Spectral gap `lambda_2`.
    pub fn lambda2(&self) -> f64 {
        self.eigenvalues.get(1).copied().unwrap_or(0.0)
    }

    /// `max |L - sum_i lambda_i f_i f_i^T|`.
    pub fn reconstruction_residual(&self, laplacian: &Matrix) -> f64 {
        let n = self.n();
        let mut rec = Matrix::zeros(n);
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            let f = self.eigenvector(k);
            for i in 0..n {
                let s = lam * f[i];
                for (r, &fj) in rec.row_mut(i).iter_mut().zip(f) {
                    *r += s * fj;
                }
            }
        }
        rec.max_abs_diff(laplacian)
    }

    pub fn orthonormality_residual(&self) -> f64 {
        let gram = self.eigenvectors.matmul(&self.eigenvectors.transpose());
        gram.max_abs_diff(&Matrix::identity(self.n()))
    }

    fn check_vertex(&self, u: usize) -> Result<()> {
        if u >= self.n() {
            return Err(Error::Domain(format!("vertex {u} outside 0..{}", self.n())));
        }
        Ok(())
    }

    /// Unclamped spectral sum `sum_i exp(-lambda_i t) f_i(u) f_i(v)`.
    fn raw_kernel(&self, u: usize, v: usize, t: f64) -> f64 {
        self.eigenvalues
            .iter()
            .enumerate()
            .map(|(i, &lam)| {
                let f = self.eigenvector(i);
                (-lam * t).exp() * f[u] * f[v]
            })
            .sum()
    }

    /// `p_{u,v}(t)`, the probability that the walk started at `u` is at `v`
    /// at time `t`.
    pub fn transition_prob(&self, u: usize, v: usize, t: f64) -> Result<f64> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::Domain(format!("time must be finite and nonnegative, got {t}")));
        }
        if t == 0.0 {
            return Ok(if u == v { 1.0 } else { 0.0 });
        }
        // symmetric in (u, v) by construction: same terms, same order
        let (a, b) = if u <= v { (u, v) } else { (v, u) };
        clamp_probability(self.raw_kernel(a, b, t))
    }

    /// `r_{u,v}(t)`; `r_{u,v}(0)` is 0 for `u != v` and 1 for `u == v`.
    pub fn relative_mass(&self, u: usize, v: usize, t: f64) -> Result<f64> {
        if t == 0.0 {
            self.check_vertex(u)?;
            self.check_vertex(v)?;
            return Ok(if u == v { 1.0 } else { 0.0 });
        }
        let puv = self.transition_prob(u, v, t)?;
        let puu = self.transition_prob(u, u, t)?;
        if puu <= 0.0 {
            return Err(Error::Numerical(format!("p_uu({t}) = {puu} is not positive")));
        }
        Ok(puv / puu)
    }

    /// Full heat kernel `exp(-tL)`.
    pub fn kernel_matrix(&self, t: f64) -> Result<Matrix> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("time must be nonnegative, got {t}")));
        }
        let n = self.n();
        let mut scaled = self.eigenvectors.clone();
        for (i, &lam) in self.eigenvalues.iter().enumerate() {
            let c = (-lam * t).exp();
            scaled.row_mut(i).iter_mut().for_each(|x| *x *= c);
        }
        // H = V^T diag(e) V with eigenvectors as rows of V
        let vt = self.eigenvectors.transpose();
        let mut h = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = vt[(i, k)];
                for (dst, &b) in h.row_mut(i).iter_mut().zip(scaled.row(k)) {
                    *dst += a * b;
                }
            }
        }
        Ok(h)
    }

    pub fn sample_curve(
        &self,
        u: usize,
        v: usize,
        grid: &[f64],
        quantity: CurveQuantity,
    ) -> Result<CurveSamples> {
        validate_grid(grid, true)?;
        let values = grid
            .iter()
            .map(|&t| match quantity {
                CurveQuantity::RelativeMass => self.relative_mass(u, v, t),
                CurveQuantity::TransitionProb => self.transition_prob(u, v, t),
            })
            .collect::<Result<Vec<_>>>()?;
        CurveSamples::new(
            grid.to_vec(),
            values,
            CurveMeta {
                quantity: quantity.name().to_string(),
                graph: self.source.clone(),
                params: format!("u={u} v={v}"),
            },
        )
    }
}

fn clamp_probability(p: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else if (-CLAMP_SLACK..0.0).contains(&p) {
        Ok(0.0)
    } else if p > 1.0 && p <= 1.0 + CLAMP_SLACK {
        Ok(1.0)
    } else {
        Err(Error::Numerical(format!("probability {p} outside [0, 1]")))
    }
}

/// Checks that a time grid is nonempty, finite and strictly ascending.
pub fn validate_grid(grid: &[f64], allow_zero: bool) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Validation("time grid is empty".into()));
    }
    if grid.iter().any(|t| !t.is_finite() || *t < 0.0 || (!allow_zero && *t == 0.0)) {
        return Err(Error::Validation("time grid has invalid entries".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Validation("time grid is not strictly ascending".into()));
    }
    Ok(())
}

/// Evenly spaced grid `start, start+step, ...` up to `end` (inclusive, with
/// a half-step tolerance for roundoff).
pub fn uniform_grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(end >= start) {
        return Err(Error::Validation(format!("bad grid [{start}, {end}] step {step}")));
    }
    let count = ((end - start) / step + 0.5).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

/// `points` equally spaced times in `(0, end]`.
pub fn open_grid(end: f64, points: usize) -> Result<Vec<f64>> {
    if points == 0 || !(end > 0.0) {
        return Err(Error::Validation(format!("bad grid (0, {end}] with {points} points")));
    }
    Ok((1..=points).map(|i| end * i as f64 / points as f64).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveQuantity {
    RelativeMass,
    TransitionProb,
}

impl CurveQuantity {
    pub fn name(self) -> &'static str {
        match self {
            CurveQuantity::RelativeMass => "relative_mass",
            CurveQuantity::TransitionProb => "transition_prob",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveMeta {
    pub quantity: String,
    pub graph: String,
    pub params: String,
}

/// A sampled curve `t -> value`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSamples {
    grid: Vec<f64>,
    values: Vec<f64>,
    pub meta: CurveMeta,
}

impl CurveSamples {
    pub fn new(grid: Vec<f64>, values: Vec<f64>, meta: CurveMeta) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::Validation("grid and values differ in length".into()));
        }
        validate_grid(&grid, true)?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical("curve contains non-finite values".into()));
        }
        Ok(Self { grid, values, meta })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.iter().copied().zip(self.values.iter().copied())
    }

    /// Writes `t,value` rows in grid order.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "t,value")?;
        for (t, v) in self.iter() {
            writeln!(out, "{},{}", fmt17(t), fmt17(v))?;
        }
        Ok(())
    }
}
