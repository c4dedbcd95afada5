//! Closed forms for the walk on the hypercube `Q_d` (edge weight `1/d`).
//!
//! Each coordinate flips at rate `1/d`, so the return probability factorises
//! over coordinates:
//!
//! ```text
//! P[X_t = 0] = ((1 + exp(-2t/d)) / 2)^d
//! ```
//!
//! `C_d(t)` is the expected time spent at the origin up to `t`, conditioned on
//! being back at the origin at `t`. Writing the conditional occupation density
//! through the Markov property gives `C_d(t) = int_0^t h_d(t,s)^d ds` with
//!
//! ```text
//! h_d(t,s) = (1 + e^{-2s/d})(1 + e^{-2(t-s)/d}) / (2 (1 + e^{-2t/d}))
//! ```

use crate::quad::adaptive_simpson;
use crate::scan::{find_decreasing_pair, Witness};
use crate::{Error, Result};

/// Largest dimension evaluated through the binomial double sum.
pub const MAX_CLOSED_FORM_DIM: u32 = 40;
/// Default absolute tolerance of the quadrature route.
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;
/// Default drop required before a decrease of `C_d` counts as real.
pub const DEFAULT_WITNESS_MARGIN: f64 = 1e-3;

fn check_dim(d: u32) -> Result<()> {
    if d == 0 {
        return Err(Error::Domain("hypercube dimension must be at least 1".into()));
    }
    Ok(())
}

fn check_time(t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Domain(format!("time must be finite and nonnegative, got {t}")));
    }
    Ok(())
}

/// `P[X_t = 0]` for the walk on `Q_d` started at the origin.
pub fn return_prob(d: u32, t: f64) -> Result<f64> {
    check_dim(d)?;
    check_time(t)?;
    Ok(return_prob_unchecked(d, t))
}

fn return_prob_unchecked(d: u32, t: f64) -> f64 {
    (0.5 * (1.0 + (-2.0 * t / d as f64).exp())).powi(d as i32)
}

/// Probability of being at the antipode `1...1` at time `t`.
pub fn antipode_prob(d: u32, t: f64) -> Result<f64> {
    check_dim(d)?;
    check_time(t)?;
    Ok((0.5 * -(-2.0 * t / d as f64).exp_m1()).powi(d as i32))
}

/// The per-coordinate factor `h_d(t, s)` of the conditional occupation density.
pub fn h_d(d: u32, t: f64, s: f64) -> Result<f64> {
    check_dim(d)?;
    check_time(t)?;
    if !(0.0..=t).contains(&s) {
        return Err(Error::Domain(format!("s = {s} outside [0, {t}]")));
    }
    Ok(h_unchecked(d, t, s))
}

fn h_unchecked(d: u32, t: f64, s: f64) -> f64 {
    let d = d as f64;
    let e = |x: f64| (-2.0 * x / d).exp();
    (1.0 + e(s)) * (1.0 + e(t - s)) / (2.0 * (1.0 + e(t)))
}

/// `C_d(t)` by adaptive Simpson on `int_0^t h_d(t,s)^d ds`.
pub fn c_d_quadrature(d: u32, t: f64, tol: f64) -> Result<f64> {
    check_dim(d)?;
    check_time(t)?;
    if !(1e-14..=1e-4).contains(&tol) {
        return Err(Error::Domain(format!("tolerance {tol} outside [1e-14, 1e-4]")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let r = adaptive_simpson(|s| h_unchecked(d, t, s.clamp(0.0, t)).powi(d as i32), 0.0, t, tol)?;
    Ok(r.value.clamp(0.0, t))
}

fn binomial_row(d: u32) -> Vec<f64> {
    let mut row = Vec::with_capacity(d as usize + 1);
    let mut c: u64 = 1;
    for k in 0..=d as u64 {
        row.push(c as f64);
        // exact in u64 for d <= 62
        c = c * (d as u64 - k) / (k + 1);
    }
    row
}

/// `C_d(t)` by term-by-term integration of the binomial expansion of the
/// integrand:
///
/// ```text
/// C_d(t) = (2(1 + e^{-2t/d}))^{-d} sum_{j,k} C(d,j) C(d,k) I_jk(t)
/// I_jj(t) = t e^{-2jt/d}
/// I_jk(t) = d / (2(k-j)) (e^{-2jt/d} - e^{-2kt/d})        j != k
/// ```
///
/// Every term is positive, so the compensated sum carries no cancellation.
pub fn c_d_closed(d: u32, t: f64) -> Result<f64> {
    check_dim(d)?;
    check_time(t)?;
    if d > MAX_CLOSED_FORM_DIM {
        return Err(Error::Size(format!(
            "closed form limited to d <= {MAX_CLOSED_FORM_DIM}, got {d}; use quadrature"
        )));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let df = d as f64;
    let binom = binomial_row(d);
    let rate = 2.0 * t / df;
    let decay: Vec<f64> = (0..=d).map(|j| (-rate * j as f64).exp()).collect();

    let mut sum = 0.0;
    let mut comp = 0.0;
    for j in 0..=d as usize {
        for k in 0..=d as usize {
            let integral = if j == k {
                t * decay[j]
            } else {
                let (lo, hi) = if j < k { (j, k) } else { (k, j) };
                let gap = (hi - lo) as f64;
                // e^{-2 lo t/d} - e^{-2 hi t/d} without cancellation
                df / (2.0 * gap) * decay[lo] * -(-rate * gap).exp_m1()
            };
            let term = binom[j] * binom[k] * integral;
            let y = term - comp;
            let s = sum + y;
            comp = (s - sum) - y;
            sum = s;
        }
    }
    let norm = 2.0 * (1.0 + decay[1]);
    Ok((sum / norm.powi(d as i32)).clamp(0.0, t))
}

/// `C_d(t)` through the closed form where available, quadrature otherwise.
pub fn c_d(d: u32, t: f64) -> Result<f64> {
    if d <= MAX_CLOSED_FORM_DIM {
        c_d_closed(d, t)
    } else {
        c_d_quadrature(d, t, DEFAULT_QUAD_TOL)
    }
}

/// The linear-majorant constant `(1 - e^{-1})^2 / (1 + e^{-2})` from the
/// bound `h_d(d, s) <= 1 - c s / d` on `[0, d/2]`.
pub fn majorant_constant() -> f64 {
    let e1 = (-1.0f64).exp();
    (1.0 - e1).powi(2) / (1.0 + (-2.0f64).exp())
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub d: u32,
    /// `C_d(sqrt d)`.
    pub c_at_sqrt_d: f64,
    /// `e^{-1} sqrt d`.
    pub lower_bound: f64,
    pub lower_holds: bool,
    /// `C_d(d)`.
    pub c_at_d: f64,
    pub upper_bound: f64,
    /// `2 / c` with the majorant constant `c`.
    pub sharp_upper_bound: f64,
    pub upper_holds: bool,
    pub sharp_upper_holds: bool,
}

impl LemmaReport {
    pub fn all_hold(&self) -> bool {
        self.lower_holds && self.upper_holds && self.sharp_upper_holds
    }
}

/// Evaluates `C_d(sqrt d) >= e^{-1} sqrt d` and `C_d(d) <= 6` (and the
/// sharper `<= 2/c`).
pub fn lemma_bounds_check(d: u32) -> Result<LemmaReport> {
    check_dim(d)?;
    let sqrt_d = (d as f64).sqrt();
    let c_at_sqrt_d = c_d(d, sqrt_d)?;
    let lower_bound = (-1.0f64).exp() * sqrt_d;
    let c_at_d = c_d(d, d as f64)?;
    let sharp_upper_bound = 2.0 / majorant_constant();
    Ok(LemmaReport {
        d,
        c_at_sqrt_d,
        lower_bound,
        lower_holds: c_at_sqrt_d >= lower_bound,
        c_at_d,
        upper_bound: 6.0,
        sharp_upper_bound,
        upper_holds: c_at_d <= 6.0,
        sharp_upper_holds: c_at_d <= sharp_upper_bound,
    })
}

/// Searches `grid` for `t1 < t2` with `C_d(t1) - C_d(t2) > margin`.
pub fn find_witness(d: u32, grid: &[f64], margin: f64) -> Result<Option<Witness>> {
    check_dim(d)?;
    if !(margin > 0.0) {
        return Err(Error::Domain(format!("margin must be positive, got {margin}")));
    }
    find_decreasing_pair(|t| c_d(d, t), grid, margin)
}

/// `C_d` sampled on `grid` for each dimension, one column per entry of `dims`.
pub fn c_d_table(dims: &[u32], grid: &[f64]) -> Result<Vec<Vec<f64>>> {
    crate::heat::validate_grid(grid, true)?;
    dims.iter()
        .map(|&d| grid.iter().map(|&t| c_d(d, t)).collect())
        .collect()
}
