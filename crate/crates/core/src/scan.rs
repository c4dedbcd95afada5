//! Grid scans for decreasing pairs `f(t1) > f(t2)` with `t1 < t2`, with
//! golden-section refinement of the bracketing grid points.

use crate::heat::validate_grid;
use crate::Result;

/// A pair of times witnessing that a curve is not non-decreasing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub t1: f64,
    pub t2: f64,
    pub value1: f64,
    pub value2: f64,
    /// `value1 - value2`.
    pub margin: f64,
}

/// Refinement stops once the bracket is this narrow.
pub const REFINE_TOL: f64 = 1e-8;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Indices `(i, j)`, `i < j`, maximising `values[i] - values[j]`, with that
/// drop. `None` when the sequence never decreases.
pub fn best_decreasing_pair(values: &[f64]) -> Option<(usize, usize, f64)> {
    let mut best: Option<(usize, usize, f64)> = None;
    let mut peak = 0;
    for j in 1..values.len() {
        if values[j - 1] > values[peak] {
            peak = j - 1;
        }
        let drop = values[peak] - values[j];
        if drop > 0.0 && best.is_none_or(|(_, _, b)| drop > b) {
            best = Some((peak, j, drop));
        }
    }
    best
}

/// Golden-section search for a local maximum of `f` on `[a, b]`. Returns the
/// best point seen (including the endpoints) and its value.
pub fn golden_max<F: FnMut(f64) -> Result<f64>>(mut f: F, a: f64, b: f64, tol: f64) -> Result<(f64, f64)> {
    let mut best = (a, f(a)?);
    let fb = f(b)?;
    if fb > best.1 {
        best = (b, fb);
    }
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
        for (x, fx) in [(x1, f1), (x2, f2)] {
            if fx > best.1 {
                best = (x, fx);
            }
        }
    }
    Ok(best)
}

pub fn golden_min<F: FnMut(f64) -> Result<f64>>(mut f: F, a: f64, b: f64, tol: f64) -> Result<(f64, f64)> {
    let (x, neg) = golden_max(|x| f(x).map(|y| -y), a, b, tol)?;
    Ok((x, -neg))
}

/// Scans `f` on `grid` for the largest drop, refines both endpoints within
/// their neighbouring grid cells, and reports it when the refined drop
/// exceeds `margin`.
pub fn find_decreasing_pair<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    grid: &[f64],
    margin: f64,
) -> Result<Option<Witness>> {
    validate_grid(grid, true)?;
    let values = grid.iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
    let Some((i, j, _)) = best_decreasing_pair(&values) else {
        return Ok(None);
    };

    let last = grid.len() - 1;
    // t1 stays left of t2's bracket when the two grid points are adjacent
    let lo1 = grid[i.saturating_sub(1)];
    let hi1 = if j == i + 1 { grid[i] } else { grid[(i + 1).min(last)] };
    let lo2 = if j == i + 1 { grid[j] } else { grid[j - 1] };
    let hi2 = grid[(j + 1).min(last)];
    let (mut t1, mut v1) = golden_max(&mut f, lo1, hi1, REFINE_TOL)?;
    let (mut t2, mut v2) = golden_min(&mut f, lo2, hi2, REFINE_TOL)?;
    if v1 <= values[i] {
        (t1, v1) = (grid[i], values[i]);
    }
    if v2 >= values[j] {
        (t2, v2) = (grid[j], values[j]);
    }
    debug_assert!(t1 < t2);
    let drop = v1 - v2;
    Ok((drop > margin).then_some(Witness { t1, t2, value1: v1, value2: v2, margin: drop }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_force(values: &[f64]) -> f64 {
        let mut best = 0.0f64;
        for i in 0..values.len() {
            for j in i + 1..values.len() {
                best = best.max(values[i] - values[j]);
            }
        }
        best
    }

    #[test]
    fn monotone_has_no_pair() {
        assert!(best_decreasing_pair(&[0.0, 1.0, 1.0, 2.0]).is_none());
        assert!(best_decreasing_pair(&[]).is_none());
        assert!(best_decreasing_pair(&[3.0]).is_none());
    }

    #[test]
    fn picks_global_drop() {
        let v = [0.0, 5.0, 4.0, 6.0, 1.0, 3.0];
        assert_eq!(best_decreasing_pair(&v), Some((3, 4, 5.0)));
    }

    #[test]
    fn golden_finds_interior_extremum() {
        let (x, y) = golden_max(|x| Ok(-(x - 0.3) * (x - 0.3)), 0.0, 1.0, 1e-10).unwrap();
        assert!((x - 0.3).abs() < 1e-6);
        assert!(y.abs() < 1e-12);
        let (x, _) = golden_min(|x| Ok((x - 2.0).powi(2)), 0.0, 1.0, 1e-10).unwrap();
        assert_eq!(x, 1.0);
    }

    #[test]
    fn refines_bump() {
        // bump peaking at 1, dip at 3, then rising
        let f = |t: f64| Ok(t * (-t).exp() + 0.05 * t);
        let grid: Vec<f64> = (0..=40).map(|i| i as f64 * 0.25).collect();
        let w = find_decreasing_pair(f, &grid, 1e-6).unwrap().unwrap();
        assert!(w.t1 < w.t2);
        assert!((w.value1 - w.value2 - w.margin).abs() < 1e-15);
        let values: Vec<f64> = grid.iter().map(|&t| t * (-t).exp() + 0.05 * t).collect();
        assert!(w.margin >= brute_force(&values));
        assert!(find_decreasing_pair(Ok, &grid, 1e-6).unwrap().is_none());
    }

    proptest! {
        #[test]
        fn scan_matches_brute_force(values in proptest::collection::vec(-10.0f64..10.0, 0..40)) {
            let fast = best_decreasing_pair(&values).map_or(0.0, |(i, j, d)| {
                assert!(i < j);
                assert_eq!(values[i] - values[j], d);
                d
            });
            prop_assert_eq!(fast, brute_force(&values));
        }
    }
}
