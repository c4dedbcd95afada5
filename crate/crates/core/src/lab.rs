//! Experiments on the relative mass of arbitrary graphs: the spectral
//! criterion for `r_{u,v}(t) > 1` on regular graphs, monotonicity scans, the
//! pyramid-cube counterexample, and convergence of clique blowups.

use crate::cayley::{clique_blowup, BlowupParams, GroupTable, WeightedGeneratorSet};
use crate::cayley::build_cayley;
use crate::graph::WeightedGraph;
use crate::heat::{open_grid, validate_grid, SpectralDecomposition};
use crate::scan::{find_decreasing_pair, golden_max, Witness};
use crate::{Error, Result};

/// Minimum `lambda_3 - lambda_2` for `lambda_2` to count as simple.
pub const SIMPLICITY_GAP: f64 = 1e-8;
/// `r` must exceed `1 + EXCEED_THRESHOLD` on the grid to register.
pub const EXCEED_THRESHOLD: f64 = 1e-9;
/// Width at which bisection of the crossing time stops.
pub const CROSSING_TOL: f64 = 1e-8;
/// Eigenvector entries this small are treated as zero when fixing the sign.
pub const SIGN_TOL: f64 = 1e-12;
/// Default length of the scan horizon, in units of `1/lambda_2`.
pub const PROPOSITION_HORIZON: f64 = 50.0;
pub const DEFAULT_SCAN_POINTS: usize = 2000;
pub const DEFAULT_SCAN_END: f64 = 200.0;

/// Times at which `r_{u,v}` exceeds one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExceedsOne {
    /// First upward crossing of `1 + EXCEED_THRESHOLD`, refined by bisection.
    pub crossing: f64,
    /// Time of the largest `r` found, refined around the best grid point.
    pub peak_time: f64,
    pub peak_r: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropositionReport {
    pub lambda2: f64,
    pub lambda3: Option<f64>,
    pub simple: bool,
    /// Second eigenvector at `u` and `v`, sign fixed so that `f2(u) >= 0`.
    /// Absent when `lambda_2` is not simple.
    pub f2_u: Option<f64>,
    pub f2_v: Option<f64>,
    pub verdict: bool,
    pub witness: Option<ExceedsOne>,
}

fn check_pair(dec: &SpectralDecomposition, u: usize, v: usize) -> Result<()> {
    if u >= dec.n() || v >= dec.n() {
        return Err(Error::Domain(format!("vertices ({u}, {v}) outside 0..{}", dec.n())));
    }
    Ok(())
}

/// Checks `0 < lambda_2 < lambda_3` and `f2(v) > f2(u) > 0`. When they hold,
/// scans `r_{u,v}` up to `50 / lambda_2` for a time with `r > 1`.
pub fn proposition_check(
    graph: &WeightedGraph,
    dec: &SpectralDecomposition,
    u: usize,
    v: usize,
) -> Result<PropositionReport> {
    if !graph.is_weight_regular(1e-12) {
        return Err(Error::Validation("graph is not regular".into()));
    }
    if graph.n() != dec.n() {
        return Err(Error::Validation("decomposition does not belong to this graph".into()));
    }
    check_pair(dec, u, v)?;
    let lambda2 = dec.lambda2();
    let lambda3 = dec.eigenvalues().get(2).copied();
    let simple = lambda3.is_none_or(|l3| l3 - lambda2 > SIMPLICITY_GAP);
    let mut report = PropositionReport {
        lambda2,
        lambda3,
        simple,
        f2_u: None,
        f2_v: None,
        verdict: false,
        witness: None,
    };
    if !simple || dec.n() < 2 {
        return Ok(report);
    }
    let f2 = dec.eigenvector(1);
    let (mut fu, mut fv) = (f2[u], f2[v]);
    if fu.abs() <= SIGN_TOL {
        report.f2_u = Some(0.0);
        report.f2_v = Some(fv);
        return Ok(report);
    }
    if fu < 0.0 {
        fu = -fu;
        fv = -fv;
    }
    report.f2_u = Some(fu);
    report.f2_v = Some(fv);
    report.verdict = lambda2 > 0.0 && fv > fu && fu > 0.0;
    if report.verdict {
        let grid = open_grid(PROPOSITION_HORIZON / lambda2, DEFAULT_SCAN_POINTS)?;
        report.witness = find_r_exceeds_one(dec, u, v, &grid)?;
    }
    Ok(report)
}

/// Finds where `r_{u,v}` first rises above one on `grid`, and its peak.
pub fn find_r_exceeds_one(
    dec: &SpectralDecomposition,
    u: usize,
    v: usize,
    grid: &[f64],
) -> Result<Option<ExceedsOne>> {
    check_pair(dec, u, v)?;
    validate_grid(grid, false)?;
    if u == v {
        return Ok(None);
    }
    let r = |t: f64| dec.relative_mass(u, v, t);
    let values = grid.iter().map(|&t| r(t)).collect::<Result<Vec<_>>>()?;
    let level = 1.0 + EXCEED_THRESHOLD;
    let Some(first) = values.iter().position(|&x| x > level) else {
        return Ok(None);
    };

    let (mut lo, mut hi) = (if first == 0 { 0.0 } else { grid[first - 1] }, grid[first]);
    while hi - lo > CROSSING_TOL {
        let mid = 0.5 * (lo + hi);
        if r(mid)? > level {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    let (best, &best_r) = values
        .iter()
        .enumerate()
        .skip(first)
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("at least one value above the level");
    let left = grid[best.saturating_sub(1)].max(hi);
    let right = grid[(best + 1).min(grid.len() - 1)];
    let (mut peak_time, mut peak_r) = (grid[best], best_r);
    if right > left {
        let (t, val) = golden_max(r, left, right, CROSSING_TOL)?;
        if val > peak_r {
            (peak_time, peak_r) = (t, val);
        }
    }
    Ok(Some(ExceedsOne { crossing: hi, peak_time, peak_r }))
}

/// Largest decrease of `r_{u,v}` along `grid`, if it exceeds `margin`.
pub fn monotonicity_scan(
    dec: &SpectralDecomposition,
    u: usize,
    v: usize,
    grid: &[f64],
    margin: f64,
) -> Result<Option<Witness>> {
    check_pair(dec, u, v)?;
    if !(margin > 0.0) {
        return Err(Error::Domain(format!("margin must be positive, got {margin}")));
    }
    find_decreasing_pair(|t| dec.relative_mass(u, v, t), grid, margin)
}

/// The pyramid cube's second Laplacian eigenvalue, `(7 - sqrt 17) / 8`.
pub fn pyramid_lambda2() -> f64 {
    (7.0 - 17f64.sqrt()) / 8.0
}

/// Apex entry `c = 3 - (7 - sqrt 17)/2` of the pyramid cube's second
/// eigenvector `(c, 1, 1, 1, 1, -1, -1, -1, -1, -c)`.
pub fn pyramid_apex_entry() -> f64 {
    3.0 - (7.0 - 17f64.sqrt()) / 2.0
}

pub fn pyramid_second_eigenvector() -> Vec<f64> {
    let c = pyramid_apex_entry();
    vec![c, 1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0, -c]
}

/// Norm of the orthogonal projection of `x / |x|` onto the eigenspace of
/// eigenvalue `lambda` (eigenvalues within `tol` of it).
pub fn eigenspace_projection_norm(dec: &SpectralDecomposition, lambda: f64, x: &[f64], tol: f64) -> Result<f64> {
    if x.len() != dec.n() {
        return Err(Error::Validation("vector length does not match graph".into()));
    }
    let norm = x.iter().map(|a| a * a).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::Validation("cannot project the zero vector".into()));
    }
    let squared: f64 = dec
        .eigenvalues()
        .iter()
        .enumerate()
        .filter(|&(_, &l)| (l - lambda).abs() <= tol)
        .map(|(i, _)| {
            let dot: f64 = dec.eigenvector(i).iter().zip(x).map(|(f, a)| f * a).sum();
            (dot / norm).powi(2)
        })
        .sum();
    Ok(squared.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowupRow {
    pub n: usize,
    pub degree: usize,
    /// `sup_t |r^H_{x,y}(deg(H) t) - r^G_{u,v}(t)|`
    pub sup_r_dev: f64,
    /// `sup_t |N p^H_{x,y}(deg(H) t) - p^G_{u,v}(t)|`
    pub sup_p_dev: f64,
}

/// Largest explicit blowup decomposed.
pub const MAX_BLOWUP_VERTICES: usize = 4096;

/// Compares the walk on each clique blowup `H` (clique size `N`) against the
/// walk on `G`, at matched times `t' = deg(H) t`, between `x = (u, 0)` and
/// `y = (v, 0)`.
pub fn blowup_convergence(
    group: &GroupTable,
    gens: &WeightedGeneratorSet,
    u: usize,
    v: usize,
    clique_sizes: &[usize],
    grid: &[f64],
) -> Result<Vec<BlowupRow>> {
    validate_grid(grid, true)?;
    let base = build_cayley(group, gens)?;
    let base_dec = SpectralDecomposition::new(&base)?;
    check_pair(&base_dec, u, v)?;
    let base_r = grid.iter().map(|&t| base_dec.relative_mass(u, v, t)).collect::<Result<Vec<_>>>()?;
    let base_p = grid.iter().map(|&t| base_dec.transition_prob(u, v, t)).collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::with_capacity(clique_sizes.len());
    for &n in clique_sizes {
        let params = BlowupParams::new(n, group.clone(), gens)?;
        if group.order() * n > MAX_BLOWUP_VERTICES {
            return Err(Error::Size(format!(
                "blowup with N = {n} has {} vertices, above {MAX_BLOWUP_VERTICES}",
                group.order() * n
            )));
        }
        let h = clique_blowup(&params)?;
        let dec = SpectralDecomposition::new(&h)?;
        let (x, y) = (params.vertex(u, 0), params.vertex(v, 0));
        let deg = params.degree() as f64;
        let mut sup_r_dev = 0.0f64;
        let mut sup_p_dev = 0.0f64;
        for (k, &t) in grid.iter().enumerate() {
            let t_h = deg * t;
            sup_r_dev = sup_r_dev.max((dec.relative_mass(x, y, t_h)? - base_r[k]).abs());
            sup_p_dev = sup_p_dev.max((n as f64 * dec.transition_prob(x, y, t_h)? - base_p[k]).abs());
        }
        rows.push(BlowupRow { n, degree: params.degree(), sup_r_dev, sup_p_dev });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_complete, build_cycle, build_hypercube, build_pyramid_cube, pyramid};

    #[test]
    fn pyramid_cube_satisfies_hypotheses() {
        let g = build_pyramid_cube();
        let dec = SpectralDecomposition::new(&g).unwrap();
        let r = proposition_check(&g, &dec, pyramid::TOP[0], pyramid::APEX_TOP).unwrap();
        assert!(r.simple && r.verdict, "{r:?}");
        assert!((r.lambda2 - pyramid_lambda2()).abs() < 1e-12);
        let ratio = r.f2_v.unwrap() / r.f2_u.unwrap();
        assert!((ratio - pyramid_apex_entry()).abs() < 1e-10);
        assert!((pyramid_apex_entry() - 1.561_552_8).abs() < 1e-7);
        let w = r.witness.expect("r exceeds one");
        assert!(w.peak_r > 1.0 && w.crossing <= w.peak_time);
        assert!(dec.relative_mass(pyramid::TOP[0], pyramid::APEX_TOP, w.crossing).unwrap() > 1.0);
    }

    #[test]
    fn degenerate_lambda2_fails_hypotheses() {
        for g in [build_complete(4).unwrap(), build_cycle(4).unwrap()] {
            let dec = SpectralDecomposition::new(&g).unwrap();
            let r = proposition_check(&g, &dec, 0, 1).unwrap();
            assert!(!r.simple && !r.verdict && r.witness.is_none(), "{r:?}");
        }
    }

    #[test]
    fn irregular_graph_rejected() {
        let path = WeightedGraph::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)], "path").unwrap();
        let dec = SpectralDecomposition::new(&path).unwrap();
        assert!(matches!(proposition_check(&path, &dec, 0, 1), Err(Error::Validation(_))));
    }

    #[test]
    fn transitive_graphs_never_exceed_one() {
        let dec = SpectralDecomposition::new(&build_hypercube(5).unwrap()).unwrap();
        let grid = open_grid(40.0, 400).unwrap();
        for v in [1, 3, 7, 31] {
            assert!(find_r_exceeds_one(&dec, 0, v, &grid).unwrap().is_none());
        }
        assert!(find_r_exceeds_one(&dec, 4, 4, &grid).unwrap().is_none());
    }

    #[test]
    fn pyramid_scan_finds_decrease() {
        let dec = SpectralDecomposition::new(&build_pyramid_cube()).unwrap();
        let grid = open_grid(DEFAULT_SCAN_END, DEFAULT_SCAN_POINTS).unwrap();
        let w = monotonicity_scan(&dec, pyramid::TOP[0], pyramid::APEX_TOP, &grid, 1e-6)
            .unwrap()
            .expect("r rises above one then returns");
        assert!(w.value1 > 1.0 && w.t1 < w.t2);
    }

    #[test]
    fn projection_of_eigenvector_is_full() {
        let dec = SpectralDecomposition::new(&build_pyramid_cube()).unwrap();
        let p = eigenspace_projection_norm(&dec, dec.lambda2(), &pyramid_second_eigenvector(), 1e-8).unwrap();
        assert!(p >= 1.0 - 1e-8);
        let off = eigenspace_projection_norm(&dec, dec.lambda2(), &[1.0; 10], 1e-8).unwrap();
        assert!(off < 1e-10);
    }

    #[test]
    fn blowup_table_shape() {
        let z6 = GroupTable::cyclic(6).unwrap();
        let gens = WeightedGeneratorSet::new(&z6, vec![(1, 2.0), (5, 2.0), (2, 1.0), (4, 1.0)]).unwrap();
        let rows = blowup_convergence(&z6, &gens, 0, 1, &[8, 12], &[0.0, 0.5, 1.0]).unwrap();
        assert_eq!(rows.iter().map(|r| (r.n, r.degree)).collect::<Vec<_>>(), vec![(8, 13), (12, 17)]);
        let at_zero = blowup_convergence(&z6, &gens, 0, 1, &[8], &[0.0]).unwrap();
        assert_eq!(at_zero[0].sup_r_dev, 0.0);
        assert_eq!(at_zero[0].sup_p_dev, 0.0);
        assert!(blowup_convergence(&z6, &gens, 0, 1, &[4], &[0.0]).is_err());
    }
}
