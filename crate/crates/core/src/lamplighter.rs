//! The weighted lamplighter graph over `Q_d`.
//!
//! A state is the walker position `x` in `{0,1}^d` together with the set of lit
//! lamps. The walker steps along hypercube edges with weight `1/d` each, and
//! toggles the lamp under itself with weight `epsilon`. Small `d` is built
//! explicitly and decomposed exactly; larger `d` goes through the structured
//! simulator in [`crate::montecarlo`].

use std::collections::BTreeSet;

use crate::graph::WeightedGraph;
use crate::heat::{validate_grid, CurveMeta, CurveSamples, SpectralDecomposition};
use crate::hypercube;
use crate::{Error, Result};

/// Largest base dimension built explicitly (`2^d * 2^(2^d)` vertices).
pub const MAX_EXPLICIT_DIM: u32 = 3;
/// Slack allowed below zero when checking residuals that are nonnegative in
/// exact arithmetic.
pub const RESIDUAL_SLACK: f64 = 1e-12;
pub const DEFAULT_EPSILON: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LamplighterParams {
    pub d: u32,
    pub epsilon: f64,
}

impl LamplighterParams {
    pub fn new(d: u32, epsilon: f64) -> Result<Self> {
        if d == 0 {
            return Err(Error::Validation("lamplighter base dimension must be at least 1".into()));
        }
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::Validation(format!("toggle rate {epsilon} outside (0, 1]")));
        }
        Ok(Self { d, epsilon })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LamplighterCoords {
    pub pos: u64,
    pub lamps: BTreeSet<u64>,
}

impl LamplighterCoords {
    pub fn origin_dark() -> Self {
        Self::default()
    }

    pub fn origin_lit() -> Self {
        Self { pos: 0, lamps: BTreeSet::from([0]) }
    }

    /// Explicit vertex index `pos + 2^d * mask(lamps)`.
    pub fn index(&self, d: u32) -> Result<usize> {
        check_explicit(d)?;
        let cube = 1u64 << d;
        if self.pos >= cube || self.lamps.iter().any(|&x| x >= cube) {
            return Err(Error::Domain(format!("coordinates outside Q_{d}")));
        }
        let mask: u64 = self.lamps.iter().map(|&x| 1u64 << x).sum();
        Ok((self.pos + cube * mask) as usize)
    }

    pub fn from_index(d: u32, index: usize) -> Result<Self> {
        check_explicit(d)?;
        let cube = 1usize << d;
        if index >= cube << cube {
            return Err(Error::Domain(format!("vertex {index} outside lamplighter over Q_{d}")));
        }
        let mask = index / cube;
        let lamps = (0..cube as u64).filter(|&x| mask >> x & 1 == 1).collect();
        Ok(Self { pos: (index % cube) as u64, lamps })
    }
}

fn check_explicit(d: u32) -> Result<()> {
    if !(1..=MAX_EXPLICIT_DIM).contains(&d) {
        return Err(Error::Size(format!(
            "explicit lamplighter limited to 1 <= d <= {MAX_EXPLICIT_DIM}, got {d}; \
             use the structured simulator"
        )));
    }
    Ok(())
}

pub fn build_lamplighter(params: LamplighterParams) -> Result<WeightedGraph> {
    let d = params.d;
    check_explicit(d)?;
    let cube = 1usize << d;
    let n = cube << cube;
    let step = 1.0 / d as f64;
    let mut g = WeightedGraph::new(n, format!("lamplighter d={d} eps={}", params.epsilon));
    for idx in 0..n {
        let pos = idx % cube;
        let mask = idx / cube;
        for bit in 0..d {
            let y = pos ^ (1 << bit);
            if pos < y {
                g.add_edge(idx, y + cube * mask, step)?;
            }
        }
        let toggled = mask ^ (1 << pos);
        if mask < toggled {
            g.add_edge(idx, pos + cube * toggled, params.epsilon)?;
        }
    }
    Ok(g)
}

/// `u` = walker at the origin, all lamps off; `v` = walker at the origin,
/// only the origin's lamp on.
pub fn uv_vertices(d: u32) -> Result<(usize, usize)> {
    Ok((
        LamplighterCoords::origin_dark().index(d)?,
        LamplighterCoords::origin_lit().index(d)?,
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClaimReport {
    pub d: u32,
    pub epsilon: f64,
    pub t: f64,
    pub puu: f64,
    pub puv: f64,
    /// `P[Z_t = 0]` for the walker alone.
    pub walker_return: f64,
    pub c_d: f64,
    /// `p_uu - e^{-eps t} P[Z_t = 0]`
    pub residual_uu: f64,
    /// `p_uv - eps e^{-eps t} C_d(t) P[Z_t = 0]`
    pub residual_uv: f64,
    /// `eps^2 t^2`
    pub bound: f64,
}

impl ClaimReport {
    pub fn uu_holds(&self) -> bool {
        (-RESIDUAL_SLACK..=self.bound).contains(&self.residual_uu)
    }

    pub fn uv_holds(&self) -> bool {
        (-RESIDUAL_SLACK..=self.bound).contains(&self.residual_uv)
    }

    pub fn holds(&self) -> bool {
        self.uu_holds() && self.uv_holds()
    }
}

/// `r_{u,v}` next to its first-order prediction `eps C_d`.
#[derive(Debug, Clone)]
pub struct FirstOrderComparison {
    pub exact: CurveSamples,
    pub first_order: CurveSamples,
    /// `max_t |r(t) - eps C_d(t)|`
    pub max_gap: f64,
}

/// An explicit lamplighter graph with its spectral decomposition.
#[derive(Debug, Clone)]
pub struct LamplighterSpectrum {
    params: LamplighterParams,
    dec: SpectralDecomposition,
    u: usize,
    v: usize,
}

impl LamplighterSpectrum {
    pub fn new(params: LamplighterParams) -> Result<Self> {
        let graph = build_lamplighter(params)?;
        let dec = SpectralDecomposition::new(&graph)?;
        let (u, v) = uv_vertices(params.d)?;
        Ok(Self { params, dec, u, v })
    }

    pub fn params(&self) -> LamplighterParams {
        self.params
    }

    pub fn decomposition(&self) -> &SpectralDecomposition {
        &self.dec
    }

    pub fn uv(&self) -> (usize, usize) {
        (self.u, self.v)
    }

    /// Compares exact `p_uu`, `p_uv` against their first-order expressions.
    pub fn verify_claim(&self, t: f64) -> Result<ClaimReport> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Domain(format!("claim check needs t > 0, got {t}")));
        }
        let LamplighterParams { d, epsilon } = self.params;
        let puu = self.dec.transition_prob(self.u, self.u, t)?;
        let puv = self.dec.transition_prob(self.u, self.v, t)?;
        let walker_return = hypercube::return_prob(d, t)?;
        let c_d = hypercube::c_d_closed(d, t)?;
        let no_toggle = (-epsilon * t).exp();
        Ok(ClaimReport {
            d,
            epsilon,
            t,
            puu,
            puv,
            walker_return,
            c_d,
            residual_uu: puu - no_toggle * walker_return,
            residual_uv: puv - epsilon * no_toggle * c_d * walker_return,
            bound: (epsilon * t).powi(2),
        })
    }

    /// Distribution of the walker position at time `t`, summed over lamp
    /// configurations.
    pub fn walker_marginal(&self, t: f64) -> Result<Vec<f64>> {
        let cube = 1usize << self.params.d;
        let mut out = vec![0.0; cube];
        for idx in 0..self.dec.n() {
            out[idx % cube] += self.dec.transition_prob(self.u, idx, t)?;
        }
        Ok(out)
    }

    pub fn relative_mass_vs_eps_c(&self, grid: &[f64]) -> Result<FirstOrderComparison> {
        validate_grid(grid, true)?;
        let LamplighterParams { d, epsilon } = self.params;
        let first: Vec<f64> = grid
            .iter()
            .map(|&t| hypercube::c_d_closed(d, t).map(|c| epsilon * c))
            .collect::<Result<_>>()?;
        let positive: Vec<(f64, f64)> = grid.iter().copied().zip(first.iter().copied()).filter(|&(t, _)| t > 0.0).collect();
        if let (Some(&(t_max, _)), Some(min_first)) = (
            positive.last(),
            positive.iter().map(|&(_, c)| c).reduce(f64::min),
        ) {
            if (epsilon * t_max).powi(2) >= min_first {
                log::warn!(
                    "eps = {epsilon} is not small for this grid: eps^2 t_max^2 = {:.3e} >= min eps C_d = {:.3e}",
                    (epsilon * t_max).powi(2),
                    min_first
                );
            }
        }
        let exact = self.dec.sample_curve(self.u, self.v, grid, crate::heat::CurveQuantity::RelativeMass)?;
        let max_gap = exact
            .values()
            .iter()
            .zip(&first)
            .map(|(r, f)| (r - f).abs())
            .fold(0.0, f64::max);
        let first_order = CurveSamples::new(
            grid.to_vec(),
            first,
            CurveMeta {
                quantity: "eps_c_d".into(),
                graph: self.dec.source().to_string(),
                params: format!("d={d} eps={epsilon}"),
            },
        )?;
        Ok(FirstOrderComparison { exact, first_order, max_gap })
    }
}
