//! Seeded continuous-time random-walk simulation.
//!
//! Work is split into chunks. Chunk `k` of a run with seed `s` draws from the
//! ChaCha8 stream `k` keyed by `s`, so every chunk has its own counter-based
//! sequence and the aggregate is a fixed, ordered reduction over chunk
//! indices: identical `(seed, chunks)` give bit-identical estimates whatever
//! the thread schedule.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;

use crate::graph::WeightedGraph;
use crate::hypercube;
use crate::{Error, Result};

pub const DEFAULT_CHUNKS: u32 = 64;
pub const DEFAULT_SEED: u64 = 20_150_601;
/// Minimum expected number of conditioned samples before a warning.
pub const CONDITIONING_YIELD_FLOOR: f64 = 100.0;
/// Gap, in combined standard errors, needed to call a decrease supported.
pub const SUPPORT_SIGMAS: f64 = 5.0;
/// Largest hypercube dimension the bit-packed walker supports.
pub const MAX_WALKER_DIM: u32 = 63;

/// The RNG for chunk `stream` of a run keyed by `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derives an independent run seed from `(seed, tag)` (SplitMix64 finaliser).
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn exp_sample<R: Rng + ?Sized>(rng: &mut R, rate: f64) -> f64 {
    let e: f64 = rng.sample(Exp1);
    e / rate
}

/// A piecewise-constant path on `[0, horizon]`. `states[0]` is the start and
/// `states[k + 1]` the state entered at `jump_times[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub jump_times: Vec<f64>,
    pub states: Vec<usize>,
    pub horizon: f64,
}

impl Trajectory {
    pub fn final_state(&self) -> usize {
        *self.states.last().expect("trajectory has a start state")
    }

    /// State occupied at time `t`, right-continuous.
    pub fn state_at(&self, t: f64) -> usize {
        let k = self.jump_times.partition_point(|&s| s <= t);
        self.states[k]
    }

    /// Total time in `[0, horizon]` spent in states satisfying `pred`.
    pub fn local_time(&self, pred: impl Fn(usize) -> bool) -> f64 {
        let mut total = 0.0;
        let mut start = 0.0;
        for (k, &state) in self.states.iter().enumerate() {
            let end = self.jump_times.get(k).copied().unwrap_or(self.horizon);
            if pred(state) {
                total += end - start;
            }
            start = end;
        }
        total
    }
}

/// Jump sampler for an explicit weighted graph.
#[derive(Debug, Clone)]
pub struct CtrwSampler {
    rates: Vec<f64>,
    /// Per-vertex cumulative weights and targets.
    cumulative: Vec<Vec<(f64, usize)>>,
}

impl CtrwSampler {
    pub fn new(graph: &WeightedGraph) -> Self {
        let cumulative = (0..graph.n())
            .map(|u| {
                let mut acc = 0.0;
                graph
                    .neighbors(u)
                    .iter()
                    .map(|&(v, w)| {
                        acc += w;
                        (acc, v)
                    })
                    .collect()
            })
            .collect::<Vec<Vec<_>>>();
        let rates = cumulative.iter().map(|c| c.last().map_or(0.0, |&(a, _)| a)).collect();
        Self { rates, cumulative }
    }

    /// Holding time at `u` is exponential with rate equal to its weighted
    /// degree; the next vertex is chosen proportionally to edge weight.
    pub fn simulate<R: Rng + ?Sized>(&self, start: usize, horizon: f64, rng: &mut R) -> Result<Trajectory> {
        if !(horizon >= 0.0 && horizon.is_finite()) {
            return Err(Error::Domain(format!("horizon must be finite and nonnegative, got {horizon}")));
        }
        if start >= self.rates.len() {
            return Err(Error::Domain(format!("start vertex {start} out of range")));
        }
        let mut traj = Trajectory { jump_times: Vec::new(), states: vec![start], horizon };
        let mut now = 0.0;
        let mut u = start;
        loop {
            let rate = self.rates[u];
            if rate == 0.0 {
                break;
            }
            now += exp_sample(rng, rate);
            if now > horizon {
                break;
            }
            let target = rng.random::<f64>() * rate;
            let row = &self.cumulative[u];
            let k = row.partition_point(|&(acc, _)| acc <= target).min(row.len() - 1);
            u = row[k].1;
            traj.jump_times.push(now);
            traj.states.push(u);
        }
        Ok(traj)
    }
}

/// Convenience wrapper around [`CtrwSampler::simulate`].
pub fn simulate_ctrw<R: Rng + ?Sized>(
    graph: &WeightedGraph,
    start: usize,
    horizon: f64,
    rng: &mut R,
) -> Result<Trajectory> {
    CtrwSampler::new(graph).simulate(start, horizon, rng)
}

/// One run of the walker on `Q_d` (rate one, uniform coordinate flips).
/// Returns the final position and the time spent at the origin.
pub fn hypercube_walk_origin_time<R: Rng + ?Sized>(d: u32, horizon: f64, rng: &mut R) -> (u64, f64) {
    let mut pos = 0u64;
    let mut now = 0.0;
    let mut at_origin = 0.0;
    loop {
        let next = now + exp_sample(rng, 1.0);
        let end = next.min(horizon);
        if pos == 0 {
            at_origin += end - now;
        }
        if next >= horizon {
            return (pos, at_origin);
        }
        now = next;
        pos ^= 1u64 << rng.random_range(0..d);
    }
}

/// A structured lamplighter run: walker path, toggle events `(time, vertex)`,
/// and the final set of lit lamps.
#[derive(Debug, Clone, PartialEq)]
pub struct LamplighterRun {
    pub walker: Trajectory,
    pub toggles: Vec<(f64, u64)>,
    pub final_lamps: BTreeSet<u64>,
}

impl LamplighterRun {
    pub fn final_pos(&self) -> u64 {
        self.walker.final_state() as u64
    }
}

/// Simulates the lamplighter over `Q_d` without building the graph: the
/// walker jumps at rate one, and an independent rate-`epsilon` Poisson
/// process toggles the lamp under the walker.
pub fn simulate_lamplighter_structured<R: Rng + ?Sized>(
    d: u32,
    epsilon: f64,
    horizon: f64,
    rng: &mut R,
) -> Result<LamplighterRun> {
    if !(1..=30).contains(&d) {
        return Err(Error::Size(format!("structured lamplighter supports 1 <= d <= 30, got {d}")));
    }
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::Domain(format!("toggle rate must be nonnegative, got {epsilon}")));
    }
    if !(horizon >= 0.0 && horizon.is_finite()) {
        return Err(Error::Domain(format!("horizon must be finite and nonnegative, got {horizon}")));
    }
    let mut walker = Trajectory { jump_times: Vec::new(), states: vec![0], horizon };
    let mut now = 0.0;
    let mut pos = 0usize;
    loop {
        now += exp_sample(rng, 1.0);
        if now > horizon {
            break;
        }
        pos ^= 1usize << rng.random_range(0..d);
        walker.jump_times.push(now);
        walker.states.push(pos);
    }
    let mut toggles = Vec::new();
    let mut lamps = BTreeSet::new();
    if epsilon > 0.0 {
        let mut now = 0.0;
        loop {
            now += exp_sample(rng, epsilon);
            if now > horizon {
                break;
            }
            let at = walker.state_at(now) as u64;
            toggles.push((now, at));
            if !lamps.insert(at) {
                lamps.remove(&at);
            }
        }
    }
    Ok(LamplighterRun { walker, toggles, final_lamps: lamps })
}

/// A Monte Carlo point estimate with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(n_conditioned)`.
    pub std_error: f64,
    pub n: u64,
    pub n_conditioned: u64,
    pub seed: u64,
    pub chunks: u32,
}

#[derive(Debug, Clone, Copy, Default)]
struct ChunkStats {
    n: u64,
    n_cond: u64,
    mean: f64,
    m2: f64,
}

impl ChunkStats {
    fn push(&mut self, x: f64) {
        self.n_cond += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n_cond as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Self) -> Self {
        let n_cond = self.n_cond + other.n_cond;
        if n_cond == 0 {
            return Self { n: self.n + other.n, ..Self::default() };
        }
        let (na, nb) = (self.n_cond as f64, other.n_cond as f64);
        let delta = other.mean - self.mean;
        Self {
            n: self.n + other.n,
            n_cond,
            mean: self.mean + delta * nb / (na + nb),
            m2: self.m2 + other.m2 + delta * delta * na * nb / (na + nb),
        }
    }
}

/// Runs `n` samples split over `chunks` streams. `sample` returns `None` for
/// runs outside the conditioning event.
fn run_chunked<F>(n: u64, seed: u64, chunks: u32, sample: F) -> Result<McEstimate>
where
    F: Fn(&mut ChaCha8Rng) -> Option<f64> + Sync,
{
    if n == 0 {
        return Err(Error::Validation("sample count must be positive".into()));
    }
    if chunks == 0 {
        return Err(Error::Validation("chunk count must be positive".into()));
    }
    let per = n / chunks as u64;
    let extra = n % chunks as u64;
    let stats: Vec<ChunkStats> = (0..chunks as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream_rng(seed, k);
            let count = per + u64::from(k < extra);
            let mut s = ChunkStats { n: count, ..ChunkStats::default() };
            for _ in 0..count {
                if let Some(x) = sample(&mut rng) {
                    s.push(x);
                }
            }
            s
        })
        .collect();
    let total = stats.into_iter().fold(ChunkStats::default(), ChunkStats::merge);
    if total.n_cond == 0 {
        return Err(Error::Estimation("no samples satisfied the conditioning event".into()));
    }
    let variance = if total.n_cond > 1 { total.m2 / (total.n_cond - 1) as f64 } else { 0.0 };
    Ok(McEstimate {
        mean: total.mean,
        std_error: (variance / total.n_cond as f64).sqrt(),
        n: total.n,
        n_conditioned: total.n_cond,
        seed,
        chunks,
    })
}

/// Estimates `C_d(t)` as the mean origin local time over walks with `Z_t = 0`.
pub fn estimate_c_d(d: u32, t: f64, n: u64, seed: u64, chunks: u32) -> Result<McEstimate> {
    if !(1..=MAX_WALKER_DIM).contains(&d) {
        return Err(Error::Size(format!("walker dimension {d} outside 1..={MAX_WALKER_DIM}")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("horizon must be positive, got {t}")));
    }
    let expected = hypercube::return_prob(d, t)? * n as f64;
    if expected < CONDITIONING_YIELD_FLOOR {
        log::warn!("only ~{expected:.1} of {n} runs expected to return to the origin at t = {t}");
    }
    run_chunked(n, seed, chunks, |rng| {
        let (pos, t0) = hypercube_walk_origin_time(d, t, rng);
        (pos == 0).then_some(t0)
    })
}

/// Target state of a lamplighter probability estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LampTarget {
    /// Walker at the origin, every lamp off.
    U,
    /// Walker at the origin, only the origin's lamp on.
    V,
}

/// Estimates `p_{u,u}(t)` or `p_{u,v}(t)` with the structured simulator.
pub fn estimate_lamplighter_prob(
    d: u32,
    epsilon: f64,
    t: f64,
    target: LampTarget,
    n: u64,
    seed: u64,
    chunks: u32,
) -> Result<McEstimate> {
    // surface parameter errors before fanning out
    simulate_lamplighter_structured(d, epsilon, t, &mut stream_rng(seed, u64::MAX))?;
    run_chunked(n, seed, chunks, |rng| {
        let run = simulate_lamplighter_structured(d, epsilon, t, rng).expect("parameters validated");
        let hit = run.final_pos() == 0
            && match target {
                LampTarget::U => run.final_lamps.is_empty(),
                LampTarget::V => run.final_lamps.len() == 1 && run.final_lamps.contains(&0),
            };
        Some(if hit { 1.0 } else { 0.0 })
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremReport {
    pub d: u32,
    pub epsilon: f64,
    pub t1: f64,
    pub t2: f64,
    pub c1: McEstimate,
    pub c2: McEstimate,
    pub quad1: f64,
    pub quad2: f64,
    /// `sqrt(se1^2 + se2^2)`
    pub combined_se: f64,
    /// `(C1 - C2) / combined_se`
    pub sigmas: f64,
}

impl TheoremReport {
    /// First-order relative masses `eps C(t1)`, `eps C(t2)`.
    pub fn r_estimates(&self) -> (f64, f64) {
        (self.epsilon * self.c1.mean, self.epsilon * self.c2.mean)
    }

    pub fn supported(&self) -> bool {
        self.sigmas >= SUPPORT_SIGMAS
    }

    /// Both estimates within three standard errors of quadrature.
    pub fn agrees_with_quadrature(&self) -> bool {
        (self.c1.mean - self.quad1).abs() <= 3.0 * self.c1.std_error
            && (self.c2.mean - self.quad2).abs() <= 3.0 * self.c2.std_error
    }

    pub fn verdict(&self) -> String {
        if self.supported() {
            format!("r(t1) > r(t2) supported at {:.2} sigma", self.sigmas)
        } else {
            format!("r(t1) > r(t2) not supported ({:.2} sigma < {SUPPORT_SIGMAS})", self.sigmas)
        }
    }
}

/// Estimates `C_d(t1)` and `C_d(t2)` independently (seeds derived from
/// `seed` with tags 1 and 2) and reports whether `eps C_d(t1) > eps C_d(t2)`
/// is resolved. Relies on `r_{u,v}(t) = eps C_d(t) + O(eps^2)`.
pub fn theorem_demo(d: u32, epsilon: f64, t1: f64, t2: f64, n: u64, seed: u64, chunks: u32) -> Result<TheoremReport> {
    if !(t1 > 0.0 && t1 < t2) {
        return Err(Error::Domain(format!("need 0 < t1 < t2, got t1 = {t1}, t2 = {t2}")));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::Domain(format!("toggle rate {epsilon} outside (0, 1]")));
    }
    let c1 = estimate_c_d(d, t1, n, derive_seed(seed, 1), chunks)?;
    let c2 = estimate_c_d(d, t2, n, derive_seed(seed, 2), chunks)?;
    let quad1 = hypercube::c_d_quadrature(d, t1, hypercube::DEFAULT_QUAD_TOL)?;
    let quad2 = hypercube::c_d_quadrature(d, t2, hypercube::DEFAULT_QUAD_TOL)?;
    let combined_se = c1.std_error.hypot(c2.std_error);
    let sigmas = if combined_se > 0.0 { (c1.mean - c2.mean) / combined_se } else { 0.0 };
    Ok(TheoremReport { d, epsilon, t1, t2, c1, c2, quad1, quad2, combined_se, sigmas })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_hypercube;

    #[test]
    fn streams_are_distinct_and_reproducible() {
        let draw = |stream| {
            let mut r = stream_rng(7, stream);
            (0..4).map(|_| r.random()).collect::<Vec<u64>>()
        };
        let (a, b, c) = (draw(0), draw(0), draw(1));
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(derive_seed(1, 1), derive_seed(1, 2));
        assert_ne!(derive_seed(1, 1), derive_seed(2, 1));
    }

    #[test]
    fn zero_horizon_has_no_jumps() {
        let g = build_hypercube(3).unwrap();
        let traj = simulate_ctrw(&g, 5, 0.0, &mut stream_rng(1, 0)).unwrap();
        assert!(traj.jump_times.is_empty());
        assert_eq!(traj.final_state(), 5);
        assert!(simulate_ctrw(&g, 5, -1.0, &mut stream_rng(1, 0)).is_err());
    }

    #[test]
    fn trajectory_steps_along_edges() {
        let g = build_hypercube(4).unwrap();
        let traj = simulate_ctrw(&g, 0, 20.0, &mut stream_rng(3, 0)).unwrap();
        assert!(traj.jump_times.windows(2).all(|w| w[0] < w[1]));
        assert!(traj.jump_times.iter().all(|&t| t > 0.0 && t <= 20.0));
        for w in traj.states.windows(2) {
            assert!(g.weight(w[0], w[1]).is_some());
        }
        let total: f64 = (0..16).map(|x| traj.local_time(|s| s == x)).sum();
        assert!((total - 20.0).abs() < 1e-12);
    }

    #[test]
    fn zero_toggle_rate_leaves_lamps_dark() {
        let mut rng = stream_rng(11, 0);
        for _ in 0..200 {
            let run = simulate_lamplighter_structured(5, 0.0, 10.0, &mut rng).unwrap();
            assert!(run.final_lamps.is_empty() && run.toggles.is_empty());
        }
    }

    #[test]
    fn toggles_happen_under_the_walker() {
        let mut rng = stream_rng(5, 0);
        let run = simulate_lamplighter_structured(3, 2.0, 10.0, &mut rng).unwrap();
        assert!(!run.toggles.is_empty());
        let mut lamps = BTreeSet::new();
        for &(t, x) in &run.toggles {
            assert_eq!(run.walker.state_at(t) as u64, x);
            if !lamps.insert(x) {
                lamps.remove(&x);
            }
        }
        assert_eq!(lamps, run.final_lamps);
    }

    #[test]
    fn chunk_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 / 7.0).collect();
        let mut whole = ChunkStats::default();
        xs.iter().for_each(|&x| whole.push(x));
        let merged = xs.chunks(77).fold(ChunkStats::default(), |acc, c| {
            let mut s = ChunkStats::default();
            c.iter().for_each(|&x| s.push(x));
            acc.merge(s)
        });
        assert_eq!(merged.n_cond, whole.n_cond);
        assert!((merged.mean - whole.mean).abs() < 1e-12);
        assert!((merged.m2 - whole.m2).abs() < 1e-8 * whole.m2);
    }

    #[test]
    fn estimator_is_reproducible() {
        let a = estimate_c_d(3, 2.0, 20_000, 99, 8).unwrap();
        let b = estimate_c_d(3, 2.0, 20_000, 99, 8).unwrap();
        assert_eq!(a, b);
        let c = estimate_c_d(3, 2.0, 20_000, 99, 7).unwrap();
        assert_ne!(a.mean, c.mean);
        assert_eq!(a.n, 20_000);
    }

    #[test]
    fn short_horizon_estimate_is_t() {
        let t = 1e-3;
        let est = estimate_c_d(5, t, 10_000, 1, 4).unwrap();
        assert!((est.mean - t).abs() <= 0.01 * t);
    }

    #[test]
    fn estimation_errors() {
        assert!(matches!(estimate_c_d(3, 1.0, 0, 1, 4), Err(Error::Validation(_))));
        assert!(matches!(estimate_c_d(3, 1.0, 10, 1, 0), Err(Error::Validation(_))));
        assert!(estimate_c_d(0, 1.0, 10, 1, 1).is_err());
        // 40 coordinates at t = 200: returning is hopeless with two samples
        assert!(matches!(estimate_c_d(40, 200.0, 2, 1, 1), Err(Error::Estimation(_))));
        assert!(theorem_demo(5, 1e-3, 3.0, 2.0, 10, 1, 1).is_err());
    }
}
