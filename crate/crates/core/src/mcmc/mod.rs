//! Metropolis dynamics on `kbar`-subsets.
//!
//! The state is a `kbar`-subset `S` and the target law is the Gibbs measure
//! `π_β(S) ∝ exp(β·|E[S]|)`. One step proposes a uniform swap of a member
//! `u ∈ S` for a non-member `v ∉ S` and accepts it with probability
//! `min(1, e^{βΔ})`, where `Δ` is the change in edge count. Rejections are
//! the only self-loops.
//!
//! Randomness per step: an index into the members, an index into the
//! non-members, and a uniform only when `Δ < 0`. The reflected chain rejects
//! proposals that would push the overlap above the band before any uniform
//! is drawn, so with a band covering every overlap it replays [`step`]
//! draw for draw.
//!
//! Small instances (`n ≤ 64`, at most [`EXACT_BUDGET`] subsets) are handled
//! exactly in [`exact`]: the stationary law, overlap marginals, the
//! transition kernel, and well ratios.

mod exact;

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use exact::{
    exact_gibbs, few_ratio, few_ratio_bound, overlap_first_passage, rank, transition_matrix, unrank, ExactGibbs,
    FewRatio, FirstPassage, TransitionMatrix, EXACT_BUDGET,
};

use crate::error::{param, Result};
use crate::model::{ceil_scaled, PlantedGraph, VertexSubset};
use crate::rng::{derive_seed, seeded, Rng};

/// Overlap thresholds of the three bands `A₀`, `A₁`, `A₂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WellPartition {
    pub a0_max: usize,
    pub a1_min: usize,
    pub a1_max: usize,
    pub a2_min: usize,
}

/// `√(kbar / ln(n/kbar))`, the overlap unit of the well boundaries.
pub fn well_scale(n: usize, kbar: usize) -> Result<f64> {
    if kbar == 0 || kbar >= n {
        return Err(param("well scale needs 0 < kbar < n"));
    }
    Ok((kbar as f64 / (n as f64 / kbar as f64).ln()).sqrt())
}

impl WellPartition {
    /// Thresholds `⌊D₁s⌋`, `[⌈D₁s⌉, ⌈D₂s⌉]`, `⌊k/2⌋` with `s` from
    /// [`well_scale`]. The result may be invalid at small sizes; see
    /// [`WellPartition::is_valid`].
    pub fn from_scale(n: usize, k: usize, kbar: usize, d1: f64, d2: f64) -> Result<Self> {
        if !(d1 > 0.0 && d1 < d2 && d2.is_finite()) {
            return Err(param(format!("need 0 < D1 < D2, got D1 = {d1}, D2 = {d2}")));
        }
        let s = well_scale(n, kbar)?;
        Ok(Self {
            a0_max: (d1 * s + 1e-9).floor() as usize,
            a1_min: ceil_scaled(d1 * s, 1) as usize,
            a1_max: ceil_scaled(d2 * s, 1) as usize,
            a2_min: k / 2,
        })
    }

    /// Explicit thresholds, checked for validity.
    pub fn explicit(a0_max: usize, a1_min: usize, a1_max: usize, a2_min: usize) -> Result<Self> {
        let p = Self {
            a0_max,
            a1_min,
            a1_max,
            a2_min,
        };
        if !p.is_valid() {
            return Err(param(format!(
                "invalid well partition: need a0_max < a1_max < a2_min and a1_min <= a1_max, got {p:?}"
            )));
        }
        Ok(p)
    }

    pub fn is_valid(&self) -> bool {
        self.a0_max < self.a1_max && self.a1_max < self.a2_min && self.a1_min <= self.a1_max
    }

    /// The band `A₀ ∪ A₁` is `overlap ≤ a1_max`.
    pub fn in_low_band(&self, overlap: usize) -> bool {
        overlap <= self.a1_max
    }
}

/// Parameters of one chain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MCMCConfig {
    pub beta: f64,
    pub kbar: usize,
    pub t_max: u64,
    pub seed: u64,
    pub d1: f64,
    pub d2: f64,
    /// Recording stride for traces.
    pub stride: u64,
    /// Replaces the thresholds derived from `d1`, `d2` when set.
    pub partition: Option<WellPartition>,
}

impl MCMCConfig {
    pub fn new(beta: f64, kbar: usize, t_max: u64, seed: u64) -> Self {
        Self {
            beta,
            kbar,
            t_max,
            seed,
            d1: 0.25,
            d2: 1.0,
            stride: 1,
            partition: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(param(format!("beta must be finite and >= 0, got {}", self.beta)));
        }
        if !(self.d1 > 0.0 && self.d1 < self.d2) {
            return Err(param("need 0 < D1 < D2"));
        }
        if self.stride == 0 {
            return Err(param("stride must be positive"));
        }
        Ok(())
    }

    /// The explicit partition if set, else the scaled one.
    pub fn well_partition(&self, n: usize, k: usize) -> Result<WellPartition> {
        match self.partition {
            Some(p) => Ok(p),
            None => WellPartition::from_scale(n, k, self.kbar, self.d1, self.d2),
        }
    }
}

/// True when `β ≥ (ln(n/kbar))^{3/2}`, the temperature scale at which the
/// well is expected to trap the chain.
pub fn beta_advisory(n: usize, kbar: usize, beta: f64) -> bool {
    let l = (n as f64 / kbar as f64).ln();
    l > 0.0 && beta >= l.powf(1.5)
}

/// `β·|E[S]|`, the unnormalised log weight of `S`.
pub fn gibbs_log_weight(g: &PlantedGraph, s: &VertexSubset, kbar: usize, beta: f64) -> Result<f64> {
    if s.size() != kbar {
        return Err(param(format!("subset has size {}, expected kbar = {kbar}", s.size())));
    }
    Ok(beta * crate::model::edge_count(g, s)? as f64)
}

/// The running state of a chain.
#[derive(Clone, Debug)]
pub struct Chain<'a> {
    g: &'a PlantedGraph,
    inside: Vec<usize>,
    outside: Vec<usize>,
    mask: Vec<u64>,
    overlap: usize,
    edges: u64,
}

impl<'a> Chain<'a> {
    pub fn new(g: &'a PlantedGraph, init: &VertexSubset) -> Result<Self> {
        let n = g.n();
        if init.members().last().is_some_and(|&v| v >= n) {
            return Err(param("initial subset out of range"));
        }
        if init.size() == 0 || init.size() >= n {
            return Err(param("chain needs 0 < kbar < n"));
        }
        let inside = init.members().to_vec();
        let outside = (0..n).filter(|v| !init.contains(*v)).collect();
        let mask = g.graph().mask_of(&inside);
        let overlap = inside.iter().filter(|&&v| g.is_planted(v)).count();
        let edges = g.graph().edges_within(&inside);
        Ok(Self {
            g,
            inside,
            outside,
            mask,
            overlap,
            edges,
        })
    }

    pub fn overlap(&self) -> usize {
        self.overlap
    }

    pub fn edges(&self) -> u64 {
        self.edges
    }

    pub fn state(&self) -> VertexSubset {
        VertexSubset::from_sorted_unchecked(self.inside.clone())
    }

    /// The state as a single-word mask (`n ≤ 64`).
    pub fn mask_word(&self) -> u64 {
        self.mask[0]
    }

    fn propose(&self, rng: &mut Rng) -> (usize, usize, i64) {
        let i = rng.gen_range(0..self.inside.len());
        let j = rng.gen_range(0..self.outside.len());
        let (u, v) = (self.inside[i], self.outside[j]);
        let graph = self.g.graph();
        let du = graph.degree_into(u, &self.mask) as i64;
        let dv = graph.degree_into(v, &self.mask) as i64;
        let delta = dv - du - graph.has_edge(u, v) as i64;
        (i, j, delta)
    }

    fn accept(beta: f64, delta: i64, rng: &mut Rng) -> bool {
        delta >= 0 || rng.gen::<f64>() < (beta * delta as f64).exp()
    }

    fn apply(&mut self, i: usize, j: usize, delta: i64) {
        let u = self.inside.remove(i);
        let v = self.outside.remove(j);
        let at = self.inside.partition_point(|&x| x < v);
        self.inside.insert(at, v);
        let at = self.outside.partition_point(|&x| x < u);
        self.outside.insert(at, u);
        self.mask[u / 64] &= !(1 << (u % 64));
        self.mask[v / 64] |= 1 << (v % 64);
        self.overlap = self.overlap + self.g.is_planted(v) as usize - self.g.is_planted(u) as usize;
        self.edges = (self.edges as i64 + delta) as u64;
    }

    /// One Metropolis step; returns whether the proposal was accepted.
    pub fn step(&mut self, beta: f64, rng: &mut Rng) -> bool {
        let (i, j, delta) = self.propose(rng);
        if Self::accept(beta, delta, rng) {
            self.apply(i, j, delta);
            true
        } else {
            false
        }
    }

    /// One step of the chain reflected at overlap `a1_max`.
    pub fn reflected_step(&mut self, beta: f64, a1_max: usize, rng: &mut Rng) -> bool {
        let (i, j, delta) = self.propose(rng);
        let (u, v) = (self.inside[i], self.outside[j]);
        let next = self.overlap + self.g.is_planted(v) as usize - self.g.is_planted(u) as usize;
        if next > a1_max {
            return false;
        }
        if Self::accept(beta, delta, rng) {
            self.apply(i, j, delta);
            true
        } else {
            false
        }
    }
}

/// One Metropolis step from `s`.
pub fn step(g: &PlantedGraph, s: &VertexSubset, beta: f64, rng: &mut Rng) -> Result<VertexSubset> {
    let mut c = Chain::new(g, s)?;
    c.step(beta, rng);
    Ok(c.state())
}

/// One reflected step from `s`, which must lie in `A₀ ∪ A₁`.
pub fn reflected_step(
    g: &PlantedGraph,
    s: &VertexSubset,
    beta: f64,
    part: &WellPartition,
    rng: &mut Rng,
) -> Result<VertexSubset> {
    let mut c = Chain::new(g, s)?;
    if c.overlap() > part.a1_max {
        return Err(param(format!(
            "start overlap {} is above the band limit {}",
            c.overlap(),
            part.a1_max
        )));
    }
    c.reflected_step(beta, part.a1_max, rng);
    Ok(c.state())
}

/// One recorded sample of a trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub t: u64,
    pub overlap: usize,
    pub edges: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainTrace {
    pub steps: Vec<TraceStep>,
    pub hit_time: Option<u64>,
    pub t_max: u64,
    pub accepted: u64,
    pub final_state: VertexSubset,
    /// Reflected burn-in used to draw the initial state, if any.
    pub burn_in: Option<u64>,
}

impl ChainTrace {
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,overlap,edges")?;
        for s in &self.steps {
            writeln!(out, "{},{},{}", s.t, s.overlap, s.edges)?;
        }
        Ok(())
    }

    /// Time average of the recorded overlaps.
    pub fn mean_overlap(&self) -> f64 {
        self.steps.iter().map(|s| s.overlap as f64).sum::<f64>() / self.steps.len() as f64
    }
}

/// Runs `cfg.t_max` steps from `init`.
pub fn run_chain(g: &PlantedGraph, cfg: &MCMCConfig, init: &VertexSubset) -> Result<ChainTrace> {
    run_chain_until(g, cfg, init, |_, _| false)
}

/// Runs until `stop(overlap, edges)` holds after a step, or `cfg.t_max`
/// steps. The step at which `stop` first holds is the trace's `hit_time`.
pub fn run_chain_until(
    g: &PlantedGraph,
    cfg: &MCMCConfig,
    init: &VertexSubset,
    stop: impl FnMut(usize, u64) -> bool,
) -> Result<ChainTrace> {
    let mut rng = seeded(cfg.seed);
    run_with(g, cfg, init, &mut rng, stop)
}

fn run_with(
    g: &PlantedGraph,
    cfg: &MCMCConfig,
    init: &VertexSubset,
    rng: &mut Rng,
    mut stop: impl FnMut(usize, u64) -> bool,
) -> Result<ChainTrace> {
    cfg.validate()?;
    if init.size() != cfg.kbar {
        return Err(param(format!(
            "initial subset has size {}, expected {}",
            init.size(),
            cfg.kbar
        )));
    }
    let mut c = Chain::new(g, init)?;
    let mut steps = vec![TraceStep {
        t: 0,
        overlap: c.overlap(),
        edges: c.edges(),
    }];
    let mut accepted = 0;
    let mut hit_time = None;
    let mut t = 0;
    while t < cfg.t_max {
        t += 1;
        accepted += c.step(cfg.beta, rng) as u64;
        let hit = stop(c.overlap(), c.edges());
        if hit || t % cfg.stride == 0 || t == cfg.t_max {
            steps.push(TraceStep {
                t,
                overlap: c.overlap(),
                edges: c.edges(),
            });
        }
        if hit {
            hit_time = Some(t);
            break;
        }
    }
    Ok(ChainTrace {
        steps,
        hit_time,
        t_max: cfg.t_max,
        accepted,
        final_state: c.state(),
        burn_in: None,
    })
}

/// Empirical occupation law of a chain over all `kbar`-subsets, indexed by
/// [`rank`]. Requires `n ≤ 64`.
pub fn occupation(g: &PlantedGraph, init: &VertexSubset, beta: f64, steps: u64, seed: u64) -> Result<Vec<f64>> {
    let n = g.n();
    if n > 64 {
        return Err(param("occupation counts need n <= 64"));
    }
    let size = exact::binom(n as u64, init.size() as u64) as usize;
    let mut counts = vec![0u64; size];
    let mut c = Chain::new(g, init)?;
    let mut rng = seeded(seed);
    for _ in 0..steps {
        c.step(beta, &mut rng);
        counts[rank(c.mask_word()) as usize] += 1;
    }
    Ok(counts.iter().map(|&x| x as f64 / steps as f64).collect())
}

/// Total variation distance between two laws on the same index set.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Draws from `π_β(· | overlap ≤ a1_max)` by inverting its CDF.
#[derive(Clone, Debug)]
pub struct ConditionalSampler {
    kbar: usize,
    ranks: Vec<u32>,
    cdf: Vec<f64>,
}

impl ConditionalSampler {
    pub fn new(exact: &ExactGibbs, a1_max: usize) -> Result<Self> {
        let mut ranks = Vec::new();
        let mut cdf = Vec::new();
        let mut acc = 0.0;
        let top = (0..exact.len())
            .filter(|&r| exact.overlap_at(r) <= a1_max)
            .map(|r| exact.ln_prob(r))
            .fold(f64::NEG_INFINITY, f64::max);
        for r in 0..exact.len() {
            if exact.overlap_at(r) <= a1_max {
                acc += (exact.ln_prob(r) - top).exp();
                ranks.push(r as u32);
                cdf.push(acc);
            }
        }
        if ranks.is_empty() {
            return Err(param("the band overlap <= a1_max is empty"));
        }
        cdf.iter_mut().for_each(|x| *x /= acc);
        Ok(Self {
            kbar: exact.kbar,
            ranks,
            cdf,
        })
    }

    /// Rank of the drawn subset.
    pub fn sample_rank(&self, rng: &mut Rng) -> u64 {
        let u: f64 = rng.gen();
        let i = self.cdf.partition_point(|&c| c <= u).min(self.cdf.len() - 1);
        self.ranks[i] as u64
    }

    pub fn sample(&self, rng: &mut Rng) -> VertexSubset {
        let mask = unrank(self.sample_rank(rng), self.kbar as u32);
        let members = (0..64).filter(|v| mask >> v & 1 == 1).collect();
        VertexSubset::from_sorted_unchecked(members)
    }
}

/// An initial state and, in burn-in mode, the number of reflected steps run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitDraw {
    pub state: VertexSubset,
    pub burn_in: Option<u64>,
}

/// Reflected burn-in length used when exact sampling is infeasible.
pub fn default_burn_in(n: usize, kbar: usize) -> u64 {
    50 * (kbar * (n - kbar)) as u64
}

/// A draw from `π_β(· | A₀ ∪ A₁)`: exact when the subsets can be
/// enumerated, otherwise the end of a reflected run of
/// [`default_burn_in`] steps.
pub fn init_conditional(g: &PlantedGraph, kbar: usize, beta: f64, part: &WellPartition, seed: u64) -> Result<InitDraw> {
    g.params(kbar)?;
    let n = g.n();
    if n <= 64 && exact::binom(n as u64, kbar as u64) <= EXACT_BUDGET {
        let ex = exact_gibbs(g, kbar, beta, EXACT_BUDGET)?;
        let sampler = ConditionalSampler::new(&ex, part.a1_max)?;
        let mut rng = seeded(seed);
        return Ok(InitDraw {
            state: sampler.sample(&mut rng),
            burn_in: None,
        });
    }
    init_burn_in(g, kbar, beta, part, seed, default_burn_in(n, kbar))
}

/// Burn-in mode of [`init_conditional`]: a uniform subset of lowest
/// possible overlap, then `steps` reflected steps.
pub fn init_burn_in(
    g: &PlantedGraph,
    kbar: usize,
    beta: f64,
    part: &WellPartition,
    seed: u64,
    steps: u64,
) -> Result<InitDraw> {
    let p = g.params(kbar)?;
    let floor = p.overlap_floor() as usize;
    if floor > part.a1_max {
        return Err(param(format!(
            "every {kbar}-subset has overlap >= {floor} > a1_max = {}",
            part.a1_max
        )));
    }
    let mut rng = seeded(seed);
    let outside = g.non_planted();
    let planted = g.planted().members();
    let mut members = Vec::with_capacity(kbar);
    members.extend(
        rand::seq::index::sample(&mut rng, outside.len(), kbar - floor)
            .into_iter()
            .map(|i| outside[i]),
    );
    members.extend(
        rand::seq::index::sample(&mut rng, planted.len(), floor)
            .into_iter()
            .map(|i| planted[i]),
    );
    let start = VertexSubset::new(members, g.n())?;
    let mut c = Chain::new(g, &start)?;
    for _ in 0..steps {
        c.reflected_step(beta, part.a1_max, &mut rng);
    }
    Ok(InitDraw {
        state: c.state(),
        burn_in: Some(steps),
    })
}

/// First step at which the overlap exceeds `a1_max`, started from
/// [`init_conditional`]. The initial state uses stream 0 of `cfg.seed` and
/// the dynamics stream 1.
pub fn hitting_time(g: &PlantedGraph, cfg: &MCMCConfig) -> Result<ChainTrace> {
    cfg.validate()?;
    let part = cfg.well_partition(g.n(), g.k())?;
    if !part.is_valid() {
        return Err(param(format!(
            "well partition {part:?} is invalid at n = {}, k = {}, kbar = {}; set explicit thresholds",
            g.n(),
            g.k(),
            cfg.kbar
        )));
    }
    let init = init_conditional(g, cfg.kbar, cfg.beta, &part, derive_seed(cfg.seed, 0))?;
    let mut rng = seeded(derive_seed(cfg.seed, 1));
    let mut trace = run_with(g, cfg, &init.state, &mut rng, |z, _| z > part.a1_max)?;
    trace.burn_in = init.burn_in;
    Ok(trace)
}

/// Hitting times of `replicas` independent runs; replica `r` uses seed
/// `derive_seed(cfg.seed, r)`. `None` marks a run censored at `t_max`.
pub fn hitting_times(g: &PlantedGraph, cfg: &MCMCConfig, replicas: u64) -> Result<Vec<Option<u64>>> {
    (0..replicas)
        .into_par_iter()
        .map(|r| {
            let mut c = *cfg;
            c.seed = derive_seed(cfg.seed, r);
            c.stride = c.t_max.max(1);
            hitting_time(g, &c).map(|t| t.hit_time)
        })
        .collect()
}

/// Median with censored entries counted as `+∞`; the lower median for an
/// even count. `None` when the median itself is censored.
pub fn censored_median(times: &[Option<u64>]) -> Option<u64> {
    if times.is_empty() {
        return None;
    }
    let mut v: Vec<u64> = times.iter().map(|t| t.unwrap_or(u64::MAX)).collect();
    v.sort_unstable();
    let m = v[(v.len() - 1) / 2];
    (m != u64::MAX).then_some(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{edge_count, overlap, sample_planted};

    fn first_subset(kbar: usize) -> VertexSubset {
        VertexSubset::from_sorted_unchecked((0..kbar).collect())
    }

    #[test]
    fn partition_thresholds() {
        // s = √(5/ln 100) ≈ 1.0419
        let p = WellPartition::from_scale(500, 12, 5, 1.0, 3.0).unwrap();
        assert_eq!(
            p,
            WellPartition {
                a0_max: 1,
                a1_min: 2,
                a1_max: 4,
                a2_min: 6
            }
        );
        assert!(p.is_valid());
        let small = WellPartition::from_scale(12, 4, 4, 0.25, 1.0).unwrap();
        assert!(!small.is_valid());
        assert!(WellPartition::explicit(0, 1, 1, 2).is_ok());
        assert!(WellPartition::explicit(1, 1, 1, 2).is_err());
    }

    #[test]
    fn log_weight() {
        let g = sample_planted(16, 5, 2).unwrap();
        let s = g.planted().clone();
        assert_eq!(gibbs_log_weight(&g, &s, 5, 0.0).unwrap(), 0.0);
        assert_eq!(gibbs_log_weight(&g, &s, 5, 1.5).unwrap(), 15.0);
        assert!(gibbs_log_weight(&g, &s, 4, 1.0).is_err());
    }

    #[test]
    fn chain_bookkeeping_matches_recount() {
        let g = sample_planted(20, 5, 11).unwrap();
        let mut c = Chain::new(&g, &first_subset(6)).unwrap();
        let mut rng = seeded(3);
        for _ in 0..2000 {
            c.step(0.7, &mut rng);
            let s = c.state();
            assert_eq!(c.edges(), edge_count(&g, &s).unwrap());
            assert_eq!(c.overlap(), overlap(&g, &s).unwrap());
        }
    }

    #[test]
    fn acceptance_frequency_matches_metropolis_rule() {
        // n=10, kbar=4, β=1: one fixed state, one fixed swap
        let g = sample_planted(10, 3, 4).unwrap();
        let s = first_subset(4);
        let c = Chain::new(&g, &s).unwrap();
        let mut rng = seeded(9);
        // pick a swap with Δ < 0 from the available ones
        let mut found = None;
        for i in 0..4 {
            for j in 0..6 {
                let (u, v) = (c.inside[i], c.outside[j]);
                let mask = g.graph().mask_of(c.inside.as_slice());
                let d = g.graph().degree_into(v, &mask) as i64
                    - g.graph().degree_into(u, &mask) as i64
                    - g.graph().has_edge(u, v) as i64;
                if d < 0 && found.is_none() {
                    found = Some(d);
                }
            }
        }
        let delta = found.expect("instance has a decreasing swap");
        let p = (delta as f64).exp();
        let trials = 100_000;
        let hits = (0..trials).filter(|_| Chain::accept(1.0, delta, &mut rng)).count();
        let sd = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((hits as f64 / trials as f64 - p).abs() < 3.0 * sd);
        assert!(Chain::accept(1.0, 0, &mut rng));
    }

    #[test]
    fn zero_steps_keeps_initial_state() {
        let g = sample_planted(12, 4, 1).unwrap();
        let cfg = MCMCConfig::new(1.0, 4, 0, 5);
        let t = run_chain(&g, &cfg, &first_subset(4)).unwrap();
        assert_eq!(t.steps.len(), 1);
        assert_eq!(t.final_state, first_subset(4));
        assert!(run_chain(&g, &cfg, &first_subset(3)).is_err());
    }

    #[test]
    fn traces_are_deterministic() {
        let g = sample_planted(30, 6, 8).unwrap();
        let mut cfg = MCMCConfig::new(0.8, 7, 5000, 77);
        cfg.stride = 10;
        let a = run_chain(&g, &cfg, &first_subset(7)).unwrap();
        let b = run_chain(&g, &cfg, &first_subset(7)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.steps.len(), 501);
    }

    #[test]
    fn infinite_temperature_overlap_mean() {
        // uniform subsets have mean overlap k·kbar/n = 2
        let g = sample_planted(20, 5, 6).unwrap();
        let cfg = MCMCConfig::new(0.0, 8, 200_000, 12);
        let t = run_chain(&g, &cfg, &first_subset(8)).unwrap();
        assert_eq!(t.accepted, 200_000);
        let mean = t.mean_overlap();
        assert!((mean - 2.0).abs() < 0.1, "mean overlap {mean}");
    }

    #[test]
    fn cold_chain_stays_on_planted_clique() {
        let g = sample_planted(16, 6, 21).unwrap();
        let cfg = MCMCConfig::new(40.0, 6, 20_000, 3);
        let t = run_chain(&g, &cfg, g.planted()).unwrap();
        assert!(t.steps.iter().all(|s| s.overlap == 6 && s.edges == 15));
    }

    #[test]
    fn reflected_chain_respects_band() {
        let g = sample_planted(14, 5, 2).unwrap();
        let part = WellPartition::explicit(0, 1, 1, 2).unwrap();
        let mut s = VertexSubset::new(g.non_planted()[..5].to_vec(), 14).unwrap();
        let mut rng = seeded(1);
        for _ in 0..5000 {
            s = reflected_step(&g, &s, 2.0, &part, &mut rng).unwrap();
            assert!(overlap(&g, &s).unwrap() <= 1);
        }
        let high = g.planted().clone();
        assert!(reflected_step(&g, &high, 1.0, &part, &mut rng).is_err());
    }

    #[test]
    fn full_band_replays_plain_chain() {
        let g = sample_planted(14, 4, 5).unwrap();
        let mut a = Chain::new(&g, &first_subset(5)).unwrap();
        let mut b = a.clone();
        let (mut r1, mut r2) = (seeded(4), seeded(4));
        for _ in 0..3000 {
            a.step(1.3, &mut r1);
            b.reflected_step(1.3, 4, &mut r2);
            assert_eq!(a.state(), b.state());
        }
        let mut s = first_subset(5);
        let mut r3 = seeded(4);
        let mut c = Chain::new(&g, &s).unwrap();
        let mut r4 = seeded(4);
        for _ in 0..200 {
            s = step(&g, &s, 1.3, &mut r3).unwrap();
            c.step(1.3, &mut r4);
            assert_eq!(s, c.state());
        }
    }

    #[test]
    fn conditional_sampler_law() {
        let g = sample_planted(12, 4, 3).unwrap();
        let ex = exact_gibbs(&g, 4, 1.0, EXACT_BUDGET).unwrap();
        let sampler = ConditionalSampler::new(&ex, 1).unwrap();
        let mut rng = seeded(8);
        let draws = 100_000;
        let mut emp = vec![0.0; ex.len()];
        for _ in 0..draws {
            emp[sampler.sample_rank(&mut rng) as usize] += 1.0 / draws as f64;
        }
        let mass: f64 = (0..ex.len())
            .filter(|&r| ex.overlap_at(r) <= 1)
            .map(|r| ex.ln_prob(r).exp())
            .sum();
        let target: Vec<f64> = (0..ex.len())
            .map(|r| {
                if ex.overlap_at(r) <= 1 {
                    ex.ln_prob(r).exp() / mass
                } else {
                    0.0
                }
            })
            .collect();
        assert!(total_variation(&emp, &target) < 0.02);
    }

    #[test]
    fn burn_in_init_stays_low() {
        let g = sample_planted(40, 6, 9).unwrap();
        let part = WellPartition::explicit(0, 1, 1, 3).unwrap();
        for seed in 0..20 {
            let d = init_burn_in(&g, 8, 1.0, &part, seed, 500).unwrap();
            assert!(overlap(&g, &d.state).unwrap() <= 1);
            assert_eq!(d.burn_in, Some(500));
        }
    }

    #[test]
    fn censored_median_rules() {
        assert_eq!(censored_median(&[Some(3), None, Some(1)]), Some(3));
        assert_eq!(censored_median(&[Some(3), None, None]), None);
        assert_eq!(censored_median(&[Some(4), Some(2), Some(9), Some(1)]), Some(2));
        assert_eq!(censored_median(&[]), None);
    }

    #[test]
    fn zero_beta_hitting_time_near_first_passage() {
        let g = sample_planted(12, 4, 2).unwrap();
        let mut cfg = MCMCConfig::new(0.0, 4, 1_000_000, 31);
        cfg.partition = Some(WellPartition::explicit(0, 1, 1, 2).unwrap());
        let times = hitting_times(&g, &cfg, 100).unwrap();
        let med = censored_median(&times).unwrap() as f64;
        let fp = overlap_first_passage(12, 4, 4, 1).unwrap();
        let r = med / fp.median as f64;
        assert!((0.5..=2.0).contains(&r), "median {med} vs exact {}", fp.median);
    }

    #[test]
    fn advisory_threshold() {
        // (ln 4)^1.5 ≈ 1.632
        assert!(!beta_advisory(400, 100, 1.6));
        assert!(beta_advisory(400, 100, 1.7));
    }
}
