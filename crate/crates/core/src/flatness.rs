//! `(γ,δ)`-flatness of `K`-vertex graphs.
//!
//! A graph is flat when it has exactly `⌈γC(K,2)⌉` edges and every
//! `ℓ`-subset with `2 ≤ ℓ ≤ K − 1` spans at most `⌈γC(ℓ,2)⌉ + D_K(ℓ,δ)`
//! edges. Subsets of size `K` are not checked; the edge count condition
//! already covers them.

use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, param, Result};
use crate::landscape::local_search_graph;
use crate::model::{ceil_scaled, pairs, Graph, VertexSubset};
use crate::numerics::ln_choose;
use crate::rng::{self, derive_seed};

/// Largest `K` accepted by the exhaustive checker.
pub const EXHAUSTIVE_MAX_K: usize = 22;

/// `D_K(ℓ,δ) = √(2γ(c+δ)·min(C(K,2)−C(ℓ,2), C(ℓ,2))·(ln C(K,ℓ) + 2 ln K))`
/// with `c = 2` for `ℓ < 2K/3` and `c = 1` otherwise.
///
/// `γ = 1` is accepted so that complete graphs can be checked.
pub fn dk_bound(k: usize, ell: usize, delta: f64, gamma: f64) -> Result<f64> {
    if ell > k || k == 0 {
        return Err(domain(format!("need 0 <= l <= K, got l={ell} K={k}")));
    }
    if !(delta > 0.0 && delta < 1.0) || !(gamma > 0.0 && gamma <= 1.0) {
        return Err(domain(format!(
            "need delta in (0,1) and gamma in (0,1], got delta={delta} gamma={gamma}"
        )));
    }
    let (ck, cl) = (pairs(k as u64), pairs(ell as u64));
    let m = (ck - cl).min(cl) as f64;
    let coef = if 3 * ell < 2 * k { 2.0 + delta } else { 1.0 + delta };
    let logs = ln_choose(k as u64, ell as u64) + 2.0 * (k as f64).ln();
    Ok((2.0 * gamma * coef * m * logs).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckMode {
    Exhaustive,
    /// `count` uniform subsets per size plus local search witnesses.
    Sampled {
        count: u64,
        seed: u64,
    },
}

impl std::str::FromStr for CheckMode {
    type Err = crate::Error;

    /// `exhaustive`, `sampled:<count>` or `sampled:<count>:<seed>`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "exhaustive" {
            return Ok(CheckMode::Exhaustive);
        }
        let mut parts = s.split(':');
        if parts.next() == Some("sampled") {
            let count = parts.next().and_then(|c| c.parse().ok());
            let seed = match parts.next() {
                Some(x) => x.parse().ok(),
                None => Some(0),
            };
            if let (Some(count), Some(seed), None) = (count, seed, parts.next()) {
                return Ok(CheckMode::Sampled { count, seed });
            }
        }
        Err(param(format!(
            "bad mode `{s}`, expected exhaustive or sampled:<count>[:<seed>]"
        )))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub ell: usize,
    pub subset: VertexSubset,
    pub edges: u64,
    /// `edges − ⌈γC(ℓ,2)⌉ − D_K(ℓ,δ)`, positive.
    pub excess: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatnessReport {
    #[serde(rename = "K")]
    pub k: usize,
    pub gamma: f64,
    pub delta: f64,
    pub is_flat: bool,
    pub edge_target: u64,
    pub edge_total: u64,
    /// `false` when `|E| ≠ ⌈γC(K,2)⌉`, a reason for failure of its own.
    pub edge_count_ok: bool,
    /// The worst violation for each subset size that has one, by `ℓ`.
    pub violations: Vec<Violation>,
    /// Violating subsets found in total.
    pub violation_count: u64,
    pub mode: CheckMode,
}

/// Per-size limits `⌈γC(ℓ,2)⌉ + D_K(ℓ,δ)`, indexed by `ℓ`.
fn limits(k: usize, gamma: f64, delta: f64) -> Result<Vec<f64>> {
    (0..=k)
        .map(|l| Ok(ceil_scaled(gamma, pairs(l as u64)) as f64 + dk_bound(k, l, delta, gamma)?))
        .collect()
}

struct Worst {
    per_ell: Vec<Option<Violation>>,
    count: u64,
}

impl Worst {
    fn new(k: usize) -> Self {
        Self {
            per_ell: vec![None; k + 1],
            count: 0,
        }
    }

    /// Keeps the largest excess per size, the lexicographically smallest
    /// subset among ties.
    fn offer(&mut self, v: Violation) {
        self.count += 1;
        let slot = &mut self.per_ell[v.ell];
        let better = match slot {
            None => true,
            Some(cur) => v.excess > cur.excess || (v.excess == cur.excess && v.subset < cur.subset),
        };
        if better {
            *slot = Some(v);
        }
    }
}

/// Checks `(γ,δ)`-flatness of `g` (with `K = g.n()`).
pub fn is_flat(g: &Graph, gamma: f64, delta: f64, mode: CheckMode) -> Result<FlatnessReport> {
    let k = g.n();
    if k < 2 {
        return Err(param("flatness needs K >= 2"));
    }
    let lim = limits(k, gamma, delta)?;
    let target = ceil_scaled(gamma, pairs(k as u64));
    let total = g.edge_total();
    let worst = match mode {
        CheckMode::Exhaustive => exhaustive(g, &lim)?,
        CheckMode::Sampled { count, seed } => sampled(g, &lim, count, seed)?,
    };
    let violations: Vec<Violation> = worst.per_ell.into_iter().flatten().collect();
    Ok(FlatnessReport {
        k,
        gamma,
        delta,
        is_flat: total == target && violations.is_empty(),
        edge_target: target,
        edge_total: total,
        edge_count_ok: total == target,
        violations,
        violation_count: worst.count,
        mode,
    })
}

fn violation(g: &Graph, lim: &[f64], members: Vec<usize>, edges: u64) -> Option<Violation> {
    let ell = members.len();
    let e = edges as f64;
    (e > lim[ell]).then(|| Violation {
        ell,
        excess: e - lim[ell],
        edges,
        subset: VertexSubset::new(members, g.n()).expect("members in range"),
    })
}

/// All `2^K` subsets through `e(S) = e(S ∖ {v}) + |N(v) ∩ S|`, `v` the
/// lowest vertex of `S`.
fn exhaustive(g: &Graph, lim: &[f64]) -> Result<Worst> {
    let k = g.n();
    if k > EXHAUSTIVE_MAX_K {
        return Err(param(format!(
            "exhaustive flatness check supports K <= {EXHAUSTIVE_MAX_K}, got {k}"
        )));
    }
    let rows: Vec<u32> = (0..k).map(|v| g.row(v)[0] as u32).collect();
    let full = 1usize << k;
    let mut edges = vec![0u8; full];
    let mut worst = Worst::new(k);
    for s in 1..full {
        let v = s.trailing_zeros() as usize;
        let rest = s & (s - 1);
        let e = edges[rest] as u32 + (rows[v] & rest as u32).count_ones();
        edges[s] = e as u8;
        let ell = s.count_ones() as usize;
        if ell >= 2 && ell < k && e as f64 > lim[ell] {
            let members: Vec<usize> = (0..k).filter(|&u| s >> u & 1 == 1).collect();
            if let Some(viol) = violation(g, lim, members, e as u64) {
                worst.offer(viol);
            }
        }
    }
    Ok(worst)
}

fn sampled(g: &Graph, lim: &[f64], count: u64, seed: u64) -> Result<Worst> {
    let k = g.n();
    let found: Vec<Vec<Violation>> = (2..k)
        .into_par_iter()
        .map(|ell| -> Result<Vec<Violation>> {
            let mut out = Vec::new();
            let mut r = rng::seeded(derive_seed(seed, ell as u64));
            for _ in 0..count {
                let mut members = index::sample(&mut r, k, ell).into_vec();
                members.sort_unstable();
                let e = g.edges_within(&members);
                out.extend(violation(g, lim, members, e));
            }
            let dense = local_search_graph(g, ell, 4, derive_seed(seed ^ 0x5eed, ell as u64))?;
            out.extend(violation(g, lim, dense.witness.members().to_vec(), dense.value));
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut worst = Worst::new(k);
    for v in found.into_iter().flatten() {
        worst.offer(v);
    }
    Ok(worst)
}

/// Uniform graph on `K` vertices with exactly `⌈γC(K,2)⌉` edges.
///
/// Pairs are indexed `(1,0), (2,0), (2,1), …` and the edge set is a uniform
/// subset of indices drawn from the seeded stream.
pub fn sample_conditioned(k: usize, gamma: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(param(format!("gamma must lie in [0,1], got {gamma}")));
    }
    let total = pairs(k as u64) as usize;
    let m = ceil_scaled(gamma, total as u64) as usize;
    let mut r = rng::seeded(seed);
    let mut g = Graph::empty(k);
    for idx in index::sample(&mut r, total, m) {
        let (u, v) = unpair(idx);
        g.add_edge(u, v);
    }
    Ok(g)
}

/// Inverse of `(u, v) ↦ u(u−1)/2 + v` for `v < u`.
fn unpair(idx: usize) -> (usize, usize) {
    let mut u = ((((8 * idx + 1) as f64).sqrt() + 1.0) / 2.0) as usize;
    while u * (u - 1) / 2 > idx {
        u -= 1;
    }
    while (u + 1) * u / 2 <= idx {
        u += 1;
    }
    (u, idx - u * (u - 1) / 2)
}

/// `γ = h⁻¹(ln 2 − ln C(n,K)/C(K,2))`, the density scale at which a
/// `K`-subgraph of `G(n, 1/2)` is expected to exist.
pub fn density_scale(n: u64, k: u64) -> Result<f64> {
    Ok(crate::landscape::er_prediction(n, k)?.first_order / pairs(k) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    // 60-digit evaluations of the formula, rounded.
    const DK_60_30: f64 = 228.188_359_374_594_92;
    const DK_60_45: f64 = 202.414_302_330_374_02;

    #[test]
    fn dk_reference_and_edges() {
        assert!((dk_bound(60, 30, 0.1, 0.6).unwrap() - DK_60_30).abs() < 1e-9);
        assert!((dk_bound(60, 45, 0.1, 0.6).unwrap() - DK_60_45).abs() < 1e-9);
        for ell in [0, 1, 60] {
            assert_eq!(dk_bound(60, ell, 0.1, 0.6).unwrap(), 0.0);
        }
        assert!(dk_bound(10, 11, 0.1, 0.6).is_err());
        assert!(dk_bound(10, 5, 0.0, 0.6).is_err());
        assert!(dk_bound(10, 5, 0.1, 0.0).is_err());
    }

    #[test]
    fn dk_min_term_symmetry() {
        // K = 7: C(7,2) − C(6,2) = 6 = C(4,2), so ℓ = 4 and ℓ' = 6 share the
        // min factor once the coefficient and log factor are divided out.
        let k = 7;
        let strip = |l: usize| {
            let coef = if 3 * l < 2 * k { 2.1 } else { 1.1 };
            let logs = ln_choose(k as u64, l as u64) + 2.0 * (k as f64).ln();
            dk_bound(k, l, 0.1, 0.5).unwrap().powi(2) / (2.0 * 0.5 * coef * logs)
        };
        assert!((strip(4) - strip(6)).abs() < 1e-9);
        assert!((strip(4) - 6.0).abs() < 1e-9);
    }

    #[test]
    fn unpair_inverts_pair_index() {
        let mut idx = 0;
        for u in 1..40 {
            for v in 0..u {
                assert_eq!(unpair(idx), (u, v));
                idx += 1;
            }
        }
    }

    #[test]
    fn conditioned_extremes() {
        let g = sample_conditioned(9, 1.0, 3).unwrap();
        assert_eq!(g, Graph::complete(9));
        let g = sample_conditioned(9, 0.0, 3).unwrap();
        assert_eq!(g.edge_total(), 0);
        let g = sample_conditioned(10, 0.5, 1).unwrap();
        assert_eq!(g.edge_total(), 23);
        assert_eq!(g, sample_conditioned(10, 0.5, 1).unwrap());
        assert!(sample_conditioned(10, 1.5, 1).is_err());
    }

    #[test]
    fn conditioned_pair_frequency() {
        // Each pair is present with probability 23/45.
        let runs = 10_000u64;
        let mut hits = 0u64;
        for s in 0..runs {
            hits += sample_conditioned(10, 0.5, s).unwrap().has_edge(7, 2) as u64;
        }
        let p = 23.0 / 45.0;
        let sigma = (p * (1.0 - p) / runs as f64).sqrt();
        assert!((hits as f64 / runs as f64 - p).abs() <= 3.0 * sigma);
    }

    #[test]
    fn complete_graph_is_flat_at_full_density() {
        let g = Graph::complete(12);
        let r = is_flat(&g, 1.0, 0.2, CheckMode::Exhaustive).unwrap();
        assert!(r.is_flat && r.edge_count_ok && r.violations.is_empty());
    }

    #[test]
    fn planted_clique_is_a_violation() {
        // Sparse background with a 10-clique on vertices 0..10.
        let k = 20;
        let mut g = sample_conditioned(k, 0.1, 5).unwrap();
        for u in 0..10 {
            for v in 0..u {
                g.add_edge(u, v);
            }
        }
        let gamma = 0.1;
        let lim = ceil_scaled(gamma, 45) as f64 + dk_bound(k, 10, 0.2, gamma).unwrap();
        assert!(lim < 45.0);
        let r = is_flat(&g, gamma, 0.2, CheckMode::Exhaustive).unwrap();
        assert!(!r.is_flat);
        assert!(r.violations.iter().any(|v| v.ell == 10));
        assert!(r.violations.iter().all(|v| v.excess > 0.0));
        let s = is_flat(&g, gamma, 0.2, CheckMode::Sampled { count: 20, seed: 4 }).unwrap();
        assert!(!s.is_flat);
    }

    #[test]
    fn edge_count_mismatch_is_reported() {
        let mut g = sample_conditioned(10, 0.5, 2).unwrap();
        let (u, v) = (0..10)
            .flat_map(|u| (0..u).map(move |v| (u, v)))
            .find(|&(u, v)| !g.has_edge(u, v))
            .unwrap();
        g.add_edge(u, v);
        let r = is_flat(&g, 0.5, 0.2, CheckMode::Exhaustive).unwrap();
        assert!(!r.edge_count_ok && !r.is_flat);
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("exhaustive".parse::<CheckMode>().unwrap(), CheckMode::Exhaustive);
        assert_eq!(
            "sampled:50".parse::<CheckMode>().unwrap(),
            CheckMode::Sampled { count: 50, seed: 0 }
        );
        assert_eq!(
            "sampled:5:9".parse::<CheckMode>().unwrap(),
            CheckMode::Sampled { count: 5, seed: 9 }
        );
        assert!("sampled".parse::<CheckMode>().is_err());
        assert!("sampled:x".parse::<CheckMode>().is_err());
        assert!(is_flat(&Graph::complete(23), 1.0, 0.2, CheckMode::Exhaustive).is_err());
    }
}
