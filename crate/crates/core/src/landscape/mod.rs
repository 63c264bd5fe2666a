//! Densest subgraphs of instances: exact overlap-restricted optima
//! `d_{kbar,k}(G)(z)`, the unrestricted optimum `d_{ER,K}`, swap local
//! search, and the first moment quantities they are compared against.

mod local;
mod search;
mod tail;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::model::{ceil_scaled, pairs, Graph, ModelParams, PlantedGraph, VertexSubset};
use crate::numerics::{a_func, ln_choose, offset_for_deficit};

pub use tail::{binomial_tail_bracket, binomial_tail_log};

/// Default node budget of the exact searches.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Restarts used to seed the exact search with a lower bound.
const SEED_RESTARTS: u64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exhaustive,
    LocalSearch,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Exhaustive => "exhaustive",
            Method::LocalSearch => "local-search",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Method::Exhaustive),
            "local-search" | "local" => Ok(Method::LocalSearch),
            other => Err(param(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensestResult {
    pub value: u64,
    pub witness: VertexSubset,
    pub method: Method,
    pub restarts_used: u64,
    /// Search nodes visited by the exact method.
    pub nodes: u64,
}

fn exact(
    graph: &Graph,
    pools: [&[usize]; 2],
    need: [usize; 2],
    budget: u64,
    what: impl FnOnce() -> String,
) -> Result<DensestResult> {
    let mut order: Vec<(usize, u8)> = pools[0]
        .iter()
        .map(|&v| (v, 0u8))
        .chain(pools[1].iter().map(|&v| (v, 1u8)))
        .collect();
    order.sort_unstable();
    let lb = local::search(
        &local::Pools {
            graph,
            pools: pools.iter().map(|p| p.to_vec()).collect(),
            need: need.to_vec(),
        },
        SEED_RESTARTS,
        0,
        2 * (need[0] + need[1]),
    );
    let problem = search::Problem {
        graph,
        order: order.iter().map(|x| x.0).collect(),
        pool: order.iter().map(|x| x.1).collect(),
        need,
    };
    match search::maximise(&problem, lb.value, budget) {
        search::Outcome::Found { value, members, nodes } => Ok(DensestResult {
            value,
            witness: VertexSubset::from_sorted_unchecked(members),
            method: Method::Exhaustive,
            restarts_used: 0,
            nodes,
        }),
        search::Outcome::Empty => unreachable!("local search value is attainable"),
        search::Outcome::OverBudget => Err(Error::BudgetExceeded { what: what(), budget }),
    }
}

fn check_overlap(g: &PlantedGraph, kbar: usize, z: usize) -> Result<ModelParams> {
    let p = g.params(kbar)?;
    if !p.feasible(z as u64) {
        return Err(param(format!(
            "overlap {z} infeasible for n={} k={} kbar={kbar}",
            g.n(),
            g.k()
        )));
    }
    Ok(p)
}

/// `d_{kbar,k}(G)(z)`: the most edges over `kbar`-subsets meeting the
/// planted clique in exactly `z` vertices, with the lexicographically
/// smallest maximiser. Fails with [`Error::BudgetExceeded`] when the search
/// would visit more than `budget` nodes.
pub fn exact_overlap_densest(g: &PlantedGraph, kbar: usize, z: usize, budget: u64) -> Result<DensestResult> {
    check_overlap(g, kbar, z)?;
    let planted = g.planted().members();
    let rest = g.non_planted();
    exact(g.graph(), [planted, &rest], [z, kbar - z], budget, || {
        format!("overlap {z} densest {kbar}-subgraph (n={})", g.n())
    })
}

/// The most edges over all `kbar`-subsets of a planted instance.
pub fn exact_densest(g: &PlantedGraph, kbar: usize, budget: u64) -> Result<DensestResult> {
    exact_densest_er(g.graph(), kbar, budget)
}

/// `d_{ER,K}(G)`: the most edges over all `K`-subsets of `g`.
pub fn exact_densest_er(g: &Graph, size: usize, budget: u64) -> Result<DensestResult> {
    if size == 0 || size > g.n() {
        return Err(param(format!("need 1 <= K <= n, got K={size} n={}", g.n())));
    }
    let all: Vec<usize> = (0..g.n()).collect();
    exact(g, [&all, &[]], [size, 0], budget, || {
        format!("densest {size}-subgraph (n={})", g.n())
    })
}

/// Swap local search for a dense `kbar`-subset, optionally with overlap
/// fixed to `z` (swaps then stay inside the planted and non-planted parts).
/// Equal-value swaps are allowed up to `2·kbar` times per restart.
pub fn local_search_densest(
    g: &PlantedGraph,
    kbar: usize,
    z: Option<usize>,
    restarts: u64,
    seed: u64,
) -> Result<DensestResult> {
    let pools = match z {
        Some(z) => {
            check_overlap(g, kbar, z)?;
            local::Pools {
                graph: g.graph(),
                pools: vec![g.planted().members().to_vec(), g.non_planted()],
                need: vec![z, kbar - z],
            }
        }
        None => {
            g.params(kbar)?;
            local::Pools {
                graph: g.graph(),
                pools: vec![(0..g.n()).collect()],
                need: vec![kbar],
            }
        }
    };
    Ok(run_local(&pools, restarts, seed, 2 * kbar))
}

/// Swap local search for a dense `size`-subset of a plain graph.
pub fn local_search_graph(g: &Graph, size: usize, restarts: u64, seed: u64) -> Result<DensestResult> {
    if size == 0 || size > g.n() {
        return Err(param(format!("need 1 <= K <= n, got K={size} n={}", g.n())));
    }
    let pools = local::Pools {
        graph: g,
        pools: vec![(0..g.n()).collect()],
        need: vec![size],
    };
    Ok(run_local(&pools, restarts, seed, 2 * size))
}

fn run_local(pools: &local::Pools<'_>, restarts: u64, seed: u64, plateau: usize) -> DensestResult {
    let best = local::search(pools, restarts, seed, plateau);
    DensestResult {
        value: best.value,
        witness: VertexSubset::from_sorted_unchecked(best.members),
        method: Method::LocalSearch,
        restarts_used: restarts,
        nodes: 0,
    }
}

/// First and second order predictions for `d_{ER,K}` of `G(n, 1/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErPrediction {
    pub n: u64,
    #[serde(rename = "K")]
    pub k: u64,
    pub first_order: f64,
    pub second_order: f64,
}

/// `first_order = h⁻¹(ln 2 − ln C(n,K)/C(K,2))·C(K,2)` and
/// `second_order = K²/4 + K^{3/2}·√(ln(n/K))/2`.
///
/// When `ln C(n,K)/C(K,2) > ln 2` (small `K`) the union bound does not rule
/// out a `K`-clique and `first_order` is capped at `C(K,2)`.
pub fn er_prediction(n: u64, k: u64) -> Result<ErPrediction> {
    if k < 2 || k > n {
        return Err(param(format!("need 2 <= K <= n, got K={k} n={n}")));
    }
    let m = pairs(k) as f64;
    let eps = ln_choose(n, k) / m;
    let first_order = m * (0.5 + offset_for_deficit(eps));
    let kf = k as f64;
    let second_order = kf * kf / 4.0 + kf.powf(1.5) * (n as f64 / kf).ln().sqrt() / 2.0;
    Ok(ErPrediction {
        n,
        k,
        first_order,
        second_order,
    })
}

/// Reporting form of the error exponent for `K = n^C`:
/// `max(3/2 − (5/2 − √6)(1 − C)/C, 0)`.
pub fn beta_exponent(c: f64) -> Result<f64> {
    if !(c > 0.0 && c < 1.0) {
        return Err(param(format!("exponent needs C in (0,1), got {c}")));
    }
    Ok((1.5 - (2.5 - 6f64.sqrt()) * (1.0 - c) / c).max(0.0))
}

/// `ln E[Z_{γ,z}] = A(z) + ln P[Bin(M, 1/2) ≥ ⌈γM⌉]` with
/// `M = C(kbar,2) − C(z,2)`: the log expected number of `kbar`-subsets with
/// overlap `z` and at least `C(z,2) + γM` edges.
pub fn first_moment_expectation(p: &ModelParams, z: u64, gamma: f64) -> Result<f64> {
    if !(0.5..=1.0).contains(&gamma) {
        return Err(param(format!("gamma must lie in [1/2, 1], got {gamma}")));
    }
    let a = a_func(p, z)?;
    let m = pairs(p.kbar) - pairs(z);
    Ok(a + binomial_tail_log(m, ceil_scaled(gamma, m)))
}
