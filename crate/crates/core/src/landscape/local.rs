//! Swap local search for dense subsets under per-pool size constraints.

use rand::seq::index;
use rand::Rng as _;
use rayon::prelude::*;

use crate::model::Graph;
use crate::rng::{self, derive_seed};

pub(crate) struct Pools<'a> {
    pub graph: &'a Graph,
    pub pools: Vec<Vec<usize>>,
    pub need: Vec<usize>,
}

pub(crate) struct LocalBest {
    pub value: u64,
    pub members: Vec<usize>,
}

fn initial(p: &Pools<'_>, rng: &mut rng::Rng) -> Vec<Vec<usize>> {
    p.pools
        .iter()
        .zip(&p.need)
        .map(|(pool, &need)| {
            index::sample(rng, pool.len(), need)
                .into_iter()
                .map(|i| pool[i])
                .collect()
        })
        .collect()
}

fn flatten(parts: &[Vec<usize>]) -> Vec<usize> {
    let mut all: Vec<usize> = parts.iter().flatten().copied().collect();
    all.sort_unstable();
    all
}

/// Best-improvement swap ascent from `parts`. Equal-value swaps are taken,
/// one chosen uniformly among the ties, while the plateau budget lasts.
fn ascend(p: &Pools<'_>, mut parts: Vec<Vec<usize>>, plateau: usize, rng: &mut rng::Rng) -> LocalBest {
    let g = p.graph;
    let n = g.n();
    let mut inside = vec![false; n];
    for &v in parts.iter().flatten() {
        inside[v] = true;
    }
    let mut mask = g.mask_of(&flatten(&parts));
    // deg[v] = neighbours of v inside the current subset
    let mut deg: Vec<i64> = (0..n).map(|v| g.degree_into(v, &mask) as i64).collect();
    let mut value: i64 = parts.iter().flatten().map(|&v| deg[v]).sum::<i64>() / 2;
    let mut best = LocalBest {
        value: value as u64,
        members: flatten(&parts),
    };
    let mut plateau_left = plateau;
    let mut ties: Vec<(usize, usize, usize)> = Vec::new();
    loop {
        let mut top = i64::MIN;
        ties.clear();
        for (q, pool) in p.pools.iter().enumerate() {
            for (slot, &u) in parts[q].iter().enumerate() {
                for &v in pool {
                    if inside[v] {
                        continue;
                    }
                    let delta = deg[v] - deg[u] - g.has_edge(u, v) as i64;
                    if delta > top {
                        top = delta;
                        ties.clear();
                    }
                    if delta == top {
                        ties.push((q, slot, v));
                    }
                }
            }
        }
        if ties.is_empty() || top < 0 || (top == 0 && plateau_left == 0) {
            break;
        }
        if top == 0 {
            plateau_left -= 1;
        }
        let (q, slot, v) = ties[if ties.len() == 1 {
            0
        } else {
            rng.gen_range(0..ties.len())
        }];
        let u = parts[q][slot];
        parts[q][slot] = v;
        inside[u] = false;
        inside[v] = true;
        mask[u / 64] &= !(1 << (u % 64));
        mask[v / 64] |= 1 << (v % 64);
        for w in 0..n {
            deg[w] += g.has_edge(v, w) as i64 - g.has_edge(u, w) as i64;
        }
        value += top;
        if value as u64 > best.value {
            best = LocalBest {
                value: value as u64,
                members: flatten(&parts),
            };
        }
    }
    best
}

/// Best over `restarts` independent ascents, restart `i` seeded by
/// `derive_seed(seed, i)`. With zero restarts the initial subset of stream
/// 0 is returned unimproved. Ties between restarts go to the lower index.
pub(crate) fn search(p: &Pools<'_>, restarts: u64, seed: u64, plateau: usize) -> LocalBest {
    if restarts == 0 {
        let mut r = rng::seeded(derive_seed(seed, 0));
        let members = flatten(&initial(p, &mut r));
        return LocalBest {
            value: p.graph.edges_within(&members),
            members,
        };
    }
    let runs: Vec<LocalBest> = (0..restarts)
        .into_par_iter()
        .map(|i| {
            let mut r = rng::seeded(derive_seed(seed, i));
            let start = initial(p, &mut r);
            ascend(p, start, plateau, &mut r)
        })
        .collect();
    runs.into_iter()
        .reduce(|a, b| if b.value > a.value { b } else { a })
        .unwrap()
}
