//! Exact densest subset search with per-pool size constraints.
//!
//! Vertices are split into pools (planted and non-planted for overlap
//! constrained problems, a single pool otherwise) and a subset takes a fixed
//! number of vertices from each. The search is a depth-first
//! branch-and-bound over subsets in lexicographic order. At a node with
//! chosen set `S`, `e = |E[S]|` and `r` vertices still to pick, the bound is
//!
//! `e + Σ_pools top-r_p of ( d_S(v) + ½·min(d_R(v), r − 1) )`
//!
//! over remaining candidates `v`, where `d_R` counts neighbours among
//! remaining candidates. Nodes whose bound does not exceed the incumbent are
//! cut, so the first optimum met in lexicographic order is the reported
//! witness.
//!
//! Top-level branches run in parallel, each with its own incumbent seeded
//! by a caller-supplied lower bound. The reduction keeps the largest value
//! and, among equals, the earliest branch, so results do not depend on the
//! worker count.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

use crate::model::Graph;

pub(crate) struct Problem<'a> {
    pub graph: &'a Graph,
    /// Candidate vertices, increasing.
    pub order: Vec<usize>,
    /// Pool index (0 or 1) of each entry of `order`.
    pub pool: Vec<u8>,
    pub need: [usize; 2],
}

pub(crate) enum Outcome {
    Found {
        value: u64,
        members: Vec<usize>,
        nodes: u64,
    },
    /// No subset reaches `lower_bound`.
    Empty,
    OverBudget,
}

struct Shared {
    nodes: AtomicU64,
    abort: AtomicBool,
    budget: u64,
}

struct Dfs<'a> {
    p: &'a Problem<'a>,
    shared: &'a Shared,
    words: usize,
    chosen: Vec<usize>,
    chosen_mask: Vec<u64>,
    best: i64,
    best_set: Option<Vec<usize>>,
    local_nodes: u64,
    scores: [Vec<u32>; 2],
}

impl<'a> Dfs<'a> {
    fn new(p: &'a Problem<'a>, shared: &'a Shared, best: i64) -> Self {
        let words = p.graph.words();
        Self {
            p,
            shared,
            words,
            chosen: Vec::new(),
            chosen_mask: vec![0; words],
            best,
            best_set: None,
            local_nodes: 0,
            scores: [Vec::new(), Vec::new()],
        }
    }

    fn push(&mut self, v: usize) -> u64 {
        let d = self.p.graph.degree_into(v, &self.chosen_mask) as u64;
        self.chosen.push(v);
        self.chosen_mask[v / 64] |= 1 << (v % 64);
        d
    }

    fn pop(&mut self) {
        let v = self.chosen.pop().unwrap();
        self.chosen_mask[v / 64] &= !(1 << (v % 64));
    }

    fn tick(&mut self) -> bool {
        self.local_nodes += 1;
        if self.local_nodes.is_multiple_of(4096) {
            let total = self.shared.nodes.fetch_add(4096, Ordering::Relaxed) + 4096;
            if total > self.shared.budget {
                self.shared.abort.store(true, Ordering::Relaxed);
            }
        }
        !self.shared.abort.load(Ordering::Relaxed)
    }

    /// Upper bound on the best completion (doubled), or `None` when a pool
    /// cannot be filled.
    fn bound2(&mut self, start: usize, left: [usize; 2], edges: u64) -> Option<u64> {
        let r = left[0] + left[1];
        let g = self.p.graph;
        let mut cand = vec![0u64; self.words];
        let mut avail = [0usize; 2];
        for i in start..self.p.order.len() {
            let q = self.p.pool[i] as usize;
            if left[q] > 0 {
                let v = self.p.order[i];
                cand[v / 64] |= 1 << (v % 64);
                avail[q] += 1;
            }
        }
        if avail[0] < left[0] || avail[1] < left[1] {
            return None;
        }
        self.scores[0].clear();
        self.scores[1].clear();
        for i in start..self.p.order.len() {
            let q = self.p.pool[i] as usize;
            if left[q] == 0 {
                continue;
            }
            let v = self.p.order[i];
            let ds = g.degree_into(v, &self.chosen_mask);
            let dr = g.degree_into(v, &cand).min(r as u32 - 1);
            self.scores[q].push(2 * ds + dr);
        }
        let mut total = 2 * edges;
        for q in 0..2 {
            let s = &mut self.scores[q];
            let take = left[q];
            if take == 0 {
                continue;
            }
            if take < s.len() {
                s.select_nth_unstable_by(take - 1, |a, b| b.cmp(a));
            }
            total += s[..take].iter().map(|&x| x as u64).sum::<u64>();
        }
        Some(total)
    }

    fn run(&mut self, start: usize, left: [usize; 2], edges: u64) {
        if left[0] + left[1] == 0 {
            if edges as i64 > self.best {
                self.best = edges as i64;
                self.best_set = Some(self.chosen.clone());
            }
            return;
        }
        if !self.tick() {
            return;
        }
        let Some(b2) = self.bound2(start, left, edges) else {
            return;
        };
        if (b2 / 2) as i64 <= self.best {
            return;
        }
        for i in start..self.p.order.len() {
            let q = self.p.pool[i] as usize;
            if left[q] == 0 {
                continue;
            }
            let v = self.p.order[i];
            let d = self.push(v);
            let mut next = left;
            next[q] -= 1;
            self.run(i + 1, next, edges + d);
            self.pop();
            if self.shared.abort.load(Ordering::Relaxed) {
                return;
            }
        }
    }
}

/// Maximises `|E[S]|` over admissible subsets. Only subsets with at least
/// `lower_bound` edges are reported.
pub(crate) fn maximise(p: &Problem<'_>, lower_bound: u64, budget: u64) -> Outcome {
    let shared = Shared {
        nodes: AtomicU64::new(0),
        abort: AtomicBool::new(false),
        budget,
    };
    let floor = lower_bound as i64 - 1;
    let total_need = p.need[0] + p.need[1];
    if total_need == 0 {
        return Outcome::Found {
            value: 0,
            members: Vec::new(),
            nodes: 1,
        };
    }
    let results: Vec<(i64, Option<Vec<usize>>, u64)> = (0..p.order.len())
        .into_par_iter()
        .map(|i| {
            let q = p.pool[i] as usize;
            let mut dfs = Dfs::new(p, &shared, floor);
            if p.need[q] == 0 {
                return (floor, None, 0);
            }
            dfs.push(p.order[i]);
            let mut left = p.need;
            left[q] -= 1;
            dfs.run(i + 1, left, 0);
            let rem = dfs.local_nodes % 4096;
            let total = shared.nodes.fetch_add(rem, Ordering::Relaxed) + rem;
            if total > shared.budget {
                shared.abort.store(true, Ordering::Relaxed);
            }
            (dfs.best, dfs.best_set, dfs.local_nodes)
        })
        .collect();
    if shared.abort.load(Ordering::Relaxed) {
        return Outcome::OverBudget;
    }
    let nodes = results.iter().map(|r| r.2).sum();
    let mut best: Option<(i64, Vec<usize>)> = None;
    for (value, set, _) in results {
        if let Some(set) = set {
            if best.as_ref().is_none_or(|b| value > b.0) {
                best = Some((value, set));
            }
        }
    }
    match best {
        Some((value, members)) => Outcome::Found {
            value: value as u64,
            members,
            nodes,
        },
        None => Outcome::Empty,
    }
}
