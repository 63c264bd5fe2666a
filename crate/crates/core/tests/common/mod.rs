//! Independent reference implementations used by the integration tests.
//!
//! These deliberately share no code paths with the library: subsets are
//! enumerated recursively in lexicographic order, edges are counted pair by
//! pair through `has_edge`, and binomial tails are summed in exact integer
//! arithmetic.

#![allow(dead_code)]

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use plandscape::model::{Graph, PlantedGraph};

/// Calls `f` on every `r`-subset of `items` in lexicographic order.
pub fn for_each_subset(items: &[usize], r: usize, f: &mut impl FnMut(&[usize])) {
    fn go(items: &[usize], r: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == r {
            f(cur);
            return;
        }
        let need = r - cur.len();
        for i in start..=items.len() - need {
            cur.push(items[i]);
            go(items, r, i + 1, cur, f);
            cur.pop();
        }
    }
    if r <= items.len() {
        go(items, r, 0, &mut Vec::with_capacity(r), f);
    }
}

pub fn pair_edges(g: &Graph, s: &[usize]) -> u64 {
    let mut e = 0;
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            e += g.has_edge(s[i], s[j]) as u64;
        }
    }
    e
}

pub fn planted_count(g: &PlantedGraph, s: &[usize]) -> usize {
    s.iter().filter(|&&v| g.planted().members().contains(&v)).count()
}

/// Max edges over `kbar`-subsets with overlap `z` and the lexicographically
/// first maximiser, or `None` when no such subset exists.
pub fn naive_overlap_densest(g: &PlantedGraph, kbar: usize, z: usize) -> Option<(u64, Vec<usize>)> {
    let all: Vec<usize> = (0..g.n()).collect();
    let mut best: Option<(u64, Vec<usize>)> = None;
    for_each_subset(&all, kbar, &mut |s| {
        if planted_count(g, s) == z {
            let e = pair_edges(g.graph(), s);
            if best.as_ref().is_none_or(|b| e > b.0) {
                best = Some((e, s.to_vec()));
            }
        }
    });
    best
}

/// The densest value at every overlap `0..=min(k, kbar)` in one pass.
pub fn naive_d_curve(g: &PlantedGraph, kbar: usize) -> Vec<Option<u64>> {
    let all: Vec<usize> = (0..g.n()).collect();
    let mut best = vec![None; g.k().min(kbar) + 1];
    for_each_subset(&all, kbar, &mut |s| {
        let z = planted_count(g, s);
        let e = pair_edges(g.graph(), s);
        if best[z].is_none_or(|b| e > b) {
            best[z] = Some(e);
        }
    });
    best
}

/// Per-overlap `ln Σ exp(β·edges)` over all `kbar`-subsets, normalised.
pub fn naive_gibbs_marginal(g: &PlantedGraph, kbar: usize, beta: f64) -> Vec<f64> {
    let all: Vec<usize> = (0..g.n()).collect();
    let mut sums = vec![0.0f64; g.k().min(kbar) + 1];
    let top = beta * (kbar * (kbar - 1) / 2) as f64;
    for_each_subset(&all, kbar, &mut |s| {
        sums[planted_count(g, s)] += (beta * pair_edges(g.graph(), s) as f64 - top).exp();
    });
    let total: f64 = sums.iter().sum();
    sums.iter().map(|x| x / total).collect()
}

fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln P[Bin(n, 1/2) ≥ t]` from the exact integer sum `Σ_{j≥t} C(n, j)`.
pub fn big_tail_log(n: u64, t: u64) -> f64 {
    if t > n {
        return f64::NEG_INFINITY;
    }
    let mut c = BigUint::one();
    let mut upper = BigUint::zero();
    for j in 0..=n {
        if j >= t {
            upper += &c;
        }
        c = c * BigUint::from(n - j) / BigUint::from(j + 1);
    }
    let total = BigUint::one() << n;
    if upper.clone() << 1u32 >= total {
        // near one: use the complement for relative accuracy of the log
        let comp = &total - &upper;
        if comp.is_zero() {
            return 0.0;
        }
        let q = (ln_big(&comp) - n as f64 * std::f64::consts::LN_2).exp();
        (-q).ln_1p()
    } else {
        ln_big(&upper) - n as f64 * std::f64::consts::LN_2
    }
}

/// Flatness by direct enumeration: for every `2 ≤ ℓ < K` and every
/// `ℓ`-subset, compares `e(S)` with `limit[ℓ]`. Returns the violation count
/// and, per `ℓ`, the largest `e(S)` among violators with its
/// lexicographically first subset.
pub fn naive_flatness(g: &Graph, limit: &[f64]) -> (u64, Vec<Option<(u64, Vec<usize>)>>) {
    let k = g.n();
    let rows: Vec<u64> = (0..k).map(|v| g.row(v)[0]).collect();
    let mut count = 0;
    let mut worst = vec![None; k + 1];
    let all: Vec<usize> = (0..k).collect();
    for ell in 2..k {
        for_each_subset(&all, ell, &mut |s| {
            let mask: u64 = s.iter().map(|&v| 1u64 << v).sum();
            let e = s.iter().map(|&v| (rows[v] & mask).count_ones() as u64).sum::<u64>() / 2;
            if e as f64 > limit[ell] {
                count += 1;
                let slot: &mut Option<(u64, Vec<usize>)> = &mut worst[ell];
                if slot.as_ref().is_none_or(|w| e > w.0) {
                    *slot = Some((e, s.to_vec()));
                }
            }
        });
    }
    (count, worst)
}
