//! Exact Gibbs measures on `kbar`-subsets by enumeration, for `n ≤ 64`.
//!
//! Subsets are `u64` masks visited in increasing numeric (colex) order, so a
//! mask's position in the enumeration is its colex rank
//! `Σ_i C(v_i, i + 1)` over its members `v_0 < v_1 < …`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::WellPartition;
use crate::error::{param, Error, Result};
use crate::model::PlantedGraph;

/// Default bound on the number of enumerated subsets.
pub const EXACT_BUDGET: u64 = 10_000_000;

const CHUNK: u64 = 1 << 14;

pub(crate) fn binom(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Colex rank of a mask among masks with the same popcount.
pub fn rank(mask: u64) -> u64 {
    let mut r = 0;
    let mut m = mask;
    let mut i = 1;
    while m != 0 {
        let v = m.trailing_zeros() as u64;
        r += binom(v, i);
        i += 1;
        m &= m - 1;
    }
    r
}

/// Inverse of [`rank`] for masks with `size` bits.
pub fn unrank(mut r: u64, size: u32) -> u64 {
    let mut mask = 0u64;
    for i in (1..=size as u64).rev() {
        let mut v = i - 1;
        while binom(v + 1, i) <= r {
            v += 1;
        }
        r -= binom(v, i);
        mask |= 1 << v;
    }
    mask
}

/// Next mask with the same popcount (Gosper).
#[inline]
fn next_combination(x: u64) -> u64 {
    let c = x & x.wrapping_neg();
    let r = x.wrapping_add(c);
    (((r ^ x) >> 2) / c) | r
}

pub(crate) fn mask_edges(rows: &[u64], mask: u64) -> u32 {
    let mut m = mask;
    let mut twice = 0;
    while m != 0 {
        let v = m.trailing_zeros() as usize;
        twice += (rows[v] & mask).count_ones();
        m &= m - 1;
    }
    twice / 2
}

/// Natural log of a sum of exponentials, with a fixed pairwise tree.
fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => pairwise_sum(&xs[..n / 2]) + pairwise_sum(&xs[n / 2..]),
    }
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    let shifted: Vec<f64> = xs.iter().map(|x| (x - m).exp()).collect();
    m + pairwise_sum(&shifted).ln()
}

/// `π_β` on all `kbar`-subsets of one instance.
#[derive(Clone, Debug)]
pub struct ExactGibbs {
    pub n: usize,
    pub kbar: usize,
    pub beta: f64,
    pub log_z: f64,
    edges: Vec<u16>,
    overlaps: Vec<u8>,
    /// `ln π_β(overlap = z)` for `z = 0..=min(k, kbar)`.
    pub ln_marginal: Vec<f64>,
}

/// Enumerates all `kbar`-subsets and normalises `exp(β·|E[S]|)`.
pub fn exact_gibbs(g: &PlantedGraph, kbar: usize, beta: f64, budget: u64) -> Result<ExactGibbs> {
    let n = g.n();
    g.params(kbar)?;
    if n > 64 {
        return Err(param("exact Gibbs enumeration supports n <= 64"));
    }
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(param(format!("beta must be finite and >= 0, got {beta}")));
    }
    let total = binom(n as u64, kbar as u64);
    if total > budget {
        return Err(Error::BudgetExceeded {
            what: format!("exact Gibbs measure over C({n},{kbar}) = {total} subsets"),
            budget,
        });
    }
    let rows: Vec<u64> = (0..n).map(|v| g.graph().row(v)[0]).collect();
    let planted = g.planted_mask()[0];
    let chunks = total.div_ceil(CHUNK);
    let parts: Vec<(Vec<u16>, Vec<u8>)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(total);
            let mut mask = unrank(lo, kbar as u32);
            let mut e = Vec::with_capacity((hi - lo) as usize);
            let mut o = Vec::with_capacity((hi - lo) as usize);
            for r in lo..hi {
                e.push(mask_edges(&rows, mask) as u16);
                o.push((mask & planted).count_ones() as u8);
                if r + 1 < hi {
                    mask = next_combination(mask);
                }
            }
            (e, o)
        })
        .collect();
    let mut edges = Vec::with_capacity(total as usize);
    let mut overlaps = Vec::with_capacity(total as usize);
    for (e, o) in parts {
        edges.extend(e);
        overlaps.extend(o);
    }
    let zmax = g.k().min(kbar);
    // per-chunk, per-overlap partial sums relative to the global maximum
    let top = beta * *edges.iter().max().unwrap() as f64;
    let partial: Vec<Vec<f64>> = edges
        .par_chunks(CHUNK as usize)
        .zip(overlaps.par_chunks(CHUNK as usize))
        .map(|(e, o)| {
            let mut acc = vec![0.0; zmax + 1];
            for (&ei, &oi) in e.iter().zip(o) {
                acc[oi as usize] += (beta * ei as f64 - top).exp();
            }
            acc
        })
        .collect();
    let ln_marginal_raw: Vec<f64> = (0..=zmax)
        .map(|z| {
            let col: Vec<f64> = partial.iter().map(|p| p[z]).collect();
            let s = pairwise_sum(&col);
            if s > 0.0 {
                top + s.ln()
            } else {
                f64::NEG_INFINITY
            }
        })
        .collect();
    // marginals that underflow in the shifted sum are recomputed in log space
    let ln_marginal_raw: Vec<f64> = ln_marginal_raw
        .iter()
        .enumerate()
        .map(|(z, &v)| {
            if v > f64::NEG_INFINITY {
                return v;
            }
            let ws: Vec<f64> = edges
                .iter()
                .zip(&overlaps)
                .filter(|(_, &o)| o as usize == z)
                .map(|(&e, _)| beta * e as f64)
                .collect();
            log_sum_exp(&ws)
        })
        .collect();
    let log_z = log_sum_exp(&ln_marginal_raw);
    let ln_marginal = ln_marginal_raw.iter().map(|v| v - log_z).collect();
    Ok(ExactGibbs {
        n,
        kbar,
        beta,
        log_z,
        edges,
        overlaps,
        ln_marginal,
    })
}

impl ExactGibbs {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn mask(&self, r: usize) -> u64 {
        unrank(r as u64, self.kbar as u32)
    }

    pub fn edges_at(&self, r: usize) -> u32 {
        self.edges[r] as u32
    }

    pub fn overlap_at(&self, r: usize) -> usize {
        self.overlaps[r] as usize
    }

    pub fn ln_prob(&self, r: usize) -> f64 {
        self.beta * self.edges[r] as f64 - self.log_z
    }

    /// Probability of every subset, in rank order.
    pub fn probs(&self) -> Vec<f64> {
        (0..self.len()).map(|r| self.ln_prob(r).exp()).collect()
    }

    /// `π_β(overlap = z)`.
    pub fn marginal(&self) -> Vec<f64> {
        self.ln_marginal.iter().map(|v| v.exp()).collect()
    }

    /// `ln π_β(overlap ∈ [lo, hi])`.
    pub fn ln_band(&self, lo: usize, hi: usize) -> f64 {
        let hi = hi.min(self.ln_marginal.len() - 1);
        if lo > hi {
            return f64::NEG_INFINITY;
        }
        log_sum_exp(&self.ln_marginal[lo..=hi])
    }
}

/// Log masses of the three bands and the well ratio.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FewRatio {
    pub ln_a0: f64,
    pub ln_a1: f64,
    pub ln_a2: f64,
    /// `ln min{π(A₀), π(A₂)} − ln π(A₁)`; `+inf` when `π(A₁) = 0`.
    pub ln_ratio: f64,
}

impl FewRatio {
    fn from_masses(ln_a0: f64, ln_a1: f64, ln_a2: f64) -> Self {
        let ln_ratio = if ln_a1 == f64::NEG_INFINITY {
            f64::INFINITY
        } else {
            ln_a0.min(ln_a2) - ln_a1
        };
        Self {
            ln_a0,
            ln_a1,
            ln_a2,
            ln_ratio,
        }
    }
}

/// The free energy well ratio from an exact Gibbs measure.
pub fn few_ratio(exact: &ExactGibbs, part: &WellPartition) -> FewRatio {
    FewRatio::from_masses(
        exact.ln_band(0, part.a0_max),
        exact.ln_band(part.a1_min, part.a1_max),
        exact.ln_band(part.a2_min, usize::MAX),
    )
}

/// Lower bound on the well ratio from the per-overlap maxima `d(z)`.
///
/// With `N(z) = C(k,z)·C(n−k,kbar−z)` subsets at overlap `z`, each band
/// mass satisfies `e^{β·max d} ≤ Z·π(A) ≤ Σ_z N(z)·e^{β d(z)}`, which gives
/// `min_{i∈{0,2}} β·max_{A_i} d − ln Σ_{A₁} N(z)e^{β d(z)}`.
pub fn few_ratio_bound(d: &[f64], n: u64, k: u64, kbar: u64, beta: f64, part: &WellPartition) -> f64 {
    let best = |lo: usize, hi: usize| {
        d.iter()
            .enumerate()
            .filter(|(z, _)| *z >= lo && *z <= hi)
            .map(|(_, &v)| beta * v)
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let lo0 = best(0, part.a0_max);
    let lo2 = best(part.a2_min, usize::MAX);
    let terms: Vec<f64> = (part.a1_min..=part.a1_max.min(d.len().saturating_sub(1)))
        .filter(|&z| (z as u64) <= k && kbar >= z as u64 && kbar - z as u64 <= n - k)
        .map(|z| {
            crate::numerics::ln_choose(k, z as u64) + crate::numerics::ln_choose(n - k, kbar - z as u64) + beta * d[z]
        })
        .collect();
    let up1 = log_sum_exp(&terms);
    if up1 == f64::NEG_INFINITY {
        return f64::INFINITY;
    }
    lo0.min(lo2) - up1
}

/// Metropolis transition matrix over all `kbar`-subsets.
#[derive(Clone, Debug)]
pub struct TransitionMatrix {
    pub size: usize,
    /// Off-diagonal entries `(x, y, T(x, y))` by rank.
    pub moves: Vec<(usize, usize, f64)>,
    pub stay: Vec<f64>,
}

/// Assembles the uniform-swap Metropolis kernel: each of the
/// `kbar·(n − kbar)` swaps is proposed with equal probability and accepted
/// with `min(1, e^{βΔ})`.
pub fn transition_matrix(g: &PlantedGraph, kbar: usize, beta: f64, budget: u64) -> Result<TransitionMatrix> {
    let n = g.n();
    g.params(kbar)?;
    if n > 64 || kbar == n {
        return Err(param("transition matrix needs n <= 64 and kbar < n"));
    }
    let total = binom(n as u64, kbar as u64);
    if total > budget {
        return Err(Error::BudgetExceeded {
            what: format!("transition matrix over {total} states"),
            budget,
        });
    }
    let rows: Vec<u64> = (0..n).map(|v| g.graph().row(v)[0]).collect();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let prop = 1.0 / (kbar * (n - kbar)) as f64;
    let mut moves = Vec::new();
    let mut stay = vec![0.0; total as usize];
    let mut mask = unrank(0, kbar as u32);
    for x in 0..total as usize {
        let ex = mask_edges(&rows, mask) as f64;
        let mut out = 0.0;
        let mut ins = mask;
        while ins != 0 {
            let u = ins.trailing_zeros();
            ins &= ins - 1;
            let mut outs = !mask & full;
            while outs != 0 {
                let v = outs.trailing_zeros();
                outs &= outs - 1;
                let y = (mask & !(1 << u)) | (1 << v);
                let delta = mask_edges(&rows, y) as f64 - ex;
                let p = prop * (beta * delta).exp().min(1.0);
                moves.push((x, rank(y) as usize, p));
                out += p;
            }
        }
        stay[x] = 1.0 - out;
        if x + 1 < total as usize {
            mask = next_combination(mask);
        }
    }
    Ok(TransitionMatrix {
        size: total as usize,
        moves,
        stay,
    })
}

impl TransitionMatrix {
    /// `max |π(x)T(x,y) − π(y)T(y,x)|` over all moves.
    pub fn detailed_balance_defect(&self, pi: &[f64]) -> f64 {
        use std::collections::HashMap;
        let map: HashMap<(usize, usize), f64> = self.moves.iter().map(|&(x, y, p)| ((x, y), p)).collect();
        self.moves
            .iter()
            .map(|&(x, y, p)| {
                let back = map.get(&(y, x)).copied().unwrap_or(0.0);
                (pi[x] * p - pi[y] * back).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Row sums, which must all be one.
    pub fn row_sums(&self) -> Vec<f64> {
        let mut s = self.stay.clone();
        for &(x, _, p) in &self.moves {
            s[x] += p;
        }
        s
    }
}

/// Exact first passage of the overlap above `a1_max` at `β = 0`.
///
/// At infinite temperature the overlap of the chain is itself a birth–death
/// chain: from overlap `z` it moves up with probability
/// `(kbar−z)/kbar · (k−z)/(n−kbar)` and down with probability
/// `z/kbar · (n−kbar−k+z)/(n−kbar)`. The start law is the hypergeometric
/// law conditioned on `z ≤ a1_max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FirstPassage {
    pub mean: f64,
    pub median: u64,
}

pub fn overlap_first_passage(n: u64, k: u64, kbar: u64, a1_max: u64) -> Result<FirstPassage> {
    let zmax = k.min(kbar);
    if a1_max >= zmax || kbar >= n {
        return Err(param("first passage needs a1_max < min(k, kbar) and kbar < n"));
    }
    let out = (n - kbar) as f64;
    let kb = kbar as f64;
    let up = |z: u64| (kbar - z) as f64 / kb * (k - z) as f64 / out;
    let down = |z: u64| {
        let free_out = n - kbar - (k - z);
        z as f64 / kb * free_out as f64 / out
    };
    let m = (a1_max + 1) as usize;
    let mut start: Vec<f64> = (0..=a1_max)
        .map(|z| {
            if kbar - z > n - k {
                0.0
            } else {
                (crate::numerics::ln_choose(k, z) + crate::numerics::ln_choose(n - k, kbar - z)).exp()
            }
        })
        .collect();
    let s: f64 = start.iter().sum();
    start.iter_mut().for_each(|x| *x /= s);

    // mean: (I − Q) h = 1 on states 0..=a1_max, Q tridiagonal
    let mut a = vec![0.0; m];
    let mut b = vec![0.0; m];
    let mut c = vec![0.0; m];
    for z in 0..m {
        let zu = z as u64;
        let (pu, pd) = (up(zu), down(zu));
        b[z] = pu + pd;
        if z > 0 {
            a[z] = -pd;
        }
        if z + 1 < m {
            c[z] = -pu;
        }
    }
    let mut rhs = vec![1.0; m];
    for z in 1..m {
        let w = a[z] / b[z - 1];
        b[z] -= w * c[z - 1];
        rhs[z] -= w * rhs[z - 1];
    }
    let mut h = vec![0.0; m];
    h[m - 1] = rhs[m - 1] / b[m - 1];
    for z in (0..m - 1).rev() {
        h[z] = (rhs[z] - c[z] * h[z + 1]) / b[z];
    }
    let mean = start.iter().zip(&h).map(|(p, t)| p * t).sum();

    // median: propagate the surviving mass until it drops to one half
    let mut alive = start;
    let mut t = 0u64;
    while alive.iter().sum::<f64>() > 0.5 {
        let mut next = vec![0.0; m];
        for z in 0..m {
            let zu = z as u64;
            let (pu, pd) = (up(zu), down(zu));
            next[z] += alive[z] * (1.0 - pu - pd);
            if z + 1 < m {
                next[z + 1] += alive[z] * pu;
            }
            if z > 0 {
                next[z - 1] += alive[z] * pd;
            }
        }
        alive = next;
        t += 1;
    }
    Ok(FirstPassage { mean, median: t })
}
