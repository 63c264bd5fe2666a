//! Log tails of `Bin(N, 1/2)`.

use std::f64::consts::LN_2;

use crate::numerics::{deficit, ln_choose};

/// `ln P[Bin(N, 1/2) ≥ t]`, or `-inf` when `t > N`.
///
/// Upper tails (`2t > N`) are summed from the term at `t` outward using the
/// ratio `(N − j)/(j + 1)` of successive terms, stopping once a term drops
/// below `1e-18` of the running sum. Lower tails go through the complement
/// `P[X ≥ t] = 1 − P[X ≥ N − t + 1]`, which is an upper tail.
pub fn binomial_tail_log(n: u64, t: u64) -> f64 {
    if t > n {
        return f64::NEG_INFINITY;
    }
    if t == 0 {
        return 0.0;
    }
    if 2 * t > n {
        upper_tail(n, t)
    } else {
        (-upper_tail(n, n - t + 1).exp()).ln_1p()
    }
}

fn upper_tail(n: u64, t: u64) -> f64 {
    let lead = ln_choose(n, t) - n as f64 * LN_2;
    let mut sum = 1.0f64;
    let mut term = 1.0f64;
    for j in t..n {
        term *= (n - j) as f64 / (j + 1) as f64;
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    lead + sum.ln()
}

/// `[−N·r(γ) − ln N, −N·r(γ)]`, the interval that brackets
/// `ln P[Bin(N, 1/2) ≥ γN]` for `γ ∈ (1/2, 1)` once `(γ − ½)√N` is large.
pub fn binomial_tail_bracket(n: u64, gamma: f64) -> (f64, f64) {
    let hi = -(n as f64) * deficit(gamma - 0.5);
    (hi - (n as f64).ln(), hi)
}
