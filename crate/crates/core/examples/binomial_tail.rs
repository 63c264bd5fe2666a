//! Log tails of `Bin(N, 1/2)` next to their large deviation bracket.

use plandscape::landscape::{binomial_tail_bracket, binomial_tail_log};

fn main() {
    println!(
        "{:>7} {:>5} {:>16} {:>16} {:>16}",
        "N", "gamma", "ln P[X >= gN]", "lower", "upper"
    );
    for n in [100u64, 1_000, 10_000, 100_000] {
        for gamma in [0.55, 0.6, 0.75] {
            let t = (gamma * n as f64).ceil() as u64;
            let (lo, hi) = binomial_tail_bracket(n, gamma);
            println!(
                "{n:>7} {gamma:>5} {:>16.6} {lo:>16.6} {hi:>16.6}",
                binomial_tail_log(n, t)
            );
        }
    }
}
