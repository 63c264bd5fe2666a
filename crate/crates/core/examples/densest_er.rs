//! Exact densest `K`-subgraphs of `G(n, 1/2)` against the first and second
//! order predictions.
//!
//! ```text
//! cargo run --release --example densest_er -- [n] [K] [seeds]
//! ```

use std::time::Instant;

use plandscape::landscape::{er_prediction, exact_densest_er, DEFAULT_BUDGET};
use plandscape::model::Graph;
use plandscape::rng::derive_seed;

fn main() -> plandscape::Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("integer argument"))
        .collect();
    let n = args.first().copied().unwrap_or(50);
    let k = args.get(1).copied().unwrap_or(10);
    let seeds = args.get(2).copied().unwrap_or(20);

    let pred = er_prediction(n, k)?;
    println!(
        "n={n} K={k}: first order {:.3}, second order {:.3}",
        pred.first_order, pred.second_order
    );

    let start = Instant::now();
    let mut total = 0u64;
    let mut nodes = 0u64;
    for s in 0..seeds {
        let g = Graph::erdos_renyi_half(n as usize, derive_seed(2024, s));
        let r = exact_densest_er(&g, k as usize, DEFAULT_BUDGET)?;
        total += r.value;
        nodes += r.nodes;
        println!("seed {s:>3}: d = {:>3}  witness {}", r.value, r.witness.to_dashed());
    }
    let mean = total as f64 / seeds as f64;
    println!(
        "mean d_ER = {mean:.3} ({:+.2}% of first order), {nodes} nodes, {:.2?}",
        100.0 * (mean / pred.first_order - 1.0),
        start.elapsed()
    );
    Ok(())
}
