//! Exact and local-search overlap curves `d(z)` of one instance.
//!
//! ```text
//! cargo run --release --example overlap_landscape -- [n] [k] [kbar] [seed]
//! ```

use plandscape::landscape::{Method, DEFAULT_BUDGET};
use plandscape::model::sample_planted;
use plandscape::ogp::{d_curve, type_m_witness, LocalOptions};

fn main() -> plandscape::Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("integer argument"))
        .collect();
    let n = args.first().copied().unwrap_or(24) as usize;
    let k = args.get(1).copied().unwrap_or(6) as usize;
    let kbar = args.get(2).copied().unwrap_or(8) as usize;
    let seed = args.get(3).copied().unwrap_or(1);

    let g = sample_planted(n, k, seed)?;
    let exact = d_curve(&g, kbar, Method::Exhaustive, DEFAULT_BUDGET, LocalOptions::default())?;
    let local = d_curve(
        &g,
        kbar,
        Method::LocalSearch,
        DEFAULT_BUDGET,
        LocalOptions { restarts: 4, seed },
    )?;

    println!("{:>3} {:>6} {:>6}  witness", "z", "exact", "local");
    for ((e, l), w) in exact
        .curve
        .points()
        .iter()
        .zip(local.curve.points())
        .zip(&exact.witnesses)
    {
        println!("{:>3} {:>6} {:>6}  {}", e.z, e.value, l.value, w.to_dashed());
    }
    match type_m_witness(&exact.curve) {
        Some(t) => println!("dip at z = {} of depth {}", t.z_star, t.depth),
        None => println!("no interior dip below both endpoints"),
    }
    Ok(())
}
