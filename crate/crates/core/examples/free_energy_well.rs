//! Well ratios and hitting times across inverse temperatures on an instance
//! whose exact overlap curve dips below both endpoints.

use plandscape::landscape::{Method, DEFAULT_BUDGET};
use plandscape::mcmc::{
    censored_median, exact_gibbs, few_ratio, hitting_times, overlap_first_passage, MCMCConfig, WellPartition,
    EXACT_BUDGET,
};
use plandscape::model::sample_planted;
use plandscape::ogp::{d_curve, LocalOptions};

fn main() -> plandscape::Result<()> {
    let (n, k, kbar) = (12, 4, 4);
    // first seed whose d(1) lies below d(0) and d(4)
    let (seed, g, d) = (0..)
        .find_map(|seed| {
            let g = sample_planted(n, k, seed).ok()?;
            let d = d_curve(&g, kbar, Method::Exhaustive, DEFAULT_BUDGET, LocalOptions::default()).ok()?;
            let v: Vec<f64> = d.curve.points().iter().map(|p| p.value).collect();
            (v[1] < v[0].min(v[4])).then_some((seed, g, v))
        })
        .unwrap();
    println!("instance seed {seed}, d = {d:?}");

    let part = WellPartition::explicit(0, 1, 1, 2)?;
    let fp = overlap_first_passage(n as u64, k as u64, kbar as u64, 1)?;
    println!(
        "beta = 0 exact first passage: mean {:.3}, median {}",
        fp.mean, fp.median
    );
    for beta in [0.0, 1.0, 2.0, 4.0] {
        let ratio = few_ratio(&exact_gibbs(&g, kbar, beta, EXACT_BUDGET)?, &part);
        let mut cfg = MCMCConfig::new(beta, kbar, 1_000_000, 99);
        cfg.partition = Some(part);
        let times = hitting_times(&g, &cfg, 100)?;
        println!(
            "beta {beta}: ln few ratio {:>8.4}, median hitting time {:?}",
            ratio.ln_ratio,
            censored_median(&times)
        );
    }
    Ok(())
}
