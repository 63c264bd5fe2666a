//! The Metropolis chain against its exact stationary law.

use plandscape::mcmc::{exact_gibbs, occupation, run_chain, total_variation, MCMCConfig, EXACT_BUDGET};
use plandscape::model::{sample_planted, VertexSubset};

fn main() -> plandscape::Result<()> {
    let (n, k, kbar, beta) = (12, 4, 4, 0.5);
    let g = sample_planted(n, k, 3)?;
    let exact = exact_gibbs(&g, kbar, beta, EXACT_BUDGET)?;
    println!("ln Z = {:.12}", exact.log_z);
    for (z, p) in exact.marginal().iter().enumerate() {
        println!("  pi(overlap = {z}) = {p:.6}");
    }

    let init = VertexSubset::new((0..kbar).collect(), n)?;
    for steps in [10_000u64, 100_000, 1_000_000] {
        let emp = occupation(&g, &init, beta, steps, 11)?;
        println!(
            "{steps:>8} steps: TV to exact = {:.4}",
            total_variation(&emp, &exact.probs())
        );
    }

    let mut cfg = MCMCConfig::new(beta, kbar, 20, 5);
    cfg.stride = 1;
    let trace = run_chain(&g, &cfg, &init)?;
    trace.write_csv(std::io::stdout().lock()).expect("stdout");
    Ok(())
}
