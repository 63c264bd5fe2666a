//! Flatness of edge-conditioned random graphs, exhaustively at small `K`
//! and by sampling at larger `K`.

use plandscape::flatness::{density_scale, is_flat, sample_conditioned, CheckMode};

fn main() -> plandscape::Result<()> {
    let delta = 0.2;
    for (size, n, mode, samples) in [
        (18usize, 50u64, CheckMode::Exhaustive, 10u64),
        (60, 3600, CheckMode::Sampled { count: 200, seed: 1 }, 10),
    ] {
        let gamma = density_scale(n, size as u64)?;
        let mut flat = 0;
        for seed in 0..samples {
            let g = sample_conditioned(size, gamma, seed)?;
            let r = is_flat(&g, gamma, delta, mode)?;
            flat += r.is_flat as u64;
            if let Some(v) = r.violations.first() {
                println!(
                    "  K={size} seed {seed}: worst violation at l={} excess {:.3}",
                    v.ell, v.excess
                );
            }
        }
        println!("K={size} gamma={gamma:.4} {mode:?}: {flat}/{samples} flat");
    }
    Ok(())
}
