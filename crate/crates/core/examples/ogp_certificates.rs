//! Automatic overlap gap certificates over a batch of small instances.

use plandscape::landscape::DEFAULT_BUDGET;
use plandscape::model::sample_planted;
use plandscape::ogp::auto_certify;

fn main() -> plandscape::Result<()> {
    let (n, k, kbar, batch) = (14, 4, 5, 100);
    let mut held = 0;
    for seed in 0..batch {
        let g = sample_planted(n, k, seed)?;
        let cert = auto_certify(&g, kbar, DEFAULT_BUDGET)?;
        if cert.holds {
            held += 1;
            if held <= 5 {
                println!(
                    "seed {seed:>3}: zeta1={} zeta2={} r={} low={} high={}",
                    cert.zeta1,
                    cert.zeta2,
                    cert.r_n,
                    cert.low_witness.as_ref().unwrap().to_dashed(),
                    cert.high_witness.as_ref().unwrap().to_dashed()
                );
            }
        }
    }
    println!("certified {held} of {batch} instances at n={n} k={k} kbar={kbar}");
    Ok(())
}
