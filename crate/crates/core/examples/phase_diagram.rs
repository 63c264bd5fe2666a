//! Phase regions of the closed-form classifier over a log-spaced grid.

use plandscape::numerics::{phase_diagram, ClassifierConfig, PhaseRegion};

fn main() -> plandscape::Result<()> {
    let n = 10_000_000u64;
    let ks: Vec<u64> = (0..9).map(|i| (10f64 * 2f64.powi(i)).round() as u64).collect();
    let kbars: Vec<u64> = (0..7).map(|i| 10u64.pow(i + 1)).collect();
    let table = phase_diagram(n, &ks, &kbars, &ClassifierConfig::default(), 1.0)?;

    print!("{:>8}", "k \\ kbar");
    for kb in &kbars {
        print!("{kb:>9}");
    }
    println!();
    for &k in &ks {
        print!("{k:>8}");
        for &kb in &kbars {
            let c = match table.get(k, kb).unwrap() {
                PhaseRegion::Ogp => "OGP",
                PhaseRegion::UninformativeNoOgp => "uninf",
                PhaseRegion::InformativeNoOgp => "inf",
                PhaseRegion::Boundary => "?",
                PhaseRegion::BelowDiagonal => ".",
            };
            print!("{c:>9}");
        }
        println!();
    }
    Ok(())
}
