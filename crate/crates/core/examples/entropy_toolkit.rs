//! The rescaled binary entropy, its inverse near `ln 2`, and log binomials.

use std::f64::consts::LN_2;

use plandscape::numerics::{entropy, entropy_inverse, entropy_inverse_taylor, log_binomial, rate};

fn main() -> plandscape::Result<()> {
    for x in [0.5, 0.6, 0.75, 0.9, 0.99] {
        println!("h({x}) = {:.15}   r({x}) = {:.3e}", entropy(x)?, rate(x)?);
    }
    println!();
    println!("{:>8} {:>20} {:>20} {:>12}", "eps", "h^-1(ln2 - eps)", "taylor", "gap");
    for eps in [1e-2, 1e-3, 1e-4, 1e-6, 1e-9] {
        let exact = entropy_inverse(LN_2 - eps)?;
        let approx = entropy_inverse_taylor(eps)?;
        println!(
            "{eps:>8.0e} {exact:>20.15} {approx:>20.15} {:>12.3e}",
            (exact - approx).abs()
        );
    }
    println!();
    for (n, k) in [(10u64, 3u64), (1_000_000, 500), (10_000_000, 4000)] {
        println!("ln C({n}, {k}) = {:.12}", log_binomial(n, k)?);
    }
    Ok(())
}
