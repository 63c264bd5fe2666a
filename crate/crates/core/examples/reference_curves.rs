//! First moment curves at the four reference settings of `n = 10⁷` and
//! their monotonicity classes.
//!
//! ```text
//! cargo run --release --example reference_curves -- [out_dir]
//! ```

use std::fs::File;
use std::io::BufWriter;
use std::time::Instant;

use plandscape::model::ModelParams;
use plandscape::numerics::{classify_empirical, t_statistic, ClassifierConfig, CurveKind, OverlapCurve};

fn main() -> plandscape::Result<()> {
    let out_dir = std::env::args().nth(1);
    let cfg = ClassifierConfig::default();
    for (k, kbar) in [(700, 700), (700, 980_000), (4000, 4000), (4000, 6_250_000)] {
        let p = ModelParams::new(10_000_000, k, kbar)?;
        let start = Instant::now();
        let curve = OverlapCurve::first_moment(p, CurveKind::GammaTilde)?;
        let class = classify_empirical(&curve, &cfg)?;
        println!(
            "k={k:>4} kbar={kbar:>8}: {:<13} T_n={:>9.3} u1={:?} u2={:?} ({:.2?})",
            class.label.to_string(),
            t_statistic(&p)?,
            class.u1,
            class.u2,
            start.elapsed()
        );
        if let Some(dir) = &out_dir {
            let path = format!("{dir}/gamma_tilde_{k}_{kbar}.csv");
            let f = File::create(&path).map_err(|source| plandscape::Error::Io {
                path: path.clone().into(),
                source,
            })?;
            curve.write_csv(BufWriter::new(f)).expect("write curve");
        }
    }
    Ok(())
}
