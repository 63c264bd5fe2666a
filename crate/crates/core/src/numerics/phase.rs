//! The conjectured phase diagram over `(k, kbar)` cells at fixed `n`.

use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::classify::{classify_asymptotic, ClassifierConfig, Monotonicity};
use crate::error::{param, Result};
use crate::model::ModelParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PhaseRegion {
    #[serde(rename = "Uninformative-NoOGP")]
    UninformativeNoOgp,
    #[serde(rename = "OGP")]
    Ogp,
    #[serde(rename = "Informative-NoOGP")]
    InformativeNoOgp,
    BelowDiagonal,
    /// Too close to a regime boundary for the margin in use.
    Boundary,
}

impl PhaseRegion {
    pub fn name(self) -> &'static str {
        match self {
            PhaseRegion::UninformativeNoOgp => "Uninformative-NoOGP",
            PhaseRegion::Ogp => "OGP",
            PhaseRegion::InformativeNoOgp => "Informative-NoOGP",
            PhaseRegion::BelowDiagonal => "BelowDiagonal",
            PhaseRegion::Boundary => "Boundary",
        }
    }

    fn from_class(m: Monotonicity) -> Self {
        match m {
            Monotonicity::Decreasing => PhaseRegion::UninformativeNoOgp,
            Monotonicity::NonMonotonic => PhaseRegion::Ogp,
            Monotonicity::Increasing => PhaseRegion::InformativeNoOgp,
            Monotonicity::Indeterminate => PhaseRegion::Boundary,
        }
    }
}

impl fmt::Display for PhaseRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseCell {
    pub k: u64,
    pub kbar: u64,
    pub region: PhaseRegion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseTable {
    pub n: u64,
    pub cells: Vec<PhaseCell>,
}

impl PhaseTable {
    pub fn get(&self, k: u64, kbar: u64) -> Option<PhaseRegion> {
        self.cells.iter().find(|c| c.k == k && c.kbar == kbar).map(|c| c.region)
    }

    /// CSV with columns `k,kbar,label`, rows in `k`-major order.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "k,kbar,label")?;
        for c in &self.cells {
            writeln!(out, "{},{},{}", c.k, c.kbar, c.region)?;
        }
        Ok(())
    }
}

/// Labels every `(k, kbar)` cell through [`classify_asymptotic`].
pub fn phase_diagram(
    n: u64,
    k_grid: &[u64],
    kbar_grid: &[u64],
    cfg: &ClassifierConfig,
    margin: f64,
) -> Result<PhaseTable> {
    let sorted = |g: &[u64]| g.windows(2).all(|w| w[0] < w[1]);
    if !sorted(k_grid) || !sorted(kbar_grid) {
        return Err(param("phase grids must be strictly increasing"));
    }
    if k_grid.first() == Some(&0) || k_grid.iter().chain(kbar_grid).any(|&v| v > n) {
        return Err(param(format!("grid values must lie in [1, {n}]")));
    }
    let mut cells = Vec::with_capacity(k_grid.len() * kbar_grid.len());
    for &k in k_grid {
        for &kbar in kbar_grid {
            let region = if kbar < k {
                PhaseRegion::BelowDiagonal
            } else {
                let p = ModelParams::new(n, k, kbar)?;
                PhaseRegion::from_class(classify_asymptotic(&p, cfg, margin).label)
            };
            cells.push(PhaseCell { k, kbar, region });
        }
    }
    Ok(PhaseTable { n, cells })
}
