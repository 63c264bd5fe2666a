//! The first moment curve `Γ_{kbar,k}(z)`, its square-root approximations
//! and the overlap curves they populate.

use std::f64::consts::{LN_2, SQRT_2};
use std::fmt;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::combin::ln_choose;
use super::entropy::offset_for_deficit;
use crate::error::{param, Error, Result};
use crate::model::{pairs, ModelParams};

/// `A(z) = ln(C(k, z)·C(n − k, kbar − z))`, the log number of
/// `kbar`-subsets with overlap exactly `z`.
pub fn a_func(p: &ModelParams, z: u64) -> Result<f64> {
    if !p.feasible(z) {
        return Err(param(format!(
            "overlap {z} infeasible for n={} k={} kbar={}",
            p.n, p.k, p.kbar
        )));
    }
    Ok(ln_choose(p.k, z) + ln_choose(p.n - p.k, p.kbar - z))
}

/// `C(kbar,2) − C(z,2)`: pairs of a `kbar`-subset not forced by the overlap.
fn free_pairs(p: &ModelParams, z: u64) -> f64 {
    (pairs(p.kbar) - pairs(z)) as f64
}

fn midpoint(p: &ModelParams, z: u64) -> f64 {
    0.5 * (pairs(p.kbar) as f64 + pairs(z) as f64)
}

/// `Γ(z) − ½C(kbar,2)`, formed without subtracting large numbers.
///
/// `Γ(z) = ½(C(kbar,2) + C(z,2)) + (h⁻¹(ln 2 − A/M) − ½)·M` with
/// `M = C(kbar,2) − C(z,2)`.
pub fn gamma_excess(p: &ModelParams, z: u64) -> Result<f64> {
    let a = a_func(p, z)?;
    if z == p.kbar {
        // z = kbar = k: the clique itself
        return Ok(0.5 * pairs(z) as f64);
    }
    let m = free_pairs(p, z);
    let eps = a / m;
    if eps > LN_2 * (1.0 + 1e-15) {
        return Err(Error::CurveUndefined {
            z,
            log_count: a,
            pairs: m,
        });
    }
    Ok(0.5 * pairs(z) as f64 + offset_for_deficit(eps) * m)
}

/// The first moment curve `Γ_{kbar,k}(z)`.
///
/// `Γ(z) = C(z,2) + h⁻¹(ln 2 − A(z)/M)·M`, `M = C(kbar,2) − C(z,2)`, with
/// `Γ_{k,k}(k) = C(k,2)`. Where `A(z)/M > ln 2` the union bound gives no
/// information and [`Error::CurveUndefined`] is returned.
pub fn gamma_curve(p: &ModelParams, z: u64) -> Result<f64> {
    Ok(0.5 * pairs(p.kbar) as f64 + gamma_excess(p, z)?)
}

/// `Γ̃(z) = ½(C(kbar,2) + C(z,2)) + √(M·A(z)/2)`, the first-order
/// square-root approximation of `Γ`.
pub fn gamma_tilde(p: &ModelParams, z: u64) -> Result<f64> {
    let a = a_func(p, z)?.max(0.0);
    Ok(midpoint(p, z) + (free_pairs(p, z) * a / 2.0).sqrt())
}

/// `Γ̃` with `C(k,2)` in place of `C(kbar,2)` in both occurrences, as the
/// approximation is sometimes printed. Only differs from [`gamma_tilde`]
/// when `kbar > k`.
pub fn gamma_tilde_caption(p: &ModelParams, z: u64) -> Result<f64> {
    let a = a_func(p, z)?.max(0.0);
    let ck = pairs(p.k) as f64;
    let cz = pairs(z) as f64;
    Ok(0.5 * (ck + cz) + ((ck - cz) * a / 2.0).sqrt())
}

/// `Φ(z) = ½(C(kbar,2)+C(z,2)) + √(A·M/2) − √(A³/M)/(6√2)`, the
/// two-term approximation of `Γ` which stays within `O(1)` of it once
/// `kbar ≥ (ln n)^5`.
pub fn phi_curve(p: &ModelParams, z: u64) -> Result<f64> {
    let a = a_func(p, z)?.max(0.0);
    if z >= p.kbar {
        return Err(crate::error::domain("phi is undefined at z = kbar (no free pairs)"));
    }
    let m = free_pairs(p, z);
    Ok(midpoint(p, z) + (a * m / 2.0).sqrt() - (a * a * a / m).sqrt() / (6.0 * SQRT_2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveKind {
    Gamma,
    GammaTilde,
    GammaTildeCaption,
    Phi,
    Empirical,
}

impl CurveKind {
    pub fn name(self) -> &'static str {
        match self {
            CurveKind::Gamma => "gamma",
            CurveKind::GammaTilde => "gamma-tilde",
            CurveKind::GammaTildeCaption => "gamma-tilde-caption",
            CurveKind::Phi => "phi",
            CurveKind::Empirical => "empirical",
        }
    }

    fn eval(self, p: &ModelParams, z: u64) -> Result<f64> {
        match self {
            CurveKind::Gamma => gamma_curve(p, z),
            CurveKind::GammaTilde => gamma_tilde(p, z),
            CurveKind::GammaTildeCaption => gamma_tilde_caption(p, z),
            CurveKind::Phi => phi_curve(p, z),
            CurveKind::Empirical => Err(param("empirical curves come from the landscape module")),
        }
    }
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for CurveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "gamma" => CurveKind::Gamma,
            "gamma-tilde" => CurveKind::GammaTilde,
            "gamma-tilde-caption" => CurveKind::GammaTildeCaption,
            "phi" => CurveKind::Phi,
            "empirical" => CurveKind::Empirical,
            other => return Err(param(format!("unknown curve kind `{other}`"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub z: u64,
    pub value: f64,
}

/// Values of one curve at every integer overlap of `[z_lo, z_hi]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapCurve {
    pub params: ModelParams,
    pub kind: CurveKind,
    pub z_lo: u64,
    pub z_hi: u64,
    points: Vec<CurvePoint>,
}

impl OverlapCurve {
    /// Evaluates a closed-form curve on its natural domain `[⌊kbar·k/n⌋, k]`.
    /// `Φ` stops at `kbar − 1` when `kbar = k`.
    pub fn first_moment(p: ModelParams, kind: CurveKind) -> Result<Self> {
        let hi = if kind == CurveKind::Phi {
            p.k.min(p.kbar - 1)
        } else {
            p.k
        };
        Self::first_moment_on(p, kind, p.overlap_floor(), hi)
    }

    /// Evaluates a closed-form curve on `[z_lo, z_hi]`. Points are computed
    /// in parallel and assembled in increasing `z`.
    pub fn first_moment_on(p: ModelParams, kind: CurveKind, z_lo: u64, z_hi: u64) -> Result<Self> {
        if z_lo > z_hi || z_hi > p.k {
            return Err(param(format!("bad curve domain [{z_lo}, {z_hi}] for k={}", p.k)));
        }
        let points = (z_lo..=z_hi)
            .into_par_iter()
            .map(|z| kind.eval(&p, z).map(|value| CurvePoint { z, value }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            params: p,
            kind,
            z_lo,
            z_hi,
            points,
        })
    }

    /// Wraps precomputed values; `values[i]` belongs to `z_lo + i`.
    pub fn from_values(p: ModelParams, kind: CurveKind, z_lo: u64, values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(param("curve needs at least one point"));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(param(format!("curve value {v} is not finite")));
        }
        let points: Vec<CurvePoint> = values
            .iter()
            .enumerate()
            .map(|(i, &value)| CurvePoint {
                z: z_lo + i as u64,
                value,
            })
            .collect();
        Ok(Self {
            params: p,
            kind,
            z_lo,
            z_hi: z_lo + values.len() as u64 - 1,
            points,
        })
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn value_at(&self, z: u64) -> Option<f64> {
        if z < self.z_lo || z > self.z_hi {
            return None;
        }
        Some(self.points[(z - self.z_lo) as usize].value)
    }

    /// `kbar^{-3/2}·(value − ½C(kbar,2))`, the scale on which the dip of the
    /// curve is visible at large `kbar`.
    pub fn renormalized(&self) -> Vec<CurvePoint> {
        let half = 0.5 * pairs(self.params.kbar) as f64;
        let scale = (self.params.kbar as f64).powf(-1.5);
        self.points
            .iter()
            .map(|p| CurvePoint {
                z: p.z,
                value: (p.value - half) * scale,
            })
            .collect()
    }

    /// CSV with columns `z,value,kind,n,k,kbar`, reals to 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "z,value,kind,n,k,kbar")?;
        let ModelParams { n, k, kbar } = self.params;
        for p in &self.points {
            writeln!(out, "{},{:.16e},{},{n},{k},{kbar}", p.z, p.value, self.kind)?;
        }
        Ok(())
    }
}

/// `T_n = s·ln(s·n/(kbar·k))` with `s = √(kbar/ln(n/kbar))`.
///
/// The curve is increasing on the bulk of the overlap range when `T_n` is
/// small compared to `kbar·k/n`, decreasing when it is large compared to
/// `k`, and dips in between.
pub fn t_statistic(p: &ModelParams) -> Result<f64> {
    if p.kbar >= p.n {
        return Err(param("t_statistic needs kbar < n"));
    }
    let (n, k, kbar) = (p.n as f64, p.k as f64, p.kbar as f64);
    let s = (kbar / (n / kbar).ln()).sqrt();
    Ok(s * (s * n / (kbar * k)).ln())
}

/// `√(kbar/ln(n/kbar))`, the unit in which well boundaries are measured.
pub fn overlap_unit(p: &ModelParams) -> Option<f64> {
    (p.kbar < p.n).then(|| (p.kbar as f64 / (p.n as f64 / p.kbar as f64).ln()).sqrt())
}
