//! Overlap curves of single instances and overlap gap certificates.
//!
//! A certificate for thresholds `ζ₁ < ζ₂` and level `r` asserts that
//! `kbar`-subsets with at least `r` edges exist at overlap `≤ ζ₁` and at
//! overlap `≥ ζ₂`, and that none exist strictly in between. The last part is
//! a statement about every subset, so certificates are only issued from
//! curves computed by exhaustive search.

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::landscape::{exact_overlap_densest, local_search_densest, Method};
use crate::model::{PlantedGraph, VertexSubset};
use crate::numerics::{CurveKind, OverlapCurve};
use crate::rng::derive_seed;

/// `z ↦ d(z)` for one instance, with a maximiser per overlap.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DCurve {
    pub curve: OverlapCurve,
    pub method: Method,
    pub witnesses: Vec<VertexSubset>,
}

impl DCurve {
    pub fn witness_at(&self, z: u64) -> Option<&VertexSubset> {
        let i = z.checked_sub(self.curve.z_lo)? as usize;
        self.witnesses.get(i)
    }
}

/// Options of the heuristic curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalOptions {
    pub restarts: u64,
    pub seed: u64,
}

impl Default for LocalOptions {
    fn default() -> Self {
        Self { restarts: 16, seed: 0 }
    }
}

/// The overlap-restricted densest values over every feasible overlap, from
/// `max(0, kbar − (n − k))` to `k`. Exhaustive values are exact; local
/// search values are lower bounds, with overlap `z` searched from seed
/// `derive_seed(seed, z)`.
pub fn d_curve(g: &PlantedGraph, kbar: usize, method: Method, budget: u64, local: LocalOptions) -> Result<DCurve> {
    let p = g.params(kbar)?;
    let z_lo = kbar.saturating_sub(g.n() - g.k());
    let z_hi = g.k();
    let results = (z_lo..=z_hi)
        .map(|z| match method {
            Method::Exhaustive => exact_overlap_densest(g, kbar, z, budget),
            Method::LocalSearch => {
                local_search_densest(g, kbar, Some(z), local.restarts, derive_seed(local.seed, z as u64))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = results.iter().map(|r| r.value as f64).collect();
    Ok(DCurve {
        curve: OverlapCurve::from_values(p, CurveKind::Empirical, z_lo as u64, &values)?,
        method,
        witnesses: results.into_iter().map(|r| r.witness).collect(),
    })
}

/// An interior overlap strictly below both endpoint values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DipWitness {
    pub z_star: u64,
    pub lo: u64,
    pub hi: u64,
    /// `min(curve(lo), curve(hi)) − curve(z_star)`.
    pub depth: f64,
}

/// The deepest interior dip below both endpoints (smallest `z` on ties).
pub fn type_m_witness(curve: &OverlapCurve) -> Option<DipWitness> {
    let pts = curve.points();
    if pts.len() < 3 {
        return None;
    }
    let (first, last) = (pts[0], pts[pts.len() - 1]);
    let level = first.value.min(last.value);
    let mut best: Option<DipWitness> = None;
    for p in &pts[1..pts.len() - 1] {
        let depth = level - p.value;
        if depth > 0.0 && best.is_none_or(|b| depth > b.depth) {
            best = Some(DipWitness {
                z_star: p.z,
                lo: first.z,
                hi: last.z,
                depth,
            });
        }
    }
    best
}

/// A dense subset inside the forbidden band.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandViolation {
    pub z: u64,
    pub edges: u64,
    pub subset: VertexSubset,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OGPCertificate {
    pub holds: bool,
    pub zeta1: u64,
    pub zeta2: u64,
    pub r_n: f64,
    pub low_witness: Option<VertexSubset>,
    pub high_witness: Option<VertexSubset>,
    pub violation: Option<BandViolation>,
    /// True when the thresholds were chosen from the data by [`auto_certify`].
    pub data_driven: bool,
    pub explanation: String,
}

/// `(z, value)` of the largest curve value over `zs`, smallest `z` on ties.
fn arg_max(curve: &OverlapCurve, zs: impl Iterator<Item = u64>) -> Option<(u64, f64)> {
    let mut best: Option<(u64, f64)> = None;
    for z in zs {
        if let Some(v) = curve.value_at(z) {
            if best.is_none_or(|b| v > b.1) {
                best = Some((z, v));
            }
        }
    }
    best
}

/// Checks both certificate conditions on an exhaustive curve.
pub fn certify_ogp(
    g: &PlantedGraph,
    kbar: usize,
    d: &DCurve,
    zeta1: u64,
    zeta2: u64,
    r_n: f64,
) -> Result<OGPCertificate> {
    if d.method != Method::Exhaustive {
        return Err(Error::NotCertifiable);
    }
    if d.curve.params != g.params(kbar)? {
        return Err(param("curve was computed for different parameters"));
    }
    let c = &d.curve;
    if zeta1 >= zeta2 || zeta1 < c.z_lo || zeta2 > c.z_hi {
        return Err(param(format!(
            "need z_lo <= zeta1 < zeta2 <= z_hi, got zeta1={zeta1} zeta2={zeta2} on [{}, {}]",
            c.z_lo, c.z_hi
        )));
    }
    let low = arg_max(c, c.z_lo..=zeta1).expect("nonempty range");
    let high = arg_max(c, zeta2..=c.z_hi).expect("nonempty range");
    let mid = arg_max(c, zeta1 + 1..zeta2);
    let low_ok = low.1 >= r_n;
    let high_ok = high.1 >= r_n;
    let mid_ok = mid.is_none_or(|m| m.1 < r_n);
    let holds = low_ok && high_ok && mid_ok;
    let violation = mid.filter(|m| m.1 >= r_n).map(|(z, v)| BandViolation {
        z,
        edges: v as u64,
        subset: d.witness_at(z).expect("witness per point").clone(),
    });
    let explanation = if holds {
        format!(
            "subsets with >= {r_n} edges exist at overlap {} and {} and none at overlap in ({zeta1}, {zeta2})",
            low.0, high.0
        )
    } else {
        let mut why = Vec::new();
        if !low_ok {
            why.push(format!(
                "no subset with >= {r_n} edges at overlap <= {zeta1} (best {})",
                low.1
            ));
        }
        if !high_ok {
            why.push(format!(
                "no subset with >= {r_n} edges at overlap >= {zeta2} (best {})",
                high.1
            ));
        }
        if let Some(v) = &violation {
            why.push(format!("overlap {} has a subset with {} edges >= {r_n}", v.z, v.edges));
        }
        why.join("; ")
    };
    Ok(OGPCertificate {
        holds,
        zeta1,
        zeta2,
        r_n,
        low_witness: low_ok.then(|| d.witness_at(low.0).unwrap().clone()),
        high_witness: high_ok.then(|| d.witness_at(high.0).unwrap().clone()),
        violation,
        data_driven: false,
        explanation,
    })
}

/// Picks thresholds from the exhaustive curve. The band is the maximal
/// run of overlaps around the deepest dip whose values stay below both
/// endpoints; `ζ₁`, `ζ₂` are its outer neighbours and `r` sits halfway
/// between the band maximum and the lower endpoint value.
pub fn auto_certify(g: &PlantedGraph, kbar: usize, budget: u64) -> Result<OGPCertificate> {
    let d = d_curve(g, kbar, Method::Exhaustive, budget, LocalOptions::default())?;
    auto_certify_curve(g, kbar, &d)
}

/// [`auto_certify`] on a precomputed curve.
pub fn auto_certify_curve(g: &PlantedGraph, kbar: usize, d: &DCurve) -> Result<OGPCertificate> {
    if d.method != Method::Exhaustive {
        return Err(Error::NotCertifiable);
    }
    let c = &d.curve;
    let Some(dip) = type_m_witness(c) else {
        return Ok(OGPCertificate {
            holds: false,
            zeta1: c.z_lo,
            zeta2: c.z_hi,
            r_n: f64::NAN,
            low_witness: None,
            high_witness: None,
            violation: None,
            data_driven: true,
            explanation: "no interior overlap lies below both endpoint values (curve is dip free)".into(),
        });
    };
    let level = c.value_at(dip.lo).unwrap().min(c.value_at(dip.hi).unwrap());
    let below = |z: u64| c.value_at(z).unwrap() < level;
    let mut a = dip.z_star;
    while a > c.z_lo && below(a - 1) {
        a -= 1;
    }
    let mut b = dip.z_star;
    while b < c.z_hi && below(b + 1) {
        b += 1;
    }
    let band_max = (a..=b)
        .map(|z| c.value_at(z).unwrap())
        .fold(f64::NEG_INFINITY, f64::max);
    let r_n = 0.5 * (band_max + level);
    let mut cert = certify_ogp(g, kbar, d, a - 1, b + 1, r_n)?;
    cert.data_driven = true;
    cert.explanation = format!("thresholds chosen from the curve: {}", cert.explanation);
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landscape::DEFAULT_BUDGET;
    use crate::model::{sample_planted, ModelParams};

    fn curve(values: &[f64]) -> OverlapCurve {
        let p = ModelParams::new(100, values.len() as u64 - 1, 10).unwrap();
        OverlapCurve::from_values(p, CurveKind::Empirical, 0, values).unwrap()
    }

    #[test]
    fn type_m_on_constructed_curves() {
        assert!(type_m_witness(&curve(&[1.0, 2.0, 3.0, 4.0])).is_none());
        let w = type_m_witness(&curve(&[5.0, 1.0, 4.0])).unwrap();
        assert_eq!((w.z_star, w.depth), (1, 3.0));
        let w = type_m_witness(&curve(&[5.0, 2.0, 2.0, 4.0])).unwrap();
        assert_eq!(w.z_star, 1);
        assert!(type_m_witness(&curve(&[1.0, 2.0])).is_none());
    }

    #[test]
    fn gamma_curve_dips_at_kbar_equal_k() {
        let p = ModelParams::new(10_000_000, 700, 700).unwrap();
        let c = OverlapCurve::first_moment(p, CurveKind::Gamma).unwrap();
        assert!(type_m_witness(&c).is_some());
    }

    #[test]
    fn curve_endpoint_is_clique() {
        let g = sample_planted(14, 4, 3).unwrap();
        let d = d_curve(&g, 4, Method::Exhaustive, DEFAULT_BUDGET, LocalOptions::default()).unwrap();
        assert_eq!(d.curve.value_at(4), Some(6.0));
        assert_eq!(d.curve.z_lo, 0);
        let ls = d_curve(&g, 4, Method::LocalSearch, DEFAULT_BUDGET, LocalOptions::default()).unwrap();
        for (a, b) in ls.curve.points().iter().zip(d.curve.points()) {
            assert!(a.value <= b.value);
        }
        assert!(matches!(certify_ogp(&g, 4, &ls, 0, 4, 3.0), Err(Error::NotCertifiable)));
    }

    #[test]
    fn vacuous_thresholds_never_hold() {
        let g = sample_planted(14, 4, 5).unwrap();
        let d = d_curve(&g, 5, Method::Exhaustive, DEFAULT_BUDGET, LocalOptions::default()).unwrap();
        assert!(!certify_ogp(&g, 5, &d, 0, 3, 0.0).unwrap().holds);
        assert!(!certify_ogp(&g, 5, &d, 0, 3, 11.0).unwrap().holds);
        assert!(certify_ogp(&g, 5, &d, 2, 2, 3.0).is_err());
    }

    #[test]
    fn auto_certificates_are_consistent() {
        let mut held = 0;
        for seed in 0..40 {
            let g = sample_planted(14, 4, seed).unwrap();
            let d = d_curve(&g, 5, Method::Exhaustive, DEFAULT_BUDGET, LocalOptions::default()).unwrap();
            let cert = auto_certify_curve(&g, 5, &d).unwrap();
            assert_eq!(cert.holds, type_m_witness(&d.curve).is_some());
            if cert.holds {
                held += 1;
                let again = certify_ogp(&g, 5, &d, cert.zeta1, cert.zeta2, cert.r_n).unwrap();
                assert!(again.holds);
                assert!(cert.zeta1 < cert.zeta2);
                assert!(cert.low_witness.is_some() && cert.high_witness.is_some());
            }
        }
        assert!(held > 0);
    }
}
