//! Monotonicity classification of overlap curves.
//!
//! [`classify_empirical`] reads the shape off an evaluated curve on the
//! window `[⌊C₀·kbar·k/n⌋, ⌊(1−ε)k⌋]`. [`classify_asymptotic`] predicts it
//! from the parameters alone by locating `T_n` relative to `kbar·k/n` and
//! `k`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::curve::{overlap_unit, t_statistic, OverlapCurve};
use crate::error::{param, Result};
use crate::model::ModelParams;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifierConfig {
    pub epsilon: f64,
    pub c0: f64,
    pub d1: f64,
    pub d2: f64,
    pub e: f64,
}

impl Default for ClassifierConfig {
    /// `C₀ = 1.4` with `ε = 0.1` keeps the window nonempty at `n = 10⁷`,
    /// `k = 4000`, `kbar = n²/k²`, where `C₀·kbar·k/n` must stay below
    /// `(1−ε)k`.
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            c0: 1.4,
            d1: 0.25,
            d2: 1.0,
            e: 4.0,
        }
    }
}

impl ClassifierConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(param(format!("epsilon must lie in (0,1), got {}", self.epsilon)));
        }
        if !(self.c0 > 0.0 && self.d1 > 0.0 && self.d2 > 0.0 && self.e > 0.0) {
            return Err(param("C0, D1, D2 and E must be positive"));
        }
        if self.d1 >= self.d2 {
            return Err(param(format!("need D1 < D2, got {} >= {}", self.d1, self.d2)));
        }
        Ok(())
    }

    /// The window `𝓘 = [⌊C₀·kbar·k/n⌋, ⌊(1−ε)k⌋]`.
    pub fn window(&self, p: &ModelParams) -> (u64, u64) {
        let lo = (self.c0 * p.kbar as f64 * p.k as f64 / p.n as f64).floor() as u64;
        let hi = ((1.0 - self.epsilon) * p.k as f64).floor() as u64;
        (lo, hi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    NonMonotonic,
    Indeterminate,
}

impl fmt::Display for Monotonicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Monotonicity::Increasing => "Increasing",
            Monotonicity::Decreasing => "Decreasing",
            Monotonicity::NonMonotonic => "NonMonotonic",
            Monotonicity::Indeterminate => "Indeterminate",
        })
    }
}

/// A classification with its well witnesses.
///
/// `u1`, `u2` bound the well (overlaps) and are present only for
/// `NonMonotonic`; `u1_units`, `u2_units` express them in units of
/// `√(kbar/ln(n/kbar))`. `depth` is the drop from the smaller window endpoint
/// value to the bottom of the well; the asymptotic classifier leaves it
/// unset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityClass {
    pub label: Monotonicity,
    pub u1: Option<f64>,
    pub u2: Option<f64>,
    pub u1_units: Option<f64>,
    pub u2_units: Option<f64>,
    pub depth: Option<f64>,
    pub window: Option<(u64, u64)>,
}

impl MonotonicityClass {
    fn bare(label: Monotonicity) -> Self {
        Self {
            label,
            u1: None,
            u2: None,
            u1_units: None,
            u2_units: None,
            depth: None,
            window: None,
        }
    }
}

/// Shape of an evaluated curve on the window of `cfg`.
///
/// Successive differences are compared against `±1e-6·kbar`. A uniform sign
/// gives `Increasing` or `Decreasing`. Mixed signs give `NonMonotonic` when
/// some interior value lies strictly below both window endpoints (by more
/// than the tolerance); the well is the maximal run of overlaps around the
/// minimiser that stay below the smaller endpoint. Mixed signs without such
/// a dip (a hump) and curves flat to within tolerance are `Indeterminate`.
pub fn classify_empirical(curve: &OverlapCurve, cfg: &ClassifierConfig) -> Result<MonotonicityClass> {
    cfg.validate()?;
    if curve.len() < 3 {
        return Err(param("classification needs at least 3 curve points"));
    }
    let p = curve.params;
    let (lo, hi) = cfg.window(&p);
    let lo = lo.max(curve.z_lo);
    if hi > curve.z_hi {
        return Err(param(format!(
            "curve ends at {} but the window extends to {hi}",
            curve.z_hi
        )));
    }
    if lo + 2 > hi {
        return Err(param(format!(
            "classification window [{lo}, {hi}] has fewer than 3 points"
        )));
    }
    let vals: Vec<f64> = (lo..=hi).map(|z| curve.value_at(z).unwrap()).collect();
    let tol = 1e-6 * p.kbar as f64;
    let up = vals.windows(2).any(|w| w[1] - w[0] > tol);
    let down = vals.windows(2).any(|w| w[1] - w[0] < -tol);
    let mut out = match (up, down) {
        (true, false) => MonotonicityClass::bare(Monotonicity::Increasing),
        (false, true) => MonotonicityClass::bare(Monotonicity::Decreasing),
        (false, false) => MonotonicityClass::bare(Monotonicity::Indeterminate),
        (true, true) => {
            let edge = vals[0].min(vals[vals.len() - 1]);
            let (imin, vmin) = vals
                .iter()
                .copied()
                .enumerate()
                .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
            let depth = edge - vmin;
            if depth <= tol {
                MonotonicityClass::bare(Monotonicity::Indeterminate)
            } else {
                let mut a = imin;
                while a > 0 && vals[a - 1] < edge {
                    a -= 1;
                }
                let mut b = imin;
                while b + 1 < vals.len() && vals[b + 1] < edge {
                    b += 1;
                }
                let (u1, u2) = ((lo + a as u64) as f64, (lo + b as u64) as f64);
                let unit = overlap_unit(&p);
                MonotonicityClass {
                    label: Monotonicity::NonMonotonic,
                    u1: Some(u1),
                    u2: Some(u2),
                    u1_units: unit.map(|s| u1 / s),
                    u2_units: unit.map(|s| u2 / s),
                    depth: Some(depth),
                    window: None,
                }
            }
        }
    };
    out.window = Some((lo, hi));
    Ok(out)
}

/// Predicted shape of `Γ` from the parameters.
///
/// With `T_n` from [`t_statistic`] the curve is increasing when
/// `T_n < kbar·k/n`, decreasing when `T_n > k` and non-monotonic in
/// between. Each comparison must hold by the factor `margin ≥ 1`, otherwise
/// the result is `Indeterminate`; so are `kbar = n` and `k² = n`. In the
/// non-monotonic case `u1 = D₁⌈s⌉`, `u2 = D₂⌈s⌉` with
/// `s = √(kbar/ln(n/kbar))`.
pub fn classify_asymptotic(p: &ModelParams, cfg: &ClassifierConfig, margin: f64) -> MonotonicityClass {
    let indeterminate = MonotonicityClass::bare(Monotonicity::Indeterminate);
    if p.kbar >= p.n || p.k as u128 * p.k as u128 == p.n as u128 || !(margin >= 1.0) {
        return indeterminate;
    }
    let Ok(t) = t_statistic(p) else {
        return indeterminate;
    };
    let lower = p.kbar as f64 * p.k as f64 / p.n as f64;
    let upper = p.k as f64;
    if t * margin < lower {
        MonotonicityClass::bare(Monotonicity::Increasing)
    } else if t > upper * margin {
        MonotonicityClass::bare(Monotonicity::Decreasing)
    } else if t > lower * margin && t * margin < upper {
        let s = overlap_unit(p).unwrap();
        let cs = s.ceil();
        MonotonicityClass {
            label: Monotonicity::NonMonotonic,
            u1: Some(cfg.d1 * cs),
            u2: Some(cfg.d2 * cs),
            u1_units: Some(cfg.d1 * cs / s),
            u2_units: Some(cfg.d2 * cs / s),
            depth: None,
            window: Some(cfg.window(p)),
        }
    } else {
        indeterminate
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::curve::CurveKind;

    // Window [0, len - 1]: n is large enough that it starts at 0 and a
    // trailing point pads the (1 - ε)k cut.
    fn synthetic(values: &[f64]) -> OverlapCurve {
        let mut padded = values.to_vec();
        padded.push(*values.last().unwrap());
        let k = values.len() as u64;
        let p = ModelParams::new(1_000_000, k, k).unwrap();
        OverlapCurve::from_values(p, CurveKind::Empirical, 0, &padded).unwrap()
    }

    fn cfg() -> ClassifierConfig {
        // ε small enough that the whole synthetic curve is in the window
        ClassifierConfig {
            epsilon: 0.01,
            ..ClassifierConfig::default()
        }
    }

    #[test]
    fn synthetic_shapes() {
        let inc = synthetic(&[0.0, 1.0, 2.0, 3.0, 4.0]);
        assert_eq!(
            classify_empirical(&inc, &cfg()).unwrap().label,
            Monotonicity::Increasing
        );
        let dec = synthetic(&[4.0, 3.0, 2.0, 1.0, 0.0]);
        assert_eq!(
            classify_empirical(&dec, &cfg()).unwrap().label,
            Monotonicity::Decreasing
        );
        let v = synthetic(&[5.0, 3.0, 1.0, 2.0, 4.0]);
        let c = classify_empirical(&v, &cfg()).unwrap();
        assert_eq!(c.label, Monotonicity::NonMonotonic);
        assert_eq!(c.depth, Some(3.0));
        assert_eq!((c.u1, c.u2), (Some(1.0), Some(3.0)));
        let hump = synthetic(&[1.0, 3.0, 5.0, 4.0, 2.0]);
        assert_eq!(
            classify_empirical(&hump, &cfg()).unwrap().label,
            Monotonicity::Indeterminate
        );
        let flat = synthetic(&[1.0, 1.0, 1.0, 1.0]);
        assert_eq!(
            classify_empirical(&flat, &cfg()).unwrap().label,
            Monotonicity::Indeterminate
        );
        assert!(classify_empirical(&synthetic(&[1.0, 2.0]), &cfg()).is_err());
        assert!(classify_empirical(&synthetic(&[1.0]), &cfg()).is_err());
    }

    #[test]
    fn well_lies_strictly_inside_window() {
        let v = synthetic(&[6.0, 6.5, 2.0, 1.0, 2.0, 3.0, 7.0]);
        let c = classify_empirical(&v, &cfg()).unwrap();
        let (lo, hi) = c.window.unwrap();
        let (u1, u2) = (c.u1.unwrap(), c.u2.unwrap());
        assert!((lo as f64) < u1 && u1 <= u2 && u2 < hi as f64);
        assert_eq!((u1, u2), (2.0, 5.0));
    }

    #[test]
    fn config_validation() {
        let mut c = ClassifierConfig::default();
        assert!(c.validate().is_ok());
        c.d1 = 2.0;
        assert!(c.validate().is_err());
        c = ClassifierConfig {
            epsilon: 1.0,
            ..Default::default()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn asymptotic_reference_settings() {
        let c = ClassifierConfig::default();
        let f = |n, k, kb| classify_asymptotic(&ModelParams::new(n, k, kb).unwrap(), &c, 1.0).label;
        assert_eq!(f(10_000_000, 700, 700), Monotonicity::NonMonotonic);
        assert_eq!(f(10_000_000, 700, 980_000), Monotonicity::Decreasing);
        assert_eq!(f(10_000_000, 4000, 4000), Monotonicity::NonMonotonic);
        assert_eq!(f(10_000_000, 4000, 6_250_000), Monotonicity::Increasing);
        assert_eq!(f(10_000, 100, 200), Monotonicity::Indeterminate);
        assert_eq!(f(1000, 10, 1000), Monotonicity::Indeterminate);
    }

    #[test]
    fn wide_margin_turns_boundary_cases_indeterminate() {
        let c = ClassifierConfig::default();
        // T_n = 1376.6 against kbar·k/n = 2500: a factor of 1.8
        let p = ModelParams::new(10_000_000, 4000, 6_250_000).unwrap();
        assert_eq!(classify_asymptotic(&p, &c, 1.5).label, Monotonicity::Increasing);
        assert_eq!(classify_asymptotic(&p, &c, 2.0).label, Monotonicity::Indeterminate);
    }

    #[test]
    fn empirical_agrees_with_asymptotic_at_reference_settings() {
        let c = ClassifierConfig::default();
        for (k, kbar) in [(700u64, 700u64), (700, 980_000), (4000, 4000), (4000, 6_250_000)] {
            let p = ModelParams::new(10_000_000, k, kbar).unwrap();
            for kind in [CurveKind::Gamma, CurveKind::GammaTilde, CurveKind::Phi] {
                let curve = OverlapCurve::first_moment(p, kind).unwrap();
                let e = classify_empirical(&curve, &c).unwrap();
                assert_eq!(
                    e.label,
                    classify_asymptotic(&p, &c, 1.0).label,
                    "{kind} k={k} kbar={kbar}"
                );
            }
        }
    }
}
