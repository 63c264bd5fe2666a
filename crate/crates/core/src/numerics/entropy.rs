//! Binary entropy in nats on the upper branch `[1/2, 1]`, its inverse and
//! the large-deviation rate `r(γ) = ln 2 − h(γ)`.
//!
//! `h(x) = −x ln x − (1−x) ln(1−x)`, extended by continuity with `h(1) = 0`.
//!
//! Near `x = 1/2` the entropy is flat and `ln 2 − h(x)` suffers
//! cancellation when formed by subtraction. Everything here is therefore
//! routed through the offset `d = x − 1/2` and the deficit
//! `ρ(d) = ln 2 − h(1/2 + d)`, which is evaluated from its power series for
//! small `d`. First moment curves at `kbar ~ 10⁶` need `ρ` around `10⁻⁷`
//! with full relative precision.

use std::f64::consts::{LN_2, SQRT_2};

use crate::error::{domain, Result};

const SLACK: f64 = 1e-12;

/// `ρ(d) = ln 2 − h(1/2 + d)` for `d ∈ [0, 1/2]`.
pub(crate) fn deficit(d: f64) -> f64 {
    let u = 2.0 * d;
    if u < 0.1 {
        // ρ = Σ_{j≥0} u^{2j+2} / ((2j+1)(2j+2))
        let u2 = u * u;
        let mut pow = u2;
        let mut sum = 0.0;
        let mut j = 0.0;
        loop {
            let term = pow / ((2.0 * j + 1.0) * (2.0 * j + 2.0));
            sum += term;
            if term <= sum * 1e-18 {
                break;
            }
            pow *= u2;
            j += 1.0;
        }
        sum
    } else if u >= 1.0 {
        LN_2
    } else {
        0.5 * ((1.0 + u) * u.ln_1p() + (1.0 - u) * (-u).ln_1p())
    }
}

/// `dρ/dd = ln((1+2d)/(1−2d))`.
fn deficit_slope(d: f64) -> f64 {
    let u = 2.0 * d;
    u.ln_1p() - (-u).ln_1p()
}

/// Offset `d ∈ [0, 1/2]` with `ρ(d) = eps`, i.e. `h⁻¹(ln 2 − eps) − 1/2`.
///
/// Bisection down to a `1e-13` bracket followed by two Newton steps on
/// `√ρ`, which is close to linear in `d` (`√ρ ≈ √2·d`). Newton on `h`
/// itself is avoided because `h′` vanishes at `1/2`.
pub(crate) fn offset_for_deficit(eps: f64) -> f64 {
    if eps <= 0.0 {
        return 0.0;
    }
    if eps >= LN_2 {
        return 0.5;
    }
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if deficit(mid) < eps {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let target = eps.sqrt();
    let mut d = 0.5 * (lo + hi);
    for _ in 0..2 {
        let r = deficit(d);
        if r <= 0.0 {
            break;
        }
        let phi = r.sqrt();
        let slope = deficit_slope(d) / (2.0 * phi);
        if !slope.is_finite() || slope <= 0.0 {
            break;
        }
        d = (d - (phi - target) / slope).clamp(0.0, 0.5);
    }
    d
}

/// Binary entropy `h(x)` in nats for `x ∈ [1/2, 1]`.
pub fn entropy(x: f64) -> Result<f64> {
    if !(0.5..=1.0).contains(&x) {
        return Err(domain(format!("entropy needs x in [1/2, 1], got {x}")));
    }
    if x == 1.0 {
        return Ok(0.0);
    }
    Ok(-x * x.ln() - (1.0 - x) * (1.0 - x).ln())
}

/// `r(γ, 1/2) = ln 2 − h(γ)`, computed without cancellation.
pub fn rate(gamma: f64) -> Result<f64> {
    if !(0.5..=1.0).contains(&gamma) {
        return Err(domain(format!("rate needs gamma in [1/2, 1], got {gamma}")));
    }
    Ok(deficit(gamma - 0.5))
}

/// Inverse of `h` on the branch `[1/2, 1]`.
pub fn entropy_inverse(y: f64) -> Result<f64> {
    if !(-SLACK..=LN_2 + SLACK).contains(&y) {
        return Err(domain(format!("entropy_inverse needs y in [0, ln 2], got {y}")));
    }
    let y = y.clamp(0.0, LN_2);
    Ok(0.5 + offset_for_deficit(LN_2 - y))
}

/// Three-term expansion `h⁻¹(ln 2 − ε) ≈ 1/2 + √(ε/2) − ε^{3/2}/(6√2)`.
///
/// The remainder is `O(ε^{5/2})`; useful for `ε` up to roughly `0.1`.
pub fn entropy_inverse_taylor(eps: f64) -> Result<f64> {
    if !(eps >= 0.0) {
        return Err(domain(format!("taylor expansion needs eps >= 0, got {eps}")));
    }
    Ok(0.5 + (eps / 2.0).sqrt() - eps.powf(1.5) / (6.0 * SQRT_2))
}
