//! Log-space factorials and binomial coefficients.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{param, Result};

const TABLE: usize = 256;

fn ln_factorial_table() -> &'static [f64; TABLE] {
    static T: OnceLock<[f64; TABLE]> = OnceLock::new();
    T.get_or_init(|| {
        let mut t = [0.0; TABLE];
        for m in 2..TABLE {
            t[m] = t[m - 1] + (m as f64).ln();
        }
        t
    })
}

/// Stirling remainder `ln m! − [(m + ½) ln m − m + ½ ln 2π]`, `m ≥ 1`.
fn stirling_tail(m: u64) -> f64 {
    if (m as usize) < TABLE {
        let x = m as f64;
        return ln_factorial_table()[m as usize] - ((x + 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln());
    }
    let x = m as f64;
    let x2 = x * x;
    (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * x2)) / x2) / x2) / x
}

/// `ln m!`.
pub fn log_factorial(m: u64) -> f64 {
    if (m as usize) < TABLE {
        return ln_factorial_table()[m as usize];
    }
    let x = m as f64;
    (x + 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + stirling_tail(m)
}

/// `ln C(n, k)`, or `-inf` when `k > n`.
pub(crate) fn ln_choose(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    if k == 0 || k == n {
        return 0.0;
    }
    // evaluate with k ≤ n − k so that C(n, k) and C(n, n − k) agree exactly
    let k = k.min(n - k);
    if (n as usize) < TABLE {
        let t = ln_factorial_table();
        return t[n as usize] - t[k as usize] - t[(n - k) as usize];
    }
    // ln C = k ln(n/k) + j ln(n/j) + ½ ln(n / (2π k j)) + tails, j = n − k.
    // The two leading terms are positive, so no cancellation occurs.
    let j = n - k;
    let (nf, kf, jf) = (n as f64, k as f64, j as f64);
    let lead_k = -kf * (-jf / nf).ln_1p();
    let lead_j = -jf * (-kf / nf).ln_1p();
    let half = 0.5 * (nf / (2.0 * PI * kf * jf)).ln();
    lead_k + lead_j + half + stirling_tail(n) - stirling_tail(k) - stirling_tail(j)
}

/// `ln C(n, k)` via Stirling series with exact small-argument tables.
pub fn log_binomial(n: u64, k: u64) -> Result<f64> {
    if k > n {
        return Err(param(format!("log_binomial needs k <= n, got n={n} k={k}")));
    }
    Ok(ln_choose(n, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    // 60-digit evaluations, rounded.
    const LN_C_1E7_1E6: f64 = 3_250_821.959_900_843_8;
    const LN_C_1000_300: f64 = 607.271_496_264_374_76;
    const LN_C_1E8_HALF: f64 = 69_314_708.619_862_804;
    const LN_C_300_7: f64 = 31.330_804_890_292_139;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn small_exact_values() {
        assert!((log_binomial(4, 2).unwrap() - 6f64.ln()).abs() < 1e-15);
        assert_eq!(log_binomial(17, 0).unwrap(), 0.0);
        assert_eq!(log_binomial(17, 17).unwrap(), 0.0);
        assert!(log_binomial(3, 4).is_err());
        assert_eq!(ln_choose(3, 4), f64::NEG_INFINITY);
    }

    #[test]
    fn large_values_against_high_precision() {
        assert!(rel(log_binomial(10_000_000, 1_000_000).unwrap(), LN_C_1E7_1E6) < 1e-12);
        assert!(rel(log_binomial(1000, 300).unwrap(), LN_C_1000_300) < 1e-13);
        assert!(rel(log_binomial(100_000_000, 50_000_000).unwrap(), LN_C_1E8_HALF) < 1e-12);
        assert!(rel(log_binomial(300, 7).unwrap(), LN_C_300_7) < 1e-13);
    }

    #[test]
    fn pascal_rule_in_log_space() {
        for n in [300u64, 1000, 12_345] {
            for k in [1u64, 2, 7, 150, n / 2] {
                let lhs = ln_choose(n + 1, k + 1);
                let a = ln_choose(n, k);
                let b = ln_choose(n, k + 1);
                let m = a.max(b);
                let rhs = m + ((a - m).exp() + (b - m).exp()).ln();
                assert!(rel(lhs, rhs) < 1e-12, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn factorial_table_and_series_meet() {
        // ln 256! from the series against the running sum
        let sum: f64 = (2..=256u64).map(|m| (m as f64).ln()).sum();
        assert!(rel(log_factorial(256), sum) < 1e-14);
        assert!(rel(log_factorial(255) + (256f64).ln(), log_factorial(256)) < 1e-14);
    }
}
