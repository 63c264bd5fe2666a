//! Closed-form evaluators: entropy toolkit, log-binomials, first moment
//! curves and the monotonicity classifiers built on them.

mod classify;
mod combin;
mod curve;
mod entropy;
mod phase;

pub use classify::{classify_asymptotic, classify_empirical, ClassifierConfig, Monotonicity, MonotonicityClass};
pub(crate) use combin::ln_choose;
pub use combin::{log_binomial, log_factorial};
pub use curve::{
    a_func, gamma_curve, gamma_excess, gamma_tilde, gamma_tilde_caption, overlap_unit, phi_curve, t_statistic,
    CurveKind, CurvePoint, OverlapCurve,
};
pub(crate) use entropy::{deficit, offset_for_deficit};
pub use entropy::{entropy, entropy_inverse, entropy_inverse_taylor, rate};
pub use phase::{phase_diagram, PhaseCell, PhaseRegion, PhaseTable};
