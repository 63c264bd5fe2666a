//! Planted clique landscape laboratory.
//!
//! The crate evaluates first moment curves and monotonicity classifiers for
//! the overlap-restricted densest subgraph problem on `G(n, k, 1/2)` with a
//! planted clique, and checks the surrounding phenomena at desk scale:
//! exact overlap curves and overlap gap certificates, flatness of
//! edge-conditioned random graphs, and Gibbs dynamics on `kbar`-subsets.
//!
//! Module map:
//!
//! * [`model`]: instances, subsets, the graph file format.
//! * [`numerics`]: entropy toolkit, `Γ` and its approximations, classifiers.
//! * [`landscape`]: exact and heuristic densest subgraphs, binomial tails.
//! * [`flatness`]: `(γ,δ)`-flatness checks.
//! * [`mcmc`]: Metropolis dynamics, exact Gibbs measures, hitting times.
//! * [`ogp`]: overlap curves of instances and gap certificates.
//! * [`cli`]: the `plandscape` command line.

pub mod cli;
pub mod error;
pub mod flatness;
pub mod landscape;
pub mod mcmc;
pub mod model;
pub mod numerics;
pub mod ogp;
pub mod rng;

pub use error::{Error, Result};
