//! Bayesian latent space models for undirected binary networks.
//!
//! Three models share one likelihood, a Bernoulli tie per dyad with
//! model-specific log-odds:
//!
//! * [`models::distance`]: `ζ − ‖u_i − u_j‖`, positions in a Euclidean space;
//! * [`models::class`]: `η_{φ(ξ_i, ξ_j)}`, a stochastic block model;
//! * [`models::eigen`]: `ζ + Σ_k λ_k u_ik u_jk`.
//!
//! [`mcmc`] drives adaptive Metropolis-within-Gibbs chains for any of them,
//! [`eval`] scores fits (WAIC, DIC, cross-validated AUC, posterior predictive
//! checks), and [`export`] writes the resulting tables.

pub mod datasets;
pub mod error;
pub mod eval;
pub mod export;
pub mod math;
pub mod mcmc;
pub mod models;
pub mod network;
pub mod partition;

pub use error::{Error, Result};
pub use mcmc::{run_chains, LatentModel, McmcConfig, PosteriorSamples};
pub use models::{AnyModel, ModelKind};
pub use network::{NetStats, Network};
