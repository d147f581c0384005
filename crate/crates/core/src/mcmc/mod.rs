//! Shared MCMC machinery.

pub mod adaptive;
pub mod chain;
pub mod diagnostics;
pub mod geweke;
pub mod rng;

pub use adaptive::{rw_metropolis_step, AdaptiveScale};
pub use chain::{run_chains, samples_from_states, ChainOutput, LatentModel, McmcConfig, PosteriorSamples};
pub use diagnostics::gelman_rubin;
pub use rng::{ChainRng, InvGamma};
