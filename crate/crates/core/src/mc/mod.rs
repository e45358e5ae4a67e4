//! Seeded Monte-Carlo checks of the closed-form results.
//!
//! Every trial draws from its own generator keyed by `(seed, stream, trial)`,
//! so results do not depend on how trials are split across threads.

pub mod poisson;
mod rng;
mod sims;

pub use rng::{trial_rng, TrialRng};
pub use sims::*;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_240_917;
