use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub type TrialRng = ChaCha8Rng;

/// Generator for one trial: key = `seed ‖ stream` (little endian, zero
/// padded), ChaCha stream = trial index.
pub fn trial_rng(seed: u64, stream: u64, trial: u64) -> TrialRng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&stream.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial);
    rng
}

/// Runs `trials` independent trials in parallel, returned in trial order.
pub(crate) fn run_trials<T, F>(seed: u64, stream: u64, trials: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut TrialRng) -> T + Sync,
{
    (0..trials as u64)
        .into_par_iter()
        .map(|i| f(&mut trial_rng(seed, stream, i)))
        .collect()
}
