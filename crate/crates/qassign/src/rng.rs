//! Deterministic RNG streams derived from a master seed.
//!
//! Every stochastic stage of an experiment draws from its own stream, keyed
//! by `(master seed, label, index)`. Streams are independent of evaluation
//! order, so parallel and sequential runs of the same configuration produce
//! identical output.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Derive a dedicated RNG stream for one purpose within an experiment.
///
/// `label` names the purpose (e.g. `"anneal"`, `"shots"`) and `index`
/// distinguishes repetitions (trial number, sweep row, seed index).
pub fn seeded_rng(master: u64, label: &str, index: u64) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(master.to_le_bytes());
    hasher.update([0x1f]);
    hasher.update(label.as_bytes());
    hasher.update([0x1f]);
    hasher.update(index.to_le_bytes());
    let digest = hasher.finalize();
    let mut seed = [0u8; 32];
    seed.copy_from_slice(&digest);
    ChaCha8Rng::from_seed(seed)
}
