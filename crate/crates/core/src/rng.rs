//! Seeded generators. Every task draws from its own ChaCha stream, so
//! suites are reproducible trial by trial.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// FNV-1a, used only to turn task names into stable seeds.
fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x100_0000_01b3))
}

/// The generator for trial `index` of `task` under `seed`.
pub fn stream(seed: u64, task: &str, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv1a(task));
    rng.set_stream(index);
    rng
}
