//! Seeded, splittable random streams.
//!
//! Every Monte Carlo task draws from `stream_rng(root, task)`. Streams are
//! independent ChaCha8 streams under the same key, so results do not depend on
//! how tasks are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn stream_rng(root: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(root);
    rng.set_stream(stream);
    rng
}

/// Mixes a label into a root seed (splitmix64 finalizer) so distinct estimators
/// sharing a root seed use distinct keys.
pub fn derive_seed(root: u64, label: u64) -> u64 {
    let mut z = root ^ label.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
