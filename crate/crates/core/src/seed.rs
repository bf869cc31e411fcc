//! Named seed derivation.
//!
//! Every random stream in a run is derived from one root seed plus a
//! component name and a short list of indices (generation, slot, episode...).
//! The mixing is pure integer arithmetic so derived seeds are identical on
//! every platform.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Derive a child seed from `root`, a component name and indices.
pub fn derive(root: u64, component: &str, indices: &[u64]) -> u64 {
    let mut h = splitmix(root ^ fnv1a(component));
    for &i in indices {
        h = splitmix(h ^ splitmix(i));
    }
    h
}

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn derived_rng(root: u64, component: &str, indices: &[u64]) -> Rng {
    rng(derive(root, component, indices))
}
