//! Seeded random streams.
//!
//! Every consumer draws from a ChaCha8 stream selected by `(seed, stream)`,
//! with a per-purpose salt mixed into the seed so that, for example, the
//! tagger's epoch shuffles never coincide with the augmenter's per-example
//! draws under the same user seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug)]
pub(crate) enum Purpose {
    Split = 0x5350_4c49,
    TaggerShuffle = 0x5441_4747,
    Augment = 0x4155_474d,
    ClassifierShuffle = 0x434c_4153,
}

pub(crate) fn stream(purpose: Purpose, seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((purpose as u64) << 32));
    rng.set_stream(stream);
    rng
}
