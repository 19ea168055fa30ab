//! Seeded generators: random streams, SNN test matrices and Gaussian sketches.
//!
//! All randomness comes from ChaCha8 seeded with [`rand_chacha::ChaCha8Rng::seed_from_u64`].
//! Independent consumers draw from separate ChaCha streams (the 64-bit stream
//! id), so adding draws to one consumer never shifts another.

mod sketch;
mod snn;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use sketch::{sketch, SketchOperator};
pub use snn::{gen_snn, snn_terms, SnnConfig, SnnTerm, SparseVector};

/// Named substreams of a run seed.
///
/// Stream ids are `tag << 56 | index`:
///
/// | consumer                 | tag  | index            |
/// |--------------------------|------|------------------|
/// | initial partition        | 1    | 0                |
/// | Gaussian sketch          | 2    | sketch rank (0 = shared) |
/// | SNN left factor `x_i`    | 3    | term `i` (1-based) |
/// | SNN right factor `y_i`   | 4    | term `i` (1-based) |
/// | tests and fixtures       | 0xff | caller-chosen    |
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    InitPartition,
    Sketch(u64),
    SnnLeft(u64),
    SnnRight(u64),
    Test(u64),
}

impl Stream {
    pub fn id(self) -> u64 {
        const INDEX: u64 = (1 << 56) - 1;
        let (tag, index) = match self {
            Stream::InitPartition => (1, 0),
            Stream::Sketch(i) => (2, i),
            Stream::SnnLeft(i) => (3, i),
            Stream::SnnRight(i) => (4, i),
            Stream::Test(i) => (0xff, i),
        };
        (tag << 56) | (index & INDEX)
    }
}

/// Generator for one substream of `seed`.
pub fn rng_for(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream.id());
    rng
}
