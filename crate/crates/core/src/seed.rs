//! Seeded randomness.
//!
//! All randomness flows from an explicit [`Seed`]. Streams are ChaCha8, whose
//! output is specified independently of platform and word size.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used for every stochastic operation in the crate.
pub type SimRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Seed(pub u64);

impl Seed {
    pub fn rng(self) -> SimRng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// Child seed for a labelled sub-stream, e.g. `(m, n, trial)`.
    ///
    /// Each part is folded in with a SplitMix64 finaliser, so distinct label
    /// tuples give unrelated streams and the result depends only on the inputs.
    pub fn derive(self, parts: &[u64]) -> Seed {
        let mut state = mix64(self.0 ^ 0x6d61_6e69_706c_6162);
        for &p in parts {
            state = mix64(state.wrapping_add(0x9e37_79b9_7f4a_7c15) ^ mix64(p));
        }
        Seed(state)
    }
}

/// SplitMix64 output function.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Seed {
    type Err = std::num::ParseIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse().map(Seed)
    }
}
