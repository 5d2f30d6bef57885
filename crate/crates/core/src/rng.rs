//! Seedable, independently addressable random streams.
//!
//! A stream is a ChaCha8 generator keyed by `(seed, purpose, generation)`
//! with the ChaCha stream id set to a per-purpose index (matrix, column,
//! ...). Deriving a stream is O(1) and needs no warm-up, so results do not
//! depend on the order in which workers ask for their streams.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::SignMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

impl Seed {
    /// Seed drawn from the operating system's entropy source.
    pub fn from_entropy() -> Seed {
        Seed(rand::random())
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    pub fn offset(self, by: u64) -> Seed {
        Seed(self.0.wrapping_add(by))
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Accepts decimal or `0x`-prefixed hexadecimal.
impl FromStr for Seed {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
            Some(hex) => u64::from_str_radix(hex, 16),
            None => s.parse::<u64>(),
        };
        parsed
            .map(Seed)
            .map_err(|e| Error::Config(format!("invalid seed {s:?}: {e}")))
    }
}

/// What a derived stream is used for. Part of the stream key, so streams
/// for different purposes never overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum StreamPurpose {
    Plain = 0,
    Init = 1,
    Select = 2,
    Crossover = 3,
    Mutate = 4,
    Restart = 5,
}

#[derive(Clone)]
pub struct RngStream {
    seed: Seed,
    id: u64,
    rng: ChaCha8Rng,
}

impl fmt::Debug for RngStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RngStream")
            .field("seed", &self.seed)
            .field("id", &self.id)
            .finish_non_exhaustive()
    }
}

impl RngStream {
    pub fn new(seed: Seed, stream_id: u64) -> Self {
        Self::derive(seed, StreamPurpose::Plain, 0, stream_id)
    }

    pub fn derive(seed: Seed, purpose: StreamPurpose, generation: u64, index: u64) -> Self {
        let mut key = [0u8; 32];
        key[0..8].copy_from_slice(&seed.0.to_le_bytes());
        key[8..16].copy_from_slice(&(purpose as u64).to_le_bytes());
        key[16..24].copy_from_slice(&generation.to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(index);
        RngStream {
            seed,
            id: index,
            rng,
        }
    }

    pub fn seed(&self) -> Seed {
        self.seed
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    /// Uniform integer in `[lo, hi]`, both ends inclusive.
    pub fn uniform_int(&mut self, lo: i64, hi: i64) -> Result<i64> {
        if lo > hi {
            return Err(Error::Range { lo, hi });
        }
        Ok(self.rng.random_range(lo..=hi))
    }

    /// Uniform index in `[lo, hi]`; callers guarantee `lo <= hi`.
    #[inline]
    pub(crate) fn index_in(&mut self, lo: usize, hi: usize) -> usize {
        debug_assert!(lo <= hi);
        self.rng.random_range(lo..=hi)
    }

    /// In-place Fisher-Yates shuffle: for each position `i` in `0..len-1`,
    /// swap with a uniform position in `[i, len-1]`.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        let n = items.len();
        for i in 0..n.saturating_sub(1) {
            let k = self.index_in(i, n - 1);
            items.swap(i, k);
        }
    }
}

/// Fisher-Yates shuffle of one column of `q`. Column 0 is the all-+1 column
/// and is never shuffled.
pub fn shuffle_column(q: &mut SignMatrix, col: usize, stream: &mut RngStream) -> Result<()> {
    let m = q.order();
    if col == 0 || col >= m {
        return Err(Error::Index {
            what: "shuffle column",
            index: col,
            lo: 1,
            hi: m.saturating_sub(1),
        });
    }
    shuffle_column_slice(q.entries_mut(), m, col, stream);
    Ok(())
}

pub(crate) fn shuffle_column_slice(entries: &mut [i8], m: usize, col: usize, stream: &mut RngStream) {
    for i1 in 0..m - 1 {
        let i2 = stream.index_in(i1, m - 1);
        entries.swap(m * i1 + col, m * i2 + col);
    }
}
