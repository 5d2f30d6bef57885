//! Fitness functions over the Gram product.
//!
//! Both functions only look at off-diagonal Gram entries. The batched kernel
//! never materializes `Q^T Q`: each column is packed into a bitmask of its
//! negative entries, so the dot product of columns `i` and `j` is
//! `m - 2 * popcount(mask_i ^ mask_j)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::matrix::SignMatrix;

/// Nonnegative fitness value; zero exactly for Hadamard matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fitness(pub u64);

impl Fitness {
    pub const ZERO: Fitness = Fitness(0);

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitnessKind {
    /// Sum of absolute Gram entries minus m².
    F1,
    /// Number of nonzero Gram entries minus m.
    #[default]
    F2,
}

impl FitnessKind {
    pub fn name(self) -> &'static str {
        match self {
            FitnessKind::F1 => "f1",
            FitnessKind::F2 => "f2",
        }
    }
}

impl fmt::Display for FitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FitnessKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "f1" => Ok(FitnessKind::F1),
            "f2" => Ok(FitnessKind::F2),
            other => Err(Error::Config(format!("unknown fitness function {other:?}"))),
        }
    }
}

pub fn fitness_f1(q: &SignMatrix) -> Fitness {
    score(q.entries(), q.order(), FitnessKind::F1)
}

pub fn fitness_f2(q: &SignMatrix) -> Fitness {
    score(q.entries(), q.order(), FitnessKind::F2)
}

pub fn fitness(q: &SignMatrix, kind: FitnessKind) -> Fitness {
    score(q.entries(), q.order(), kind)
}

/// Exact check that `Q^T Q = m I`, by direct dot products with early exit.
pub fn is_hadamard(q: &SignMatrix) -> bool {
    let m = q.order();
    let e = q.entries();
    for i in 0..m {
        for j in i + 1..m {
            let dot: i32 = (0..m)
                .map(|r| i32::from(e[m * r + i]) * i32::from(e[m * r + j]))
                .sum();
            if dot != 0 {
                return false;
            }
        }
    }
    true
}

/// Fitness of one row-major order-`m` matrix stored in `entries`.
pub fn score(entries: &[i8], m: usize, kind: FitnessKind) -> Fitness {
    debug_assert_eq!(entries.len(), m * m);
    if m <= 64 {
        let mut cols = [0u64; 64];
        for (i, row) in entries.chunks_exact(m).enumerate() {
            for (c, &e) in cols.iter_mut().zip(row) {
                *c |= u64::from((e as u8) >> 7) << i;
            }
        }
        let cols = &cols[..m];
        sum_pairs(m, kind, |i, j| (cols[i] ^ cols[j]).count_ones())
    } else {
        let words = m.div_ceil(64);
        let mut cols = vec![0u64; m * words];
        for (i, row) in entries.chunks_exact(m).enumerate() {
            let (w, bit) = (i / 64, i % 64);
            for (j, &e) in row.iter().enumerate() {
                cols[j * words + w] |= u64::from((e as u8) >> 7) << bit;
            }
        }
        sum_pairs(m, kind, |i, j| {
            let a = &cols[i * words..(i + 1) * words];
            let b = &cols[j * words..(j + 1) * words];
            a.iter().zip(b).map(|(x, y)| (x ^ y).count_ones()).sum()
        })
    }
}

#[inline(always)]
fn sum_pairs(m: usize, kind: FitnessKind, differing: impl Fn(usize, usize) -> u32) -> Fitness {
    let m32 = m as i64;
    let mut total = 0u64;
    match kind {
        FitnessKind::F1 => {
            for i in 0..m {
                for j in i + 1..m {
                    let dot = m32 - 2 * i64::from(differing(i, j));
                    total += dot.unsigned_abs();
                }
            }
        }
        FitnessKind::F2 => {
            // A column pair is orthogonal exactly when half its rows differ.
            let half = (m / 2) as u32;
            let odd = m % 2 == 1;
            for i in 0..m {
                for j in i + 1..m {
                    total += u64::from(odd || differing(i, j) != half);
                }
            }
        }
    }
    // The Gram matrix is symmetric, so every off-diagonal pair counts twice.
    Fitness(2 * total)
}
