use crate::engine::config::GaConfig;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fitness::{score, Fitness, FitnessKind};
use crate::matrix::{is_balanced_slice, SignMatrix};
use crate::rng::{shuffle_column_slice, RngStream, Seed, StreamPurpose};

/// `4N` matrices of order `m` in one flat row-major buffer: entry `(i, j)`
/// of matrix `k` is at `m*m*k + m*i + j`.
///
/// Slots `[0, 2N)` are parents `P_1..P_2N`, slots `[2N, 4N)` offspring
/// `O_1..O_2N`.
#[derive(Clone, PartialEq, Eq)]
pub struct Population {
    order: usize,
    pairs: usize,
    data: Vec<i8>,
}

impl std::fmt::Debug for Population {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Population")
            .field("order", &self.order)
            .field("pairs", &self.pairs)
            .finish_non_exhaustive()
    }
}

impl Population {
    /// Builds a population from `4N` matrices of one order.
    pub fn from_matrices(matrices: &[SignMatrix]) -> Result<Self> {
        if matrices.is_empty() || !matrices.len().is_multiple_of(4) {
            return Err(Error::Config(format!(
                "population size must be a positive multiple of 4, got {}",
                matrices.len()
            )));
        }
        let order = matrices[0].order();
        if let Some(bad) = matrices.iter().find(|q| q.order() != order) {
            return Err(Error::Config(format!(
                "mixed orders in population: {order} and {}",
                bad.order()
            )));
        }
        let mut data = Vec::with_capacity(matrices.len() * order * order);
        for q in matrices {
            data.extend_from_slice(q.entries());
        }
        Ok(Population {
            order,
            pairs: matrices.len() / 4,
            data,
        })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    /// N, a quarter of the population.
    #[inline]
    pub fn pairs(&self) -> usize {
        self.pairs
    }

    #[inline]
    pub fn len(&self) -> usize {
        4 * self.pairs
    }

    pub fn is_empty(&self) -> bool {
        self.pairs == 0
    }

    #[inline]
    pub(crate) fn matrix_len(&self) -> usize {
        self.order * self.order
    }

    /// Row-major entries of matrix `k`.
    #[inline]
    pub fn slot(&self, k: usize) -> &[i8] {
        let len = self.matrix_len();
        &self.data[len * k..len * (k + 1)]
    }

    pub fn matrix(&self, k: usize) -> SignMatrix {
        SignMatrix::from_entries_unchecked(self.order, self.slot(k).to_vec())
    }

    pub fn matrices(&self) -> impl Iterator<Item = SignMatrix> + '_ {
        (0..self.len()).map(|k| self.matrix(k))
    }

    pub fn as_flat(&self) -> &[i8] {
        &self.data
    }

    /// Parent region (read-only) and offspring region (mutable).
    pub(crate) fn split_parents_offspring(&mut self) -> (&[i8], &mut [i8]) {
        let half = 2 * self.pairs * self.matrix_len();
        let (p, o) = self.data.split_at_mut(half);
        (p, o)
    }

    pub(crate) fn data_mut(&mut self) -> &mut [i8] {
        &mut self.data
    }

    /// Every individual satisfies the balanced-matrix contract.
    pub fn is_balanced(&self) -> bool {
        self.data
            .chunks_exact(self.matrix_len())
            .all(|q| is_balanced_slice(q, self.order))
    }

    pub(crate) fn set_slot(&mut self, k: usize, entries: &[i8]) {
        let len = self.matrix_len();
        self.data[len * k..len * (k + 1)].copy_from_slice(entries);
    }
}

/// Per-individual fitness, index-aligned with a [`Population`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FitnessVector {
    kind: FitnessKind,
    values: Vec<Fitness>,
}

impl FitnessVector {
    pub fn new(kind: FitnessKind, values: Vec<Fitness>) -> Self {
        FitnessVector { kind, values }
    }

    pub fn kind(&self) -> FitnessKind {
        self.kind
    }

    pub fn values(&self) -> &[Fitness] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> Fitness {
        self.values.iter().copied().min().unwrap_or(Fitness::ZERO)
    }

    /// Lowest index holding the minimum.
    pub fn argmin(&self) -> usize {
        let min = self.min();
        self.values.iter().position(|&f| f == min).unwrap_or(0)
    }

    pub(crate) fn values_mut(&mut self) -> &mut Vec<Fitness> {
        &mut self.values
    }

    /// True when every value matches a fresh evaluation of `population`.
    pub fn is_current_for(&self, population: &Population) -> bool {
        self.values.len() == population.len()
            && self
                .values
                .iter()
                .enumerate()
                .all(|(k, &f)| score(population.slot(k), population.order(), self.kind) == f)
    }
}

/// Writes a fresh balanced matrix into `entries`: column 0 all +1, every
/// other column starts as (m/2 × -1, m/2 × +1) and is Fisher-Yates shuffled
/// on its own stream.
pub(crate) fn fill_balanced(
    entries: &mut [i8],
    m: usize,
    seed: Seed,
    purpose: StreamPurpose,
    generation: u64,
    k: usize,
) {
    let half = m / 2;
    for (i, row) in entries.chunks_exact_mut(m).enumerate() {
        row[0] = 1;
        row[1..].fill(if i < half { -1 } else { 1 });
    }
    for j in 1..m {
        let mut stream = RngStream::derive(seed, purpose, generation, column_stream_id(k, j));
        shuffle_column_slice(entries, m, j, &mut stream);
    }
}

#[inline]
fn column_stream_id(k: usize, j: usize) -> u64 {
    ((k as u64) << 16) | j as u64
}

/// All `4N` individuals (offspring slots included) start balanced and
/// independently shuffled.
pub fn init_population(config: &GaConfig, seed: Seed, exec: Execution) -> Result<Population> {
    config.validate()?;
    let m = config.order;
    let mut pop = Population {
        order: m,
        pairs: config.pairs,
        data: vec![0; config.population_len() * m * m],
    };
    exec.for_each_chunk(pop.data_mut(), m * m, |k, q| {
        fill_balanced(q, m, seed, StreamPurpose::Init, 0, k)
    });
    Ok(pop)
}

/// Replaces every offspring slot with a fresh balanced matrix.
pub(crate) fn reinit_offspring(pop: &mut Population, seed: Seed, generation: u64, exec: Execution) {
    let m = pop.order;
    let offset = 2 * pop.pairs;
    let (_, offspring) = pop.split_parents_offspring();
    exec.for_each_chunk(offspring, m * m, |o, q| {
        fill_balanced(q, m, seed, StreamPurpose::Restart, generation, offset + o)
    });
}

pub fn evaluate(population: &Population, kind: FitnessKind, exec: Execution) -> FitnessVector {
    let m = population.order;
    let values = exec.map_indices(population.len(), |k| score(population.slot(k), m, kind));
    FitnessVector { kind, values }
}

/// Fitness of the offspring slots only, in slot order.
pub(crate) fn evaluate_offspring(population: &Population, kind: FitnessKind, exec: Execution) -> Vec<Fitness> {
    let m = population.order;
    let offset = 2 * population.pairs;
    exec.map_indices(2 * population.pairs, |o| score(population.slot(offset + o), m, kind))
}
