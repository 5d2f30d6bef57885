//! Selection, crossover and mutation.

use crate::engine::config::{GaConfig, MutationStrategy};
use crate::engine::population::{FitnessVector, Population};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fitness::Fitness;
use crate::rng::RngStream;

/// Indices of the `2N` lowest-fitness individuals, ties broken by lower
/// population index.
pub fn elite_indices(fitness: &[Fitness], pairs: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..fitness.len()).collect();
    order.sort_by_key(|&k| fitness[k]);
    order.truncate(2 * pairs);
    order
}

/// Copies the `2N` fittest individuals of `src` into the parent slots of
/// `dst` in uniformly random order and returns their fitness values in
/// the new slot order. Offspring slots of `dst` are left as they were.
pub fn select_into(
    src: &Population,
    fitness: &FitnessVector,
    stream: &mut RngStream,
    dst: &mut Population,
) -> Vec<Fitness> {
    assert_eq!(fitness.len(), src.len(), "fitness vector length mismatch");
    assert!(
        dst.order() == src.order() && dst.pairs() == src.pairs(),
        "selection target has a different shape"
    );
    debug_assert!(fitness.is_current_for(src), "stale fitness vector");
    select_elite(src, fitness, stream, dst)
}

/// `select_into` without the staleness check, for callers that keep the
/// fitness vector current by construction.
pub(crate) fn select_elite(
    src: &Population,
    fitness: &FitnessVector,
    stream: &mut RngStream,
    dst: &mut Population,
) -> Vec<Fitness> {
    let mut chosen = elite_indices(fitness.values(), src.pairs());
    stream.shuffle(&mut chosen);
    for (slot, &k) in chosen.iter().enumerate() {
        dst.set_slot(slot, src.slot(k));
    }
    chosen.iter().map(|&k| fitness.values()[k]).collect()
}

pub fn select(population: &Population, fitness: &FitnessVector, stream: &mut RngStream) -> Population {
    let mut out = population.clone();
    select_into(population, fitness, stream, &mut out);
    out
}

/// One crossover point per parent pair, each in `[1, m-1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossoverPlan {
    points: Vec<usize>,
}

impl CrossoverPlan {
    pub fn new(points: Vec<usize>, order: usize) -> Result<Self> {
        if let Some(&p) = points.iter().find(|&&p| p < 1 || p >= order) {
            return Err(Error::Index {
                what: "crossover point",
                index: p,
                lo: 1,
                hi: order.saturating_sub(1),
            });
        }
        Ok(CrossoverPlan { points })
    }

    pub fn draw(order: usize, pairs: usize, stream: &mut RngStream) -> Self {
        let points = (0..pairs).map(|_| stream.index_in(1, order - 1)).collect();
        CrossoverPlan { points }
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }
}

/// Fills the offspring slots from the parents.
///
/// Pair `p` is `(P_p, P_{N+p})`. Offspring `O_p` takes columns `j < c` from
/// `P_p` and `j >= c` from `P_{N+p}`; `O_{N+p}` the reverse, where `c` is the
/// pair's crossover point.
pub fn crossover(population: &mut Population, plan: &CrossoverPlan, exec: Execution) -> Result<()> {
    let m = population.order();
    let n = population.pairs();
    if plan.points.len() != n {
        return Err(Error::Config(format!(
            "crossover plan has {} points for {n} pairs",
            plan.points.len()
        )));
    }
    CrossoverPlan::new(plan.points.clone(), m)?;
    let mm = m * m;
    let (parents, offspring) = population.split_parents_offspring();
    exec.for_each_chunk(offspring, mm, |o, child| {
        let p = o % n;
        let (aligned, crossed) = if o < n { (p, n + p) } else { (n + p, p) };
        let aligned = &parents[aligned * mm..(aligned + 1) * mm];
        let crossed = &parents[crossed * mm..(crossed + 1) * mm];
        let c = plan.points[p];
        for ((dst, a), b) in child
            .chunks_exact_mut(m)
            .zip(aligned.chunks_exact(m))
            .zip(crossed.chunks_exact(m))
        {
            dst[..c].copy_from_slice(&a[..c]);
            dst[c..].copy_from_slice(&b[c..]);
        }
    });
    Ok(())
}

/// Column and row-pair indices for every offspring.
///
/// Offspring `o` uses columns `columns[o*NC .. (o+1)*NC]` and row pairs
/// `(rows1[o*NR + r], rows2[o*NR + r])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutationPlan {
    offspring: usize,
    nc: usize,
    nr: usize,
    columns: Vec<usize>,
    rows1: Vec<usize>,
    rows2: Vec<usize>,
}

impl MutationPlan {
    /// Builds a plan from per-offspring rows of indices.
    pub fn from_rows(columns: &[Vec<usize>], rows1: &[Vec<usize>], rows2: &[Vec<usize>]) -> Result<Self> {
        let offspring = columns.len();
        if rows1.len() != offspring || rows2.len() != offspring || offspring == 0 {
            return Err(Error::Config("mutation plan arrays disagree on offspring count".into()));
        }
        let nc = columns[0].len();
        let nr = rows1[0].len();
        if columns.iter().any(|r| r.len() != nc)
            || rows1.iter().chain(rows2).any(|r| r.len() != nr)
        {
            return Err(Error::Config("ragged mutation plan".into()));
        }
        Ok(MutationPlan {
            offspring,
            nc,
            nr,
            columns: columns.concat(),
            rows1: rows1.concat(),
            rows2: rows2.concat(),
        })
    }

    pub fn offspring(&self) -> usize {
        self.offspring
    }

    /// (offspring, NC, NR).
    pub fn shape(&self) -> (usize, usize, usize) {
        (self.offspring, self.nc, self.nr)
    }

    pub fn columns(&self, o: usize) -> &[usize] {
        &self.columns[o * self.nc..(o + 1) * self.nc]
    }

    pub fn rows1(&self, o: usize) -> &[usize] {
        &self.rows1[o * self.nr..(o + 1) * self.nr]
    }

    pub fn rows2(&self, o: usize) -> &[usize] {
        &self.rows2[o * self.nr..(o + 1) * self.nr]
    }

    fn validate(&self, order: usize) -> Result<()> {
        if let Some(&c) = self.columns.iter().find(|&&c| c == 0 || c >= order) {
            return Err(Error::Index {
                what: "mutation column",
                index: c,
                lo: 1,
                hi: order - 1,
            });
        }
        if let Some(&r) = self.rows1.iter().chain(&self.rows2).find(|&&r| r >= order) {
            return Err(Error::Index {
                what: "mutation row",
                index: r,
                lo: 0,
                hi: order - 1,
            });
        }
        Ok(())
    }
}

/// Draws a mutation plan for the `2N` offspring of `config`.
///
/// Row indices are drawn before column indices, both uniform (columns in
/// `[1, m-1]`, rows in `[0, m-1]`).
pub fn make_mutation_plan(config: &GaConfig, stream: &mut RngStream) -> MutationPlan {
    let m = config.order;
    let offspring = 2 * config.pairs;
    let (nc, nr) = match config.mutation {
        MutationStrategy::Multi => (config.mutated_columns, config.row_pairs),
        MutationStrategy::PerMatrix | MutationStrategy::Shared => (1, 1),
    };
    let mut draw = |count: usize, lo: usize, hi: usize| -> Vec<usize> {
        (0..count).map(|_| stream.index_in(lo, hi)).collect()
    };
    let (rows1, rows2, columns) = match config.mutation {
        MutationStrategy::Shared => {
            let r1 = draw(1, 0, m - 1)[0];
            let r2 = draw(1, 0, m - 1)[0];
            let c = draw(1, 1, m - 1)[0];
            (vec![r1; offspring], vec![r2; offspring], vec![c; offspring])
        }
        _ => {
            let rows1 = draw(offspring * nr, 0, m - 1);
            let rows2 = draw(offspring * nr, 0, m - 1);
            let columns = draw(offspring * nc, 1, m - 1);
            (rows1, rows2, columns)
        }
    };
    MutationPlan {
        offspring,
        nc,
        nr,
        columns,
        rows1,
        rows2,
    }
}

/// Applies a plan to one offspring. For each planned column in order, and
/// each row pair in order, the two entries are negated when they differ.
pub(crate) fn mutate_one(q: &mut [i8], m: usize, columns: &[usize], rows1: &[usize], rows2: &[usize]) {
    for &c in columns {
        for (&r1, &r2) in rows1.iter().zip(rows2) {
            let (a, b) = (m * r1 + c, m * r2 + c);
            if q[a] != q[b] {
                q[a] = -q[a];
                q[b] = -q[b];
            }
        }
    }
}

/// Mutates the offspring slots; parents are untouched.
pub fn mutate(population: &mut Population, plan: &MutationPlan, exec: Execution) -> Result<()> {
    let m = population.order();
    if plan.offspring != 2 * population.pairs() {
        return Err(Error::Config(format!(
            "mutation plan covers {} offspring, population has {}",
            plan.offspring,
            2 * population.pairs()
        )));
    }
    plan.validate(m)?;
    let (_, offspring) = population.split_parents_offspring();
    exec.for_each_chunk(offspring, m * m, |o, q| {
        mutate_one(q, m, plan.columns(o), plan.rows1(o), plan.rows2(o))
    });
    Ok(())
}
