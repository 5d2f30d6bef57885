//! Experiment harness: NC × NR iteration grids and the F1/F2 throughput
//! comparison.

use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::engine::{run_search_with, GaConfig, MutationStrategy};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fitness::FitnessKind;
use crate::rng::Seed;

/// A sweep over mutation parameters with `runs` seeded searches per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub order: usize,
    pub pairs: usize,
    pub max_iterations: u64,
    pub nc_values: Vec<usize>,
    pub nr_values: Vec<usize>,
    pub runs: usize,
    pub fitness: FitnessKind,
    pub mutation: MutationStrategy,
    pub seed_base: Seed,
}

impl GridSpec {
    /// N = 1000, T = 10^4, NC and NR in 1..=4, 10 runs per cell.
    pub fn new(order: usize) -> Self {
        GridSpec {
            order,
            pairs: 1000,
            max_iterations: 10_000,
            nc_values: vec![1, 2, 3, 4],
            nr_values: vec![1, 2, 3, 4],
            runs: 10,
            fitness: FitnessKind::F2,
            mutation: MutationStrategy::Multi,
            seed_base: Seed(0),
        }
    }

    fn cell_config(&self, nc: usize, nr: usize, seed: Seed) -> GaConfig {
        GaConfig {
            pairs: self.pairs,
            max_iterations: self.max_iterations,
            mutated_columns: nc,
            row_pairs: nr,
            fitness: self.fitness,
            mutation: self.mutation,
            seed: Some(seed),
            ..GaConfig::new(self.order)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::Config("runs per cell must be at least 1".into()));
        }
        if self.nc_values.is_empty() || self.nr_values.is_empty() {
            return Err(Error::Config("NC and NR value lists must be non-empty".into()));
        }
        for &nc in &self.nc_values {
            for &nr in &self.nr_values {
                self.cell_config(nc, nr, self.seed_base).validate()?;
            }
        }
        Ok(())
    }

    /// Seed of run `run` in cell `cell` (cells numbered NC-major).
    pub fn run_seed(&self, cell: usize, run: usize) -> Seed {
        self.seed_base.offset((cell * self.runs + run) as u64)
    }
}

/// One search in a grid; serialized as a CSV row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "T")]
    pub t: u64,
    #[serde(rename = "NC")]
    pub nc: usize,
    #[serde(rename = "NR")]
    pub nr: usize,
    #[serde(rename = "run-index")]
    pub run: usize,
    pub seed: u64,
    pub success: bool,
    pub iterations: u64,
    #[serde(rename = "wall-seconds")]
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub nc: usize,
    pub nr: usize,
    pub runs: usize,
    pub successes: usize,
    /// Mean over successful runs; `None` when nothing succeeded.
    pub mean_iterations: Option<f64>,
    pub min_iterations: Option<u64>,
    pub max_iterations: Option<u64>,
    pub mean_wall_seconds: f64,
}

impl CellSummary {
    fn from_rows(nc: usize, nr: usize, rows: &[&RunRow]) -> Self {
        let ok: Vec<u64> = rows.iter().filter(|r| r.success).map(|r| r.iterations).collect();
        let mean_iterations =
            (!ok.is_empty()).then(|| ok.iter().map(|&i| i as f64).sum::<f64>() / ok.len() as f64);
        CellSummary {
            nc,
            nr,
            runs: rows.len(),
            successes: ok.len(),
            mean_iterations,
            min_iterations: ok.iter().copied().min(),
            max_iterations: ok.iter().copied().max(),
            mean_wall_seconds: rows.iter().map(|r| r.wall_seconds).sum::<f64>() / rows.len().max(1) as f64,
        }
    }

    /// Majority of runs failed.
    pub fn mostly_failed(&self) -> bool {
        2 * self.successes < self.runs
    }
}

#[derive(Debug, Clone)]
pub struct GridReport {
    pub spec: GridSpec,
    pub rows: Vec<RunRow>,
    pub cells: Vec<CellSummary>,
}

impl GridReport {
    pub fn cell(&self, nc: usize, nr: usize) -> Option<&CellSummary> {
        self.cells.iter().find(|c| c.nc == nc && c.nr == nr)
    }

    /// Average of the per-cell means over all NR values for one NC, or
    /// `None` if any of those cells had no success.
    pub fn nc_mean(&self, nc: usize) -> Option<f64> {
        let means: Option<Vec<f64>> = self
            .cells
            .iter()
            .filter(|c| c.nc == nc)
            .map(|c| c.mean_iterations)
            .collect();
        let means = means?;
        (!means.is_empty()).then(|| means.iter().sum::<f64>() / means.len() as f64)
    }

    pub fn write_csv(&self, writer: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// NR rows by NC columns of mean iterations over successful runs. A `*`
    /// marks cells where most runs failed; `-` marks cells with no success.
    pub fn text_table(&self) -> String {
        let s = &self.spec;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "Average iterations, m={}, N={}, T={}, runs/cell={}, fitness={}",
            s.order, s.pairs, s.max_iterations, s.runs, s.fitness
        );
        let _ = write!(out, "{:>6} ||", "NR\\NC");
        for nc in &s.nc_values {
            let _ = write!(out, " {nc:>10}");
        }
        out.push('\n');
        for &nr in &s.nr_values {
            let _ = write!(out, "{nr:>6} ||");
            for &nc in &s.nc_values {
                let cell = self.cell(nc, nr).expect("cell present");
                let text = match cell.mean_iterations {
                    None => "-".to_string(),
                    Some(m) if cell.mostly_failed() => format!("{m:.1}*"),
                    Some(m) => format!("{m:.1}"),
                };
                let _ = write!(out, " {text:>10}");
            }
            out.push('\n');
        }
        out.push_str("Successes\n");
        for &nr in &s.nr_values {
            let _ = write!(out, "{nr:>6} ||");
            for &nc in &s.nc_values {
                let cell = self.cell(nc, nr).expect("cell present");
                let _ = write!(out, " {:>10}", format!("{}/{}", cell.successes, cell.runs));
            }
            out.push('\n');
        }
        out
    }
}

/// Runs every (NC, NR) cell `runs` times. Runs execute in parallel under
/// `exec`; each individual search is sequential, so a report never depends
/// on the schedule.
pub fn run_grid(spec: &GridSpec, exec: Execution) -> Result<GridReport> {
    spec.validate()?;
    let cells: Vec<(usize, usize)> = spec
        .nc_values
        .iter()
        .flat_map(|&nc| spec.nr_values.iter().map(move |&nr| (nc, nr)))
        .collect();
    let jobs = cells.len() * spec.runs;
    let rows = exec.map_indices(jobs, |job| {
        let (cell, run) = (job / spec.runs, job % spec.runs);
        let (nc, nr) = cells[cell];
        let seed = spec.run_seed(cell, run);
        let outcome = run_search_with(&spec.cell_config(nc, nr, seed), Execution::Sequential);
        let (success, iterations, wall_seconds) = match outcome {
            Ok(r) => (r.success, r.iterations, r.wall_seconds),
            Err(_) => (false, 0, 0.0),
        };
        RunRow {
            m: spec.order,
            n: spec.pairs,
            t: spec.max_iterations,
            nc,
            nr,
            run,
            seed: seed.0,
            success,
            iterations,
            wall_seconds,
        }
    });
    let summaries = cells
        .iter()
        .map(|&(nc, nr)| {
            let cell_rows: Vec<&RunRow> = rows.iter().filter(|r| r.nc == nc && r.nr == nr).collect();
            CellSummary::from_rows(nc, nr, &cell_rows)
        })
        .collect();
    Ok(GridReport {
        spec: spec.clone(),
        rows,
        cells: summaries,
    })
}

/// Wall-time comparison of the two fitness functions on identical searches.
#[derive(Debug, Clone, PartialEq)]
pub struct FitnessBenchSpec {
    pub orders: Vec<usize>,
    pub pairs: usize,
    pub iterations: u64,
    pub mutated_columns: usize,
    pub row_pairs: usize,
    pub seed: Seed,
    /// Each leg is timed this many times; the fastest run counts.
    pub repeats: usize,
}

impl FitnessBenchSpec {
    /// 4000 matrices, 10^3 iterations, NC = 4, NR = 2.
    pub fn desk(orders: Vec<usize>) -> Self {
        FitnessBenchSpec {
            orders,
            pairs: 1000,
            iterations: 1000,
            mutated_columns: 4,
            row_pairs: 2,
            seed: Seed(2024),
            repeats: 3,
        }
    }

    /// 40 000 matrices, 10^4 iterations.
    pub fn long(orders: Vec<usize>) -> Self {
        FitnessBenchSpec {
            pairs: 10_000,
            iterations: 10_000,
            repeats: 1,
            ..Self::desk(orders)
        }
    }

    fn config(&self, order: usize, fitness: FitnessKind) -> GaConfig {
        GaConfig {
            pairs: self.pairs,
            max_iterations: self.iterations,
            mutated_columns: self.mutated_columns.min(order - 1),
            row_pairs: self.row_pairs.min(order / 2),
            fitness,
            mutation: MutationStrategy::Multi,
            seed: Some(self.seed),
            ..GaConfig::new(order)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitnessBenchRow {
    pub order: usize,
    pub f1_seconds: f64,
    pub f2_seconds: f64,
    pub f1_iterations: u64,
    pub f2_iterations: u64,
}

impl FitnessBenchRow {
    /// F2 time over F1 time.
    pub fn ratio(&self) -> f64 {
        if self.f1_seconds > 0.0 {
            self.f2_seconds / self.f1_seconds
        } else {
            1.0
        }
    }
}

#[derive(Debug, Clone)]
pub struct FitnessBenchReport {
    pub spec: FitnessBenchSpec,
    pub rows: Vec<FitnessBenchRow>,
}

impl FitnessBenchReport {
    pub fn text_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "Loop wall time (s), {} matrices, {} iterations, best of {}",
            4 * self.spec.pairs,
            self.spec.iterations,
            self.spec.repeats
        );
        let _ = writeln!(out, "{:>8} {:>12} {:>12} {:>8}", "order", "F1", "F2", "F2/F1");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:>8} {:>12.3} {:>12.3} {:>8.3}",
                format!("{0}x{0}", r.order),
                r.f1_seconds,
                r.f2_seconds,
                r.ratio()
            );
        }
        out
    }
}

pub fn bench_fitness(spec: &FitnessBenchSpec, exec: Execution) -> Result<FitnessBenchReport> {
    if spec.repeats == 0 {
        return Err(Error::Config("repeats must be at least 1".into()));
    }
    let mut rows = Vec::with_capacity(spec.orders.len());
    for &order in &spec.orders {
        let f1 = spec.config(order, FitnessKind::F1);
        let f2 = spec.config(order, FitnessKind::F2);
        f1.validate()?;
        let mut row = FitnessBenchRow {
            order,
            f1_seconds: f64::INFINITY,
            f2_seconds: f64::INFINITY,
            f1_iterations: 0,
            f2_iterations: 0,
        };
        for rep in 0..spec.repeats {
            // Alternate leg order so drift hits both sides equally.
            let legs = if rep % 2 == 0 { [&f1, &f2] } else { [&f2, &f1] };
            for cfg in legs {
                let r = run_search_with(cfg, exec)?;
                match cfg.fitness {
                    FitnessKind::F1 => {
                        row.f1_seconds = row.f1_seconds.min(r.wall_seconds);
                        row.f1_iterations = r.iterations;
                    }
                    FitnessKind::F2 => {
                        row.f2_seconds = row.f2_seconds.min(r.wall_seconds);
                        row.f2_iterations = r.iterations;
                    }
                }
            }
        }
        rows.push(row);
    }
    Ok(FitnessBenchReport {
        spec: spec.clone(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_grid() -> GridSpec {
        GridSpec {
            pairs: 20,
            max_iterations: 200,
            nc_values: vec![1, 2],
            nr_values: vec![1, 2],
            runs: 3,
            seed_base: Seed(100),
            ..GridSpec::new(8)
        }
    }

    #[test]
    fn grid_shape_and_seeds() {
        let spec = small_grid();
        let report = run_grid(&spec, Execution::Sequential).unwrap();
        assert_eq!(report.rows.len(), 12);
        assert_eq!(report.cells.len(), 4);
        let seeds: std::collections::HashSet<_> = report.rows.iter().map(|r| r.seed).collect();
        assert_eq!(seeds.len(), 12);
        for c in &report.cells {
            assert!(c.successes <= c.runs);
        }
    }

    #[test]
    fn grid_is_reproducible() {
        let spec = small_grid();
        let a = run_grid(&spec, Execution::Parallel).unwrap();
        let b = run_grid(&spec, Execution::Sequential).unwrap();
        let its = |r: &GridReport| r.rows.iter().map(|x| (x.seed, x.success, x.iterations)).collect::<Vec<_>>();
        assert_eq!(its(&a), its(&b));
    }

    #[test]
    fn zero_budget_grid_has_no_means() {
        let spec = GridSpec {
            max_iterations: 0,
            runs: 1,
            ..small_grid()
        };
        let report = run_grid(&spec, Execution::Sequential).unwrap();
        for c in &report.cells {
            assert_eq!(c.successes, 0);
            assert_eq!(c.mean_iterations, None);
            assert_eq!(c.min_iterations, None);
        }
        assert_eq!(report.nc_mean(1), None);
        assert!(report.text_table().contains(" -"));
    }

    #[test]
    fn invalid_grid_rejected() {
        let mut spec = small_grid();
        spec.nr_values = vec![5];
        assert!(run_grid(&spec, Execution::Sequential).is_err());
        let mut spec = small_grid();
        spec.runs = 0;
        assert!(run_grid(&spec, Execution::Sequential).is_err());
    }

    #[test]
    fn csv_schema() {
        let report = run_grid(&small_grid(), Execution::Sequential).unwrap();
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "m,N,T,NC,NR,run-index,seed,success,iterations,wall-seconds"
        );
        assert_eq!(text.lines().count(), 13);
    }

    #[test]
    fn fitness_bench_zero_iterations() {
        let spec = FitnessBenchSpec {
            pairs: 10,
            iterations: 0,
            repeats: 1,
            ..FitnessBenchSpec::desk(vec![8])
        };
        let r = bench_fitness(&spec, Execution::Sequential).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert_eq!(r.rows[0].f1_iterations, 0);
        assert_eq!(r.rows[0].f2_iterations, 0);
        assert!(r.text_table().contains("8x8"));
    }
}
