//! `hadamard-ga` command-line front end.
//!
//! Exit codes:
//! - 0: success (Hadamard matrix found / verified, file written)
//! - 1: invalid flags or malformed input
//! - 2: search finished its budget without finding a Hadamard matrix
//! - 3: `verify`: the matrix is not Hadamard
//! - 4: I/O failure

mod args;

use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use hadamard_ga::bench::{bench_fitness, run_grid, FitnessBenchSpec, GridSpec};
use hadamard_ga::io::{
    read_matrix_file, read_matrix_from, write_matrix, write_run_record, write_trace_file,
    RunRecordDoc,
};
use hadamard_ga::{
    fitness_f1, fitness_f2, run_search_with, sylvester, Error, Execution, GaConfig, Seed,
};

use crate::args::{BenchCommand, Cli, Command, FitnessBenchArgs, GridArgs, SearchArgs};

/// Seed used by unseeded searches, in place of OS entropy.
const SEED_ENV: &str = "HADAMARD_GA_SEED";

const EXIT_USAGE: u8 = 1;
const EXIT_EXHAUSTED: u8 = 2;
const EXIT_NOT_HADAMARD: u8 = 3;
const EXIT_IO: u8 = 4;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let result = match cli.command {
        Command::Search(a) => cmd_search(a),
        Command::Verify { path } => cmd_verify(&path),
        Command::Sylvester { power, out } => cmd_sylvester(power, out.as_deref()),
        Command::Bench(BenchCommand::Grid(a)) => cmd_grid(a),
        Command::Bench(BenchCommand::Fitness(a)) => cmd_bench_fitness(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Io(_) => EXIT_IO,
        Error::Csv(c) if matches!(c.kind(), csv::ErrorKind::Io(_)) => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

/// Runs `f` on a pool of `workers` threads (when the parallel backend is
/// built in), otherwise on the global pool.
fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce(Execution) -> T + Send) -> Result<T, Error> {
    match workers {
        Some(0) => Err(Error::Config("--workers must be at least 1".into())),
        #[cfg(feature = "parallel")]
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))?;
            Ok(pool.install(|| f(Execution::Parallel)))
        }
        #[cfg(not(feature = "parallel"))]
        Some(_) => Ok(f(Execution::Sequential)),
        None => Ok(f(Execution::default())),
    }
}

fn resolve_seed(seed: Option<Seed>) -> Result<Seed, Error> {
    if let Some(s) = seed {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v.parse(),
        Err(_) => Ok(Seed::from_entropy()),
    }
}

fn cmd_search(a: SearchArgs) -> Result<u8, Error> {
    let order = match (a.order, a.k) {
        (Some(m), _) => m,
        (None, Some(k)) => k.checked_mul(4).ok_or_else(|| Error::Config("k too large".into()))?,
        (None, None) => unreachable!("clap enforces --order or --k"),
    };
    let mut config = GaConfig {
        pairs: a.population,
        max_iterations: a.max_iter,
        mutated_columns: a.nc,
        row_pairs: a.nr,
        fitness: a.fitness.into(),
        mutation: a.mutation.into(),
        seed: None,
        stall_window: a.stall_window,
        time_budget_secs: a.time_budget_secs,
        ..GaConfig::new(order)
    };
    config.validate()?;
    config.seed = Some(resolve_seed(a.seed)?);

    let record = with_workers(a.workers, |exec| run_search_with(&config, exec))??;

    if let Some(path) = &a.trace {
        write_trace_file(path, &record.trace)?;
    }
    let trace_ref = a.trace.as_ref().map(|p| p.display().to_string());
    let doc = RunRecordDoc::from_record(&record, trace_ref);
    if let Some(path) = &a.out {
        write_run_record(path, &doc)?;
    }

    let mut out = io::stdout().lock();
    writeln!(out, "seed: {}", record.seed)?;
    writeln!(out, "order: {}", config.order)?;
    writeln!(out, "iterations: {}", record.iterations)?;
    writeln!(out, "min fitness: {}", record.best_fitness)?;
    writeln!(out, "success: {}", record.success)?;
    if record.incomplete {
        writeln!(out, "incomplete: time budget exhausted")?;
    }
    if record.restarts > 0 {
        writeln!(out, "restarts: {}", record.restarts)?;
    }
    writeln!(out, "wall seconds: {:.3}", record.wall_seconds)?;
    if record.success {
        write!(out, "{}", write_matrix(&record.best_matrix))?;
    }
    Ok(if record.success { 0 } else { EXIT_EXHAUSTED })
}

fn cmd_verify(path: &Path) -> Result<u8, Error> {
    let q = if path.as_os_str() == "-" {
        read_matrix_from(io::stdin().lock())?
    } else {
        read_matrix_file(path)?
    };
    let hadamard = q.is_hadamard();
    let mut out = io::stdout().lock();
    writeln!(out, "order: {}", q.order())?;
    writeln!(out, "F1: {}", fitness_f1(&q))?;
    writeln!(out, "F2: {}", fitness_f2(&q))?;
    writeln!(out, "max |off-diagonal gram|: {}", q.gram().max_abs_off_diagonal())?;
    writeln!(out, "hadamard: {}", if hadamard { "yes" } else { "no" })?;
    Ok(if hadamard { 0 } else { EXIT_NOT_HADAMARD })
}

fn cmd_sylvester(power: u32, out: Option<&Path>) -> Result<u8, Error> {
    let text = write_matrix(&sylvester(power)?);
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(0)
}

fn cmd_grid(a: GridArgs) -> Result<u8, Error> {
    let spec = GridSpec {
        order: a.order,
        pairs: a.population,
        max_iterations: a.max_iter,
        nc_values: a.nc,
        nr_values: a.nr,
        runs: a.runs,
        fitness: a.fitness.into(),
        mutation: a.mutation.into(),
        seed_base: a.seed,
    };
    spec.validate()?;
    let report = with_workers(a.workers, |exec| run_grid(&spec, exec))??;
    if let Some(path) = &a.csv {
        report.write_csv(fs::File::create(path)?)?;
    }
    let table = report.text_table();
    if let Some(path) = &a.table {
        fs::write(path, &table)?;
    }
    print!("{table}");
    Ok(0)
}

fn cmd_bench_fitness(a: FitnessBenchArgs) -> Result<u8, Error> {
    let base = if a.long {
        FitnessBenchSpec::long(a.orders)
    } else {
        FitnessBenchSpec::desk(a.orders)
    };
    let spec = FitnessBenchSpec {
        pairs: a.population.unwrap_or(base.pairs),
        iterations: a.iterations.unwrap_or(base.iterations),
        repeats: a.repeats.unwrap_or(base.repeats),
        seed: a.seed.unwrap_or(base.seed),
        ..base
    };
    let report = with_workers(a.workers, |exec| bench_fitness(&spec, exec))??;
    print!("{}", report.text_table());
    Ok(0)
}
