//! Genetic-algorithm search for Hadamard matrices of order `m = 4k`.
//!
//! A population of `4N` balanced ±1 matrices (first column all +1, every
//! other column with equally many +1 and -1 entries) evolves under elitist
//! truncation selection, column-block crossover and balance-preserving
//! pair-flip mutation until some individual has mutually orthogonal columns.
//!
//! ```
//! use hadamard_ga::{run_search, GaConfig, Seed};
//!
//! let config = GaConfig { pairs: 50, seed: Some(Seed(1)), ..GaConfig::new(8) };
//! let record = run_search(&config).unwrap();
//! assert!(record.success && record.best_matrix.is_hadamard());
//! ```

pub mod bench;
pub mod engine;
pub mod error;
pub mod exec;
pub mod fitness;
pub mod io;
pub mod matrix;
pub mod rng;

pub use engine::{run_search, run_search_with, GaConfig, MutationStrategy, RunRecord, SearchState};
pub use error::{Error, Result};
pub use exec::Execution;
pub use fitness::{fitness_f1, fitness_f2, is_hadamard, Fitness, FitnessKind};
pub use matrix::{gram, sylvester, GramMatrix, SignMatrix};
pub use rng::{shuffle_column, RngStream, Seed};
