//! The genetic algorithm: population layout, operators and the search loop.

mod config;
mod operators;
mod population;
mod search;

pub use config::{GaConfig, MutationStrategy, MAX_ORDER};
pub use operators::{
    crossover, elite_indices, make_mutation_plan, mutate, select, select_into, CrossoverPlan,
    MutationPlan,
};
pub use population::{evaluate, init_population, FitnessVector, Population};
pub use search::{detect_stall, run_search, run_search_with, RunRecord, SearchState};
