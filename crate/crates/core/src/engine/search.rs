//! The generation loop.

use std::time::{Duration, Instant};

use crate::engine::config::GaConfig;
use crate::engine::operators::{crossover, make_mutation_plan, mutate, select_elite, CrossoverPlan};
use crate::engine::population::{
    evaluate, evaluate_offspring, init_population, reinit_offspring, FitnessVector, Population,
};
use crate::error::Result;
use crate::exec::Execution;
use crate::fitness::Fitness;
use crate::matrix::SignMatrix;
use crate::rng::{RngStream, Seed, StreamPurpose};

/// True when the last `window` trace entries are equal and positive.
pub fn detect_stall(trace: &[Fitness], window: usize) -> bool {
    if window == 0 || trace.len() < window {
        return false;
    }
    let tail = &trace[trace.len() - window..];
    let last = tail[window - 1];
    !last.is_zero() && tail.iter().all(|&f| f == last)
}

#[derive(Debug, Clone)]
pub struct SearchState {
    config: GaConfig,
    seed: Seed,
    population: Population,
    spare: Population,
    fitness: FitnessVector,
    iteration: u64,
    best: SignMatrix,
    best_fitness: Fitness,
    trace: Vec<Fitness>,
    restarts: u64,
    last_restart: u64,
}

impl SearchState {
    /// Initializes and evaluates all `4N` individuals.
    pub fn new(config: &GaConfig, seed: Seed, exec: Execution) -> Result<Self> {
        let population = init_population(config, seed, exec)?;
        Self::from_population(config, seed, population, exec)
    }

    /// Starts from an explicit population, e.g. a hand-built test fixture.
    pub fn from_population(config: &GaConfig, seed: Seed, population: Population, exec: Execution) -> Result<Self> {
        config.validate()?;
        if population.order() != config.order || population.pairs() != config.pairs {
            return Err(crate::error::Error::Config(format!(
                "population shape (m={}, N={}) does not match config (m={}, N={})",
                population.order(),
                population.pairs(),
                config.order,
                config.pairs
            )));
        }
        let fitness = evaluate(&population, config.fitness, exec);
        let best_idx = fitness.argmin();
        let best_fitness = fitness.min();
        Ok(SearchState {
            config: config.clone(),
            seed,
            best: population.matrix(best_idx),
            spare: population.clone(),
            population,
            fitness,
            iteration: 0,
            best_fitness,
            trace: vec![best_fitness],
            restarts: 0,
            last_restart: 0,
        })
    }

    pub fn config(&self) -> &GaConfig {
        &self.config
    }

    pub fn seed(&self) -> Seed {
        self.seed
    }

    pub fn population(&self) -> &Population {
        &self.population
    }

    pub fn fitness(&self) -> &FitnessVector {
        &self.fitness
    }

    /// Generations applied so far.
    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub fn min_fitness(&self) -> Fitness {
        self.fitness.min()
    }

    pub fn best(&self) -> (&SignMatrix, Fitness) {
        (&self.best, self.best_fitness)
    }

    /// Minimum fitness after each generation; entry 0 is the initial
    /// population.
    pub fn trace(&self) -> &[Fitness] {
        &self.trace
    }

    pub fn restarts(&self) -> u64 {
        self.restarts
    }

    /// One generation: select, crossover, mutate, evaluate.
    pub fn step(&mut self, exec: Execution) -> Result<()> {
        let t = self.iteration;
        let seed = self.seed;
        let cfg = &self.config;

        let mut stream = RngStream::derive(seed, StreamPurpose::Select, t, 0);
        let parent_fitness = select_elite(&self.population, &self.fitness, &mut stream, &mut self.spare);
        std::mem::swap(&mut self.population, &mut self.spare);

        let mut stream = RngStream::derive(seed, StreamPurpose::Crossover, t, 0);
        let plan = CrossoverPlan::draw(cfg.order, cfg.pairs, &mut stream);
        crossover(&mut self.population, &plan, exec)?;

        let mut stream = RngStream::derive(seed, StreamPurpose::Mutate, t, 0);
        let plan = make_mutation_plan(cfg, &mut stream);
        mutate(&mut self.population, &plan, exec)?;

        let offspring_fitness = evaluate_offspring(&self.population, cfg.fitness, exec);
        let values = self.fitness.values_mut();
        values.clear();
        values.extend(parent_fitness);
        values.extend(offspring_fitness);

        self.iteration += 1;
        self.record_generation();
        Ok(())
    }

    fn record_generation(&mut self) {
        let min = self.fitness.min();
        if min < self.best_fitness {
            self.best_fitness = min;
            self.best = self.population.matrix(self.fitness.argmin());
        }
        self.trace.push(min);
    }

    /// Replaces all offspring with fresh random balanced matrices; parents
    /// are kept.
    pub fn restart_offspring(&mut self, exec: Execution) {
        reinit_offspring(&mut self.population, self.seed, self.iteration, exec);
        let fresh = evaluate_offspring(&self.population, self.config.fitness, exec);
        let half = 2 * self.config.pairs;
        self.fitness.values_mut()[half..].copy_from_slice(&fresh);
        self.restarts += 1;
        self.last_restart = self.iteration;
    }

    /// Stall check honouring the configured window; a restart needs a full
    /// new window before the detector can fire again.
    fn should_restart(&self) -> bool {
        match self.config.stall_window {
            Some(w) => {
                self.iteration - self.last_restart >= w as u64 && detect_stall(&self.trace, w)
            }
            None => false,
        }
    }

    pub fn into_record(self, wall_seconds: f64, incomplete: bool) -> RunRecord {
        let mut config = self.config;
        config.seed = Some(self.seed);
        RunRecord {
            success: self.best_fitness.is_zero(),
            config,
            seed: self.seed,
            iterations: self.iteration,
            best_matrix: self.best,
            best_fitness: self.best_fitness,
            trace: self.trace,
            wall_seconds,
            incomplete,
            restarts: self.restarts,
        }
    }
}

/// Outcome of one search.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    /// The configuration with its seed resolved.
    pub config: GaConfig,
    pub seed: Seed,
    pub iterations: u64,
    pub best_matrix: SignMatrix,
    pub best_fitness: Fitness,
    pub trace: Vec<Fitness>,
    /// Wall time of the generation loop.
    pub wall_seconds: f64,
    pub success: bool,
    /// The time budget ran out before success or `T` generations.
    pub incomplete: bool,
    pub restarts: u64,
}

pub fn run_search(config: &GaConfig) -> Result<RunRecord> {
    run_search_with(config, Execution::default())
}

/// Runs generations until the minimum fitness hits zero, `T` generations
/// have run, or the time budget is spent.
pub fn run_search_with(config: &GaConfig, exec: Execution) -> Result<RunRecord> {
    config.validate()?;
    let seed = config.seed.unwrap_or_else(Seed::from_entropy);
    let mut state = SearchState::new(config, seed, exec)?;
    let budget = config.time_budget_secs.map(Duration::from_secs_f64);

    let start = Instant::now();
    let mut incomplete = false;
    while state.iteration < config.max_iterations && !state.min_fitness().is_zero() {
        if budget.is_some_and(|b| start.elapsed() >= b) {
            incomplete = true;
            break;
        }
        state.step(exec)?;
        if state.should_restart() {
            state.restart_offspring(exec);
        }
    }
    let wall = start.elapsed().as_secs_f64();
    Ok(state.into_record(wall, incomplete))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::config::MutationStrategy;
    use crate::matrix::sylvester;

    fn f(v: &[u64]) -> Vec<Fitness> {
        v.iter().map(|&x| Fitness(x)).collect()
    }

    #[test]
    fn stall_detection() {
        assert!(detect_stall(&f(&[9, 5, 5, 5, 5]), 4));
        assert!(!detect_stall(&f(&[5, 5, 5, 0]), 4));
        assert!(!detect_stall(&f(&[0, 0, 0, 0]), 2));
        assert!(!detect_stall(&f(&[8, 7, 6, 5]), 4));
        assert!(!detect_stall(&f(&[5, 5]), 3));
        assert!(detect_stall(&f(&[4]), 1));
    }

    #[test]
    fn zero_iterations_returns_initial_best() {
        let c = GaConfig {
            pairs: 10,
            max_iterations: 0,
            seed: Some(Seed(1)),
            ..GaConfig::new(8)
        };
        let r = run_search_with(&c, Execution::Sequential).unwrap();
        assert_eq!(r.iterations, 0);
        assert_eq!(r.trace.len(), 1);
        let init = init_population(&c, Seed(1), Execution::Sequential).unwrap();
        let fit = evaluate(&init, c.fitness, Execution::Sequential);
        assert_eq!(r.best_fitness, fit.min());
        assert_eq!(r.best_matrix, init.matrix(fit.argmin()));
    }

    #[test]
    fn order_four_is_found_quickly() {
        for seed in 0..20 {
            let c = GaConfig {
                pairs: 100,
                max_iterations: 1000,
                mutation: MutationStrategy::PerMatrix,
                seed: Some(Seed(seed)),
                ..GaConfig::new(4)
            };
            let r = run_search_with(&c, Execution::Sequential).unwrap();
            assert!(r.success, "seed {seed}");
            assert!(r.best_matrix.is_hadamard());
            assert!(r.iterations <= 20, "seed {seed}: {} iterations", r.iterations);
        }
    }

    #[test]
    fn hadamard_survives_a_step() {
        let c = GaConfig {
            pairs: 2,
            seed: Some(Seed(3)),
            ..GaConfig::new(8)
        };
        let mut pop_ms: Vec<_> = init_population(&c, Seed(3), Execution::Sequential)
            .unwrap()
            .matrices()
            .collect();
        pop_ms[5] = sylvester(3).unwrap();
        let pop = Population::from_matrices(&pop_ms).unwrap();
        let mut state = SearchState::from_population(&c, Seed(3), pop, Execution::Sequential).unwrap();
        assert_eq!(state.min_fitness(), Fitness::ZERO);
        for _ in 0..5 {
            state.step(Execution::Sequential).unwrap();
            assert_eq!(state.min_fitness(), Fitness::ZERO);
        }
    }

    #[test]
    fn step_is_deterministic() {
        let c = GaConfig {
            pairs: 20,
            mutated_columns: 3,
            row_pairs: 3,
            ..GaConfig::new(12)
        };
        let mut a = SearchState::new(&c, Seed(77), Execution::Sequential).unwrap();
        let mut b = SearchState::new(&c, Seed(77), Execution::Parallel).unwrap();
        for _ in 0..10 {
            a.step(Execution::Sequential).unwrap();
            b.step(Execution::Parallel).unwrap();
            assert_eq!(a.population(), b.population());
            assert_eq!(a.fitness(), b.fitness());
        }
        assert_eq!(a.trace(), b.trace());
    }

    #[test]
    fn fitness_stays_current_after_steps() {
        let c = GaConfig {
            pairs: 8,
            ..GaConfig::new(8)
        };
        let mut s = SearchState::new(&c, Seed(4), Execution::Sequential).unwrap();
        for _ in 0..5 {
            s.step(Execution::Sequential).unwrap();
            assert!(s.fitness().is_current_for(s.population()));
        }
    }

    #[test]
    fn restart_keeps_parents_and_balance() {
        let c = GaConfig {
            pairs: 4,
            stall_window: Some(2),
            ..GaConfig::new(8)
        };
        let mut s = SearchState::new(&c, Seed(8), Execution::Sequential).unwrap();
        s.step(Execution::Sequential).unwrap();
        let parents: Vec<_> = (0..8).map(|k| s.population().matrix(k)).collect();
        s.restart_offspring(Execution::Sequential);
        for (k, p) in parents.iter().enumerate() {
            assert_eq!(&s.population().matrix(k), p);
        }
        assert!(s.population().is_balanced());
        assert!(s.fitness().is_current_for(s.population()));
        assert_eq!(s.restarts(), 1);
    }

    #[test]
    fn time_budget_marks_incomplete() {
        let c = GaConfig {
            pairs: 50,
            max_iterations: u64::MAX,
            time_budget_secs: Some(0.0),
            seed: Some(Seed(1)),
            ..GaConfig::new(28)
        };
        let r = run_search_with(&c, Execution::Sequential).unwrap();
        assert!(r.incomplete);
        assert!(!r.success);
        assert_eq!(r.iterations, 0);
    }
}
