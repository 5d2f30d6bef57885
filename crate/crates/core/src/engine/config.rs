use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitness::FitnessKind;
use crate::rng::Seed;

/// Largest order the engine accepts; Gram entries stay well inside `i32`.
pub const MAX_ORDER: usize = 1 << 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MutationStrategy {
    /// One (column, row, row) triple shared by every offspring.
    Shared,
    /// One independent (column, row, row) triple per offspring.
    PerMatrix,
    /// `NC` columns and `NR` row pairs per offspring.
    #[default]
    Multi,
}

impl MutationStrategy {
    pub fn name(self) -> &'static str {
        match self {
            MutationStrategy::Shared => "shared",
            MutationStrategy::PerMatrix => "per-matrix",
            MutationStrategy::Multi => "multi",
        }
    }
}

impl fmt::Display for MutationStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MutationStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shared" => Ok(MutationStrategy::Shared),
            "per-matrix" => Ok(MutationStrategy::PerMatrix),
            "multi" => Ok(MutationStrategy::Multi),
            other => Err(Error::Config(format!("unknown mutation strategy {other:?}"))),
        }
    }
}

/// Search parameters.
///
/// The population holds `4 * pairs` matrices: `2 * pairs` parents followed
/// by `2 * pairs` offspring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    /// Matrix order m; must be 4k.
    pub order: usize,
    /// N: number of crossover pairs.
    pub pairs: usize,
    /// T: generation cap.
    pub max_iterations: u64,
    /// NC: columns mutated per offspring.
    pub mutated_columns: usize,
    /// NR: row pairs tried per mutated column.
    pub row_pairs: usize,
    pub fitness: FitnessKind,
    pub mutation: MutationStrategy,
    /// `None` draws a seed from the OS at search start.
    pub seed: Option<Seed>,
    /// Reinitialize offspring after this many generations without progress.
    pub stall_window: Option<usize>,
    /// Optional wall-clock cap on the generation loop.
    pub time_budget_secs: Option<f64>,
}

impl GaConfig {
    /// Defaults: N = 1000, T = 10^5, NC = 1, NR = 2, F2, multi mutation.
    pub fn new(order: usize) -> Self {
        GaConfig {
            order,
            pairs: 1000,
            max_iterations: 100_000,
            mutated_columns: 1,
            row_pairs: 2,
            fitness: FitnessKind::F2,
            mutation: MutationStrategy::Multi,
            seed: None,
            stall_window: None,
            time_budget_secs: None,
        }
    }

    pub fn k(&self) -> usize {
        self.order / 4
    }

    pub fn population_len(&self) -> usize {
        4 * self.pairs
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.order;
        if m < 4 || !m.is_multiple_of(4) {
            return Err(Error::OrderNotMultipleOfFour(m));
        }
        if m > MAX_ORDER {
            return Err(Error::SizeLimit(format!("order {m} exceeds {MAX_ORDER}")));
        }
        if self.pairs == 0 {
            return Err(Error::Config("population quarter N must be at least 1".into()));
        }
        if !(1..m).contains(&self.mutated_columns) {
            return Err(Error::Config(format!(
                "NC must lie in [1, {}], got {}",
                m - 1,
                self.mutated_columns
            )));
        }
        if !(1..=m / 2).contains(&self.row_pairs) {
            return Err(Error::Config(format!(
                "NR must lie in [1, {}], got {}",
                m / 2,
                self.row_pairs
            )));
        }
        if self.stall_window == Some(0) {
            return Err(Error::Config("stall window must be at least 1".into()));
        }
        if let Some(b) = self.time_budget_secs {
            if !(b.is_finite() && b >= 0.0) {
                return Err(Error::Config(format!("invalid time budget {b}")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_must_be_multiple_of_four() {
        for m in [0, 1, 2, 3, 6, 10, 22] {
            assert!(matches!(
                GaConfig::new(m).validate(),
                Err(Error::OrderNotMultipleOfFour(_))
            ));
        }
        for m in [4, 8, 12, 20] {
            GaConfig::new(m).validate().unwrap();
        }
    }

    #[test]
    fn nc_nr_bounds() {
        let mut c = GaConfig::new(8);
        c.mutated_columns = 7;
        c.row_pairs = 4;
        c.validate().unwrap();
        c.mutated_columns = 8;
        assert!(c.validate().is_err());
        c.mutated_columns = 0;
        assert!(c.validate().is_err());
        c.mutated_columns = 1;
        c.row_pairs = 5;
        assert!(c.validate().is_err());
        c.row_pairs = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn other_bounds() {
        let mut c = GaConfig::new(4);
        c.pairs = 0;
        assert!(c.validate().is_err());
        let mut c = GaConfig::new(4);
        c.stall_window = Some(0);
        assert!(c.validate().is_err());
        let mut c = GaConfig::new(4);
        c.time_budget_secs = Some(-1.0);
        assert!(c.validate().is_err());
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in [
            MutationStrategy::Shared,
            MutationStrategy::PerMatrix,
            MutationStrategy::Multi,
        ] {
            assert_eq!(s.name().parse::<MutationStrategy>().unwrap(), s);
        }
    }
}
