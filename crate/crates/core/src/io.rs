//! Text formats: matrices, run records and fitness traces.
//!
//! Matrix text is a header line `hadamard-ga matrix m=<m>` followed by `m`
//! lines of `m` characters from `{+, -}`. Run records are JSON documents.
//! Traces are two-column CSV (`iteration,min_fitness`).

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::engine::{GaConfig, MutationStrategy, RunRecord};
use crate::error::{Error, Result};
use crate::fitness::{Fitness, FitnessKind};
use crate::matrix::SignMatrix;

pub const MATRIX_HEADER_PREFIX: &str = "hadamard-ga matrix m=";

pub fn write_matrix(q: &SignMatrix) -> String {
    let m = q.order();
    let mut out = String::with_capacity(MATRIX_HEADER_PREFIX.len() + 8 + m * (m + 1));
    out.push_str(MATRIX_HEADER_PREFIX);
    out.push_str(&m.to_string());
    out.push('\n');
    for row in q.entries().chunks_exact(m) {
        out.extend(row.iter().map(|&e| if e > 0 { '+' } else { '-' }));
        out.push('\n');
    }
    out
}

/// Parses matrix text. Errors carry 1-based line and column positions.
pub fn parse_matrix(text: &str) -> Result<SignMatrix> {
    let mut lines = text.lines().map(|l| l.strip_suffix('\r').unwrap_or(l));
    let header = lines.next().ok_or_else(|| Error::parse(1, 1, "empty input"))?;
    let order_text = header
        .strip_prefix(MATRIX_HEADER_PREFIX)
        .ok_or_else(|| Error::parse(1, 1, format!("expected header {MATRIX_HEADER_PREFIX:?}<m>")))?;
    let m: usize = order_text.trim().parse().map_err(|_| {
        Error::parse(1, MATRIX_HEADER_PREFIX.len() + 1, format!("invalid order {order_text:?}"))
    })?;
    if m == 0 {
        return Err(Error::parse(1, MATRIX_HEADER_PREFIX.len() + 1, "order must be at least 1"));
    }

    let mut entries = Vec::with_capacity(m * m);
    let mut rows = 0usize;
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 2;
        if rows == m {
            if line.trim().is_empty() {
                continue;
            }
            return Err(Error::parse(line_no, 1, format!("more than {m} rows")));
        }
        let mut width = 0usize;
        for (col, ch) in line.chars().enumerate() {
            let sign = match ch {
                '+' => 1,
                '-' => -1,
                other => {
                    return Err(Error::parse(line_no, col + 1, format!("illegal character {other:?}")))
                }
            };
            if col >= m {
                return Err(Error::parse(line_no, col + 1, format!("row longer than {m}")));
            }
            entries.push(sign);
            width += 1;
        }
        if width != m {
            return Err(Error::parse(
                line_no,
                width + 1,
                format!("row has {width} entries, expected {m}"),
            ));
        }
        rows += 1;
    }
    if rows != m {
        return Err(Error::parse(rows + 2, 1, format!("found {rows} rows, expected {m}")));
    }
    SignMatrix::new(m, entries)
}

pub fn read_matrix_file(path: impl AsRef<Path>) -> Result<SignMatrix> {
    parse_matrix(&fs::read_to_string(path)?)
}

pub fn read_matrix_from(mut reader: impl Read) -> Result<SignMatrix> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    parse_matrix(&text)
}

pub fn write_matrix_file(path: impl AsRef<Path>, q: &SignMatrix) -> Result<()> {
    fs::write(path, write_matrix(q))?;
    Ok(())
}

/// Search parameters as stored in a run record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigDoc {
    pub order: usize,
    pub k: usize,
    pub pairs: usize,
    pub population: usize,
    pub max_iterations: u64,
    pub mutated_columns: usize,
    pub row_pairs: usize,
    pub fitness: FitnessKind,
    pub mutation: MutationStrategy,
    pub seed: Option<u64>,
    pub stall_window: Option<usize>,
    pub time_budget_secs: Option<f64>,
}

impl From<&GaConfig> for ConfigDoc {
    fn from(c: &GaConfig) -> Self {
        ConfigDoc {
            order: c.order,
            k: c.k(),
            pairs: c.pairs,
            population: c.population_len(),
            max_iterations: c.max_iterations,
            mutated_columns: c.mutated_columns,
            row_pairs: c.row_pairs,
            fitness: c.fitness,
            mutation: c.mutation,
            seed: c.seed.map(|s| s.0),
            stall_window: c.stall_window,
            time_budget_secs: c.time_budget_secs,
        }
    }
}

/// Persisted run record. Every field is always written; absent optional
/// values are `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecordDoc {
    pub config: ConfigDoc,
    pub seed: u64,
    pub iterations: u64,
    pub final_min_fitness: u64,
    pub success: bool,
    pub incomplete: bool,
    pub restarts: u64,
    pub wall_seconds: f64,
    /// Best matrix in matrix text format.
    pub best_matrix: String,
    /// Path of the trace CSV, if one was written.
    pub trace: Option<String>,
}

impl RunRecordDoc {
    pub fn from_record(record: &RunRecord, trace_path: Option<String>) -> Self {
        RunRecordDoc {
            config: ConfigDoc::from(&record.config),
            seed: record.seed.0,
            iterations: record.iterations,
            final_min_fitness: record.best_fitness.0,
            success: record.success,
            incomplete: record.incomplete,
            restarts: record.restarts,
            wall_seconds: record.wall_seconds,
            best_matrix: write_matrix(&record.best_matrix),
            trace: trace_path,
        }
    }

    pub fn best_matrix(&self) -> Result<SignMatrix> {
        parse_matrix(&self.best_matrix)
    }

    /// Checks the document invariants: a parseable matrix, and a verified
    /// Hadamard matrix whenever success is claimed.
    pub fn verify(&self) -> Result<()> {
        let q = self.best_matrix()?;
        if q.order() != self.config.order {
            return Err(Error::Document(format!(
                "matrix order {} does not match config order {}",
                q.order(),
                self.config.order
            )));
        }
        if self.success && !(self.final_min_fitness == 0 && q.is_hadamard()) {
            return Err(Error::UnverifiedRecord);
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// Parses and verifies a record.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: RunRecordDoc = serde_json::from_str(text)?;
        doc.verify()?;
        Ok(doc)
    }
}

pub fn write_run_record(path: impl AsRef<Path>, doc: &RunRecordDoc) -> Result<()> {
    fs::write(path, doc.to_json()?)?;
    Ok(())
}

pub fn read_run_record(path: impl AsRef<Path>) -> Result<RunRecordDoc> {
    RunRecordDoc::from_json(&fs::read_to_string(path)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
struct TraceRow {
    iteration: u64,
    min_fitness: u64,
}

fn check_monotone(trace: &[Fitness]) -> Result<()> {
    match trace.windows(2).position(|w| w[1] > w[0]) {
        Some(i) => Err(Error::TraceNotMonotone { iteration: i + 1 }),
        None => Ok(()),
    }
}

/// Writes `iteration,min_fitness` rows; refuses non-monotone traces.
pub fn write_trace(trace: &[Fitness], writer: impl Write) -> Result<()> {
    check_monotone(trace)?;
    let mut w = csv::Writer::from_writer(writer);
    for (i, f) in trace.iter().enumerate() {
        w.serialize(TraceRow {
            iteration: i as u64,
            min_fitness: f.0,
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_trace_file(path: impl AsRef<Path>, trace: &[Fitness]) -> Result<()> {
    let file = fs::File::create(path)?;
    write_trace(trace, std::io::BufWriter::new(file))
}

/// Reads a trace, checking that iterations count up from 0 and fitness
/// never increases.
pub fn read_trace(reader: impl Read) -> Result<Vec<Fitness>> {
    let mut r = csv::Reader::from_reader(reader);
    let mut trace = Vec::new();
    for (i, row) in r.deserialize::<TraceRow>().enumerate() {
        let row = row?;
        if row.iteration != i as u64 {
            return Err(Error::Document(format!(
                "trace row {i} has iteration {}",
                row.iteration
            )));
        }
        trace.push(Fitness(row.min_fitness));
    }
    check_monotone(&trace)?;
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::sylvester;
    use crate::rng::Seed;

    #[test]
    fn h4_text() {
        let h4 = sylvester(2).unwrap();
        let text = write_matrix(&h4);
        assert_eq!(text, "hadamard-ga matrix m=4\n++++\n+-+-\n++--\n+--+\n");
        assert_eq!(parse_matrix(&text).unwrap(), h4);
    }

    #[test]
    fn illegal_character_position() {
        let err = parse_matrix("hadamard-ga matrix m=2\n++\n+0\n").unwrap_err();
        match err {
            Error::Parse { line, column, .. } => assert_eq!((line, column), (3, 2)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_inputs() {
        let cases = [
            "",
            "matrix m=2\n++\n+-\n",
            "hadamard-ga matrix m=x\n++\n+-\n",
            "hadamard-ga matrix m=0\n",
            "hadamard-ga matrix m=2\n++\n",
            "hadamard-ga matrix m=2\n++\n+-\n--\n",
            "hadamard-ga matrix m=2\n+++\n+-\n",
            "hadamard-ga matrix m=2\n+\n+-\n",
        ];
        for c in cases {
            assert!(matches!(parse_matrix(c), Err(Error::Parse { .. })), "{c:?}");
        }
    }

    #[test]
    fn tolerates_crlf_and_trailing_blank_lines() {
        let q = parse_matrix("hadamard-ga matrix m=2\r\n++\r\n+-\r\n\n").unwrap();
        assert_eq!(q, sylvester(1).unwrap());
    }

    #[test]
    fn trace_round_trip_and_monotonicity() {
        let trace: Vec<_> = [12u64, 8, 8, 4, 0].iter().map(|&v| Fitness(v)).collect();
        let mut buf = Vec::new();
        write_trace(&trace, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("iteration,min_fitness\n0,12\n1,8\n"));
        assert_eq!(read_trace(buf.as_slice()).unwrap(), trace);

        let bad = [Fitness(3), Fitness(4)];
        assert!(matches!(
            write_trace(&bad, Vec::new()),
            Err(Error::TraceNotMonotone { iteration: 1 })
        ));
        assert!(read_trace("iteration,min_fitness\n0,5\n2,4\n".as_bytes()).is_err());
        assert!(read_trace("iteration,min_fitness\n0,5\n1,6\n".as_bytes()).is_err());
    }

    #[test]
    fn zero_iteration_record() {
        let c = GaConfig {
            pairs: 4,
            max_iterations: 0,
            seed: Some(Seed(5)),
            ..GaConfig::new(12)
        };
        let r = crate::run_search(&c).unwrap();
        let doc = RunRecordDoc::from_record(&r, None);
        assert!(!doc.success);
        assert_eq!(doc.iterations, 0);
        let back = RunRecordDoc::from_json(&doc.to_json().unwrap()).unwrap();
        assert_eq!(back, doc);
        let json: serde_json::Value = serde_json::from_str(&doc.to_json().unwrap()).unwrap();
        for key in [
            "config", "seed", "iterations", "final_min_fitness", "success", "wall_seconds",
            "best_matrix", "trace",
        ] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
    }

    #[test]
    fn forged_success_is_rejected() {
        let c = GaConfig {
            pairs: 4,
            max_iterations: 0,
            seed: Some(Seed(5)),
            ..GaConfig::new(12)
        };
        let r = crate::run_search(&c).unwrap();
        let mut doc = RunRecordDoc::from_record(&r, None);
        doc.success = true;
        doc.final_min_fitness = 0;
        assert!(matches!(
            RunRecordDoc::from_json(&doc.to_json().unwrap()),
            Err(Error::UnverifiedRecord)
        ));
    }
}
