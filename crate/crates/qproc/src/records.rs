//! Output records and their CSV / JSON encodings.

use std::io::Write;
use std::path::{Path, PathBuf};

use qproc_core::{Encoding, LoopStatus, LoopTrace, ProgramState};
use serde::{Deserialize, Serialize};

use crate::config::{from_c64, ComplexPair, ExperimentConfig};
use crate::error::{HarnessError, Result};

/// One row of a `reproduce` table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproRow {
    pub quantity: String,
    pub params: String,
    pub computed: f64,
    pub paper_value: f64,
    pub deviation: f64,
    /// Empty, `approx` or `erratum`.
    pub flag: String,
    pub note: String,
}

pub const REPRO_HEADER: [&str; 7] = ["quantity", "params", "computed", "paper_value", "deviation", "flag", "note"];

impl ReproRow {
    pub fn new(quantity: &str, params: String, computed: f64, paper_value: f64) -> Self {
        Self {
            quantity: quantity.into(),
            params,
            computed,
            paper_value,
            deviation: (computed - paper_value).abs(),
            flag: String::new(),
            note: String::new(),
        }
    }

    pub fn flagged(mut self, flag: &str, note: &str) -> Self {
        self.flag = flag.into();
        self.note = note.into();
        self
    }
}

/// One grid point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub experiment: String,
    pub params: String,
    pub exact: f64,
    pub empirical: Option<f64>,
    pub paper_value: Option<f64>,
    pub deviation: Option<f64>,
}

pub const RESULT_HEADER: [&str; 6] = ["experiment", "params", "exact", "empirical", "paper_value", "deviation"];

impl ResultRow {
    pub fn new(experiment: &str, params: String, exact: f64, paper_value: Option<f64>) -> Self {
        Self {
            experiment: experiment.into(),
            params,
            exact,
            empirical: None,
            paper_value,
            deviation: paper_value.map(|p| (exact - p).abs()),
        }
    }
}

/// Serializes rows under an explicit header, so an empty table still has one.
pub fn csv_bytes<T: Serialize>(header: &[&str], rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| HarnessError::Io { path: PathBuf::from("<csv buffer>"), source: e.into_error() })
}

/// The parameters a program state was built from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "encoding", rename_all = "snake_case")]
pub enum ProgramParams {
    U1 { alpha: f64 },
    Su2 { mu: [f64; 3] },
    Diagonal { entries: Vec<ComplexPair> },
    Geometric { z: ComplexPair, dim: usize },
    WeylExpansion { dim: usize, coefficients: Vec<ComplexPair>, scale: f64 },
    Raw { amplitudes: Vec<ComplexPair> },
}

impl From<&ProgramState> for ProgramParams {
    fn from(p: &ProgramState) -> Self {
        match p.encoding() {
            Encoding::U1 { alpha } => ProgramParams::U1 { alpha: *alpha },
            Encoding::Su2 { mu } => ProgramParams::Su2 { mu: *mu },
            Encoding::Diagonal { entries } => {
                ProgramParams::Diagonal { entries: entries.iter().copied().map(from_c64).collect() }
            }
            Encoding::Geometric { z, dim } => ProgramParams::Geometric { z: from_c64(*z), dim: *dim },
            Encoding::WeylExpansion { dim, coefficients, scale } => ProgramParams::WeylExpansion {
                dim: *dim,
                coefficients: coefficients.iter().copied().map(from_c64).collect(),
                scale: *scale,
            },
            Encoding::Raw => ProgramParams::Raw { amplitudes: p.ket().amps().iter().copied().map(from_c64).collect() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundOut {
    pub program_params: ProgramParams,
    pub outcome: String,
    pub prob: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceStatus {
    Succeeded,
    Exhausted,
    Uncorrectable,
}

impl From<LoopStatus> for TraceStatus {
    fn from(s: LoopStatus) -> Self {
        match s {
            LoopStatus::Succeeded => TraceStatus::Succeeded,
            LoopStatus::Exhausted => TraceStatus::Exhausted,
            LoopStatus::Uncorrectable => TraceStatus::Uncorrectable,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub trial: usize,
    pub rounds: Vec<RoundOut>,
    pub status: TraceStatus,
    pub succeeded: bool,
    pub rounds_used: usize,
}

impl TraceRecord {
    pub fn from_trace(trial: usize, t: &LoopTrace) -> Self {
        Self {
            trial,
            rounds: t
                .rounds
                .iter()
                .map(|r| RoundOut { program_params: (&r.program).into(), outcome: r.outcome.clone(), prob: r.probability })
                .collect(),
            status: t.status.into(),
            succeeded: t.succeeded(),
            rounds_used: t.rounds_used(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub trials: usize,
    pub successes: usize,
    pub uncorrectable: usize,
    pub empirical: f64,
    pub mean_rounds: f64,
    pub exact: f64,
    /// Binomial standard error `√(p(1−p)/trials)` at the exact `p`.
    pub sigma: f64,
    /// `exact ± 3σ`.
    pub interval: [f64; 2],
    pub within_3sigma: bool,
}

impl Summary {
    pub fn new(trials: usize, successes: usize, uncorrectable: usize, total_rounds: usize, exact: f64) -> Self {
        let n = trials as f64;
        let empirical = successes as f64 / n;
        let sigma = (exact * (1.0 - exact) / n).max(0.0).sqrt();
        // A degenerate p gives σ = 0; the frequency must then match exactly.
        let slack = 1e-12;
        let interval = [exact - 3.0 * sigma, exact + 3.0 * sigma];
        Self {
            trials,
            successes,
            uncorrectable,
            empirical,
            mean_rounds: total_rounds as f64 / n,
            exact,
            sigma,
            interval,
            within_3sigma: empirical >= interval[0] - slack && empirical <= interval[1] + slack,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub config: ExperimentConfig,
    pub traces: Vec<TraceRecord>,
    pub summary: Summary,
}

impl SampleReport {
    pub fn to_json_bytes(&self) -> Result<Vec<u8>> {
        let mut out = serde_json::to_vec_pretty(self)?;
        out.push(b'\n');
        Ok(out)
    }
}

/// Writes `bytes` to `path`, or to stdout when `path` is `-`.
pub fn write_output(path: &Path, bytes: &[u8]) -> Result<()> {
    let io = |source| HarnessError::Io { path: path.into(), source };
    if path == Path::new("-") {
        let mut out = std::io::stdout().lock();
        out.write_all(bytes).map_err(io)?;
        return out.flush().map_err(io);
    }
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    std::fs::write(path, bytes).map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_table_keeps_header() {
        let bytes = csv_bytes::<ResultRow>(&RESULT_HEADER, &[]).unwrap();
        assert_eq!(String::from_utf8(bytes).unwrap(), "experiment,params,exact,empirical,paper_value,deviation\n");
    }

    #[test]
    fn optional_columns_are_blank() {
        let row = ResultRow::new("qid2", "n=1".into(), 0.25, None);
        let text = String::from_utf8(csv_bytes(&RESULT_HEADER, &[row]).unwrap()).unwrap();
        assert_eq!(text.lines().nth(1).unwrap(), "qid2,n=1,0.25,,,");
    }

    #[test]
    fn degenerate_summary() {
        let s = Summary::new(10, 10, 0, 10, 1.0);
        assert_eq!(s.sigma, 0.0);
        assert!(s.within_3sigma);
        assert!(!Summary::new(10, 9, 0, 12, 1.0).within_3sigma);
    }
}
