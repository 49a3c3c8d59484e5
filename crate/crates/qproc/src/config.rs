//! Experiment and sweep configurations, as read from `--config` JSON files.
//!
//! Complex numbers are written as `[re, im]` pairs throughout.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

pub type ComplexPair = [f64; 2];

pub fn to_c64(p: ComplexPair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

pub fn from_c64(c: Complex64) -> ComplexPair {
    [c.re, c.im]
}

/// The processor family and the parameters of its target operation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    /// CNOT processor, target `U(α)`.
    U1 { alpha: f64 },
    /// CNOT+Toffoli processor, target `U(α)`, single round.
    Vmc3 { alpha: f64 },
    /// `B(z)` on the cyclic processor; `program_dim = 2` is the CNOT processor.
    Bz { z: ComplexPair, program_dim: usize },
    /// Cyclic diagonal processor, target `diag(entries)`.
    Diagonal { entries: Vec<ComplexPair> },
    /// Amplitude modifier for `B₀(z)`, single round.
    B0 { z: ComplexPair, data_dim: usize, program_dim: usize },
    /// Qubit QID, target `exp(i μ⃗·σ⃗)`.
    Qid2 { mu: [f64; 3] },
    /// Qudit QID, target `V`.
    QidN { dim: usize, target: TargetSpec },
}

impl FamilySpec {
    /// Families without a correction rule run exactly one round.
    pub fn single_round_only(&self) -> bool {
        matches!(self, FamilySpec::Vmc3 { .. } | FamilySpec::B0 { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetSpec {
    /// Drawn once per experiment from the setup stream.
    Haar,
    Identity,
    /// The Weyl operator `U^(m,n)`.
    Weyl { m: usize, n: usize },
    /// Row-major entries.
    Matrix { rows: Vec<Vec<ComplexPair>> },
}

/// Input state of the data register.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataSpec {
    /// A fresh Haar-random state per trial.
    #[default]
    Haar,
    /// Normalized before use.
    Fixed { amplitudes: Vec<ComplexPair> },
}

/// A fully resolved Monte Carlo experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub id: String,
    pub family: FamilySpec,
    pub rounds: usize,
    pub trials: usize,
    pub seed: u64,
    pub experiment_index: u32,
    pub data: DataSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub success_labels: Option<Vec<String>>,
    /// How many traces to write out; the summary always covers every trial.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_traces: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

/// What a `--config` file may contain; unset fields fall back to the preset named by `id`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentFile {
    pub id: String,
    pub family: Option<FamilySpec>,
    pub rounds: Option<usize>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub experiment_index: Option<u32>,
    pub data: Option<DataSpec>,
    pub success_labels: Option<Vec<String>>,
    pub max_traces: Option<usize>,
    pub tolerance: Option<f64>,
}

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TRIALS: usize = 10_000;

/// Named experiments known to `sample` and `list`.
pub fn presets() -> Vec<(&'static str, &'static str, FamilySpec, usize)> {
    let half = 0.5f64.sqrt();
    vec![
        ("u1", "CNOT processor, U(0.3), one round", FamilySpec::U1 { alpha: 0.3 }, 1),
        ("u1-loop", "CNOT processor, U(0.3), three rounds", FamilySpec::U1 { alpha: 0.3 }, 3),
        ("vmc3", "CNOT+Toffoli processor, U(0.3)", FamilySpec::Vmc3 { alpha: 0.3 }, 1),
        (
            "bz-average",
            "B(z) with |z|^2 = 1/2 on a 4-dim program",
            FamilySpec::Bz { z: [half, 0.0], program_dim: 4 },
            1,
        ),
        ("bz-loop", "B(0.6) on the CNOT processor, three rounds", FamilySpec::Bz { z: [0.6, 0.0], program_dim: 2 }, 3),
        (
            "qutrit-loop",
            "qutrit diagonal unitary, three rounds",
            FamilySpec::Diagonal { entries: vec![[1.0, 0.0], [0.0, 1.0], [-0.6, -0.8]] },
            3,
        ),
        (
            "b0",
            "B0(0.7) amplitude modifier, D = 3, N = 4",
            FamilySpec::B0 { z: [0.7, 0.0], data_dim: 3, program_dim: 4 },
            1,
        ),
        ("qid2", "qubit QID, mu = (0.2, -0.5, 0.9), one round", FamilySpec::Qid2 { mu: [0.2, -0.5, 0.9] }, 1),
        ("qid2-loop", "qubit QID, one correction round", FamilySpec::Qid2 { mu: [0.2, -0.5, 0.9] }, 2),
        ("qidN", "qudit QID, N = 2, Haar-random V, one round", FamilySpec::QidN { dim: 2, target: TargetSpec::Haar }, 1),
        (
            "qidN-loop",
            "qudit QID, N = 3, Haar-random V, five rounds",
            FamilySpec::QidN { dim: 3, target: TargetSpec::Haar },
            5,
        ),
    ]
}

pub fn preset(id: &str) -> Option<ExperimentConfig> {
    presets().into_iter().find(|p| p.0 == id).map(|(id, _, family, rounds)| ExperimentConfig {
        id: id.to_string(),
        family,
        rounds,
        trials: DEFAULT_TRIALS,
        seed: DEFAULT_SEED,
        experiment_index: 0,
        data: DataSpec::Haar,
        success_labels: None,
        max_traces: None,
        tolerance: None,
    })
}

impl ExperimentConfig {
    pub fn from_file(file: ExperimentFile) -> Result<Self> {
        let mut cfg = preset(&file.id).ok_or_else(|| {
            HarnessError::usage(format!("unknown experiment id '{}' (see `qproc list`)", file.id))
        })?;
        if let Some(f) = file.family {
            cfg.family = f;
        }
        cfg.rounds = file.rounds.unwrap_or(cfg.rounds);
        cfg.trials = file.trials.unwrap_or(cfg.trials);
        cfg.seed = file.seed.unwrap_or(cfg.seed);
        cfg.experiment_index = file.experiment_index.unwrap_or(0);
        cfg.data = file.data.unwrap_or_default();
        cfg.success_labels = file.success_labels;
        cfg.max_traces = file.max_traces;
        cfg.tolerance = file.tolerance;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(HarnessError::usage("trials must be at least 1"));
        }
        if self.rounds == 0 {
            return Err(HarnessError::usage("rounds must be at least 1"));
        }
        if self.family.single_round_only() && self.rounds != 1 {
            return Err(HarnessError::usage(format!("experiment '{}' has no correction rule; rounds must be 1", self.id)));
        }
        if self.trials > u32::MAX as usize {
            return Err(HarnessError::usage("at most 2^32 - 1 trials per experiment"));
        }
        Ok(())
    }
}

/// Inclusive integer range; empty when `start > end`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntRange {
    pub start: usize,
    pub end: usize,
}

impl IntRange {
    pub fn iter(&self) -> impl Iterator<Item = usize> {
        self.start..=self.end
    }
}

/// Real grid: an explicit list or `steps` evenly spaced points in `[start, stop]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    List(Vec<f64>),
    Linspace { start: f64, stop: f64, steps: usize },
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        match self {
            Grid::List(v) => v.clone(),
            Grid::Linspace { steps: 0, .. } => Vec::new(),
            Grid::Linspace { start, steps: 1, .. } => vec![*start],
            Grid::Linspace { start, stop, steps } => {
                (0..*steps).map(|i| start + (stop - start) * i as f64 / (*steps - 1) as f64).collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SweepSpec {
    U1 { rounds: IntRange },
    Diagonal {
        #[serde(default = "three")]
        dim: usize,
        rounds: IntRange,
    },
    Qid2 { rounds: IntRange },
    QidN { dims: IntRange, rounds: IntRange },
    /// State-averaged single-round success of `B(z)`.
    Bz { z_abs: Grid, program_dims: IntRange },
    /// State-averaged single-round success of `B₀(z)`.
    B0 { z_abs: Grid, program_dims: IntRange, data_dim: usize },
}

fn three() -> usize {
    3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    #[serde(flatten)]
    pub spec: SweepSpec,
    /// Monte Carlo trials per grid point; 0 leaves the empirical column empty.
    #[serde(default)]
    pub trials: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|e| HarnessError::usage(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        for (id, ..) in presets() {
            preset(id).unwrap().validate().unwrap();
        }
    }

    #[test]
    fn file_overrides_preset() {
        let file: ExperimentFile =
            serde_json::from_str(r#"{"id": "qidN", "trials": 5, "family": {"kind": "qid_n", "dim": 3, "target": "identity"}}"#)
                .unwrap();
        let cfg = ExperimentConfig::from_file(file).unwrap();
        assert_eq!(cfg.trials, 5);
        assert_eq!(cfg.family, FamilySpec::QidN { dim: 3, target: TargetSpec::Identity });
        assert_eq!(cfg.seed, DEFAULT_SEED);
    }

    #[test]
    fn unknown_id_is_usage_error() {
        let file = ExperimentFile { id: "nope".into(), ..Default::default() };
        assert_eq!(ExperimentConfig::from_file(file).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn sweep_json_shapes() {
        let s: SweepConfig =
            serde_json::from_str(r#"{"family": "bz", "z_abs": {"start": 0.25, "stop": 2.0, "steps": 8}, "program_dims": {"start": 2, "end": 8}}"#)
                .unwrap();
        match &s.spec {
            SweepSpec::Bz { z_abs, .. } => assert_eq!(z_abs.points().len(), 8),
            other => panic!("{other:?}"),
        }
        let s: SweepConfig = serde_json::from_str(r#"{"family": "qid2", "rounds": {"start": 1, "end": 30}}"#).unwrap();
        assert_eq!(s.trials, 0);
        assert!(Grid::List(vec![]).points().is_empty());
    }
}
