//! Monte Carlo loop trajectories.

use qproc_core::looping::{exact_success_with_labels, DEFAULT_NODE_BUDGET};
use qproc_core::qlinalg::{Ket, Operator};
use qproc_core::random::{haar_state, haar_unitary};
use qproc_core::zoo::{
    amp_modifier_processor, b_operator, geometric_program, vmc3, vmc3_program, weyl,
};
use qproc_core::{
    decompose, run_loop, CorrectionRule, LoopPolicy, LoopStatus, LoopTrace, ProcessorDefinition, ProgramBasis,
    ProgramState, RoundRecord,
};
use qproc_core::qlinalg::su2_exp;
use rand_core::RngCore;
use rayon::prelude::*;

use crate::config::{to_c64, DataSpec, ExperimentConfig, FamilySpec, TargetSpec};
use crate::error::{HarnessError, Result};
use crate::records::{SampleReport, Summary, TraceRecord};
use crate::rng::{trial_rng, SETUP_TRIAL};

enum Mode {
    Loop { rule: CorrectionRule, target: Operator },
    /// Families without a correction rule: one measurement of a fixed program.
    Single { program: ProgramState },
}

/// A processor, its measurement basis and what counts as success.
pub struct Setup {
    proc: ProcessorDefinition,
    basis: ProgramBasis,
    mode: Mode,
    success: Vec<String>,
}

fn labels(range: std::ops::Range<usize>) -> Vec<String> {
    range.map(|j| j.to_string()).collect()
}

fn loop_setup(rule: CorrectionRule, target: Operator) -> Result<Setup> {
    Ok(Setup {
        proc: rule.processor()?,
        basis: rule.basis(),
        success: rule.default_success_labels(),
        mode: Mode::Loop { rule, target },
    })
}

fn qid_n_target(cfg: &ExperimentConfig, dim: usize, spec: &TargetSpec) -> Result<Operator> {
    Ok(match spec {
        TargetSpec::Haar => haar_unitary(dim, &mut trial_rng(cfg.seed, cfg.experiment_index, SETUP_TRIAL)),
        TargetSpec::Identity => Operator::identity(dim),
        TargetSpec::Weyl { m, n } => weyl(*m % dim, *n % dim, dim),
        TargetSpec::Matrix { rows } => {
            if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                return Err(HarnessError::usage(format!("target matrix must be {dim}x{dim}")));
            }
            let data = rows.iter().flatten().copied().map(to_c64).collect();
            Operator::new(dim, dim, data)?
        }
    })
}

impl Setup {
    pub fn new(cfg: &ExperimentConfig) -> Result<Self> {
        let mut setup = match &cfg.family {
            FamilySpec::U1 { alpha } => loop_setup(CorrectionRule::u1(), qproc_core::qlinalg::u1_rotation(*alpha))?,
            FamilySpec::Vmc3 { alpha } => Setup {
                proc: vmc3(),
                basis: ProgramBasis::computational(4),
                mode: Mode::Single { program: vmc3_program(*alpha) },
                success: labels(0..3),
            },
            FamilySpec::Bz { z, program_dim } => {
                let rule = match program_dim {
                    2 => CorrectionRule::bz(),
                    n => CorrectionRule::cyclic(*n),
                };
                loop_setup(rule, b_operator(to_c64(*z)))?
            }
            FamilySpec::Diagonal { entries } => {
                let entries: Vec<_> = entries.iter().copied().map(to_c64).collect();
                loop_setup(CorrectionRule::diagonal(entries.len()), Operator::diag(&entries))?
            }
            FamilySpec::B0 { z, data_dim, program_dim } => Setup {
                proc: amp_modifier_processor(*data_dim, *program_dim)?,
                basis: ProgramBasis::computational(*program_dim),
                mode: Mode::Single { program: geometric_program(to_c64(*z), *program_dim)? },
                success: labels(0..program_dim - 1),
            },
            FamilySpec::Qid2 { mu } => loop_setup(CorrectionRule::qid2(), su2_exp(*mu))?,
            FamilySpec::QidN { dim, target } => {
                let v = qid_n_target(cfg, *dim, target)?;
                loop_setup(CorrectionRule::qid_n(*dim), v)?
            }
        };
        if let Mode::Loop { rule, target } = &setup.mode {
            // Surface unencodable targets as configuration errors up front.
            rule.encode(target)?;
        }
        if let Some(custom) = &cfg.success_labels {
            if let Some(bad) = custom.iter().find(|l| setup.basis.position(l).is_none()) {
                return Err(HarnessError::usage(format!("unknown outcome label '{bad}'")));
            }
            setup.success = custom.clone();
        }
        Ok(setup)
    }

    pub fn data_dim(&self) -> usize {
        self.proc.data_dim()
    }

    pub fn run_trial<R: RngCore>(&self, psi: &Ket, rounds: usize, rng: &mut R) -> Result<LoopTrace> {
        match &self.mode {
            Mode::Loop { rule, target } => {
                let policy = LoopPolicy::new(rounds)?.with_success_labels(self.success.clone());
                Ok(run_loop(&self.proc, psi, target, rule, &policy, rng)?)
            }
            Mode::Single { program } => {
                let dec = decompose(&self.proc, psi, program, &self.basis)?;
                let b = dec.draw(rng);
                let status =
                    if self.success.contains(&b.label) { LoopStatus::Succeeded } else { LoopStatus::Exhausted };
                Ok(LoopTrace {
                    rounds: vec![RoundRecord {
                        program: program.clone(),
                        outcome: b.label.clone(),
                        probability: b.probability,
                        post_state: b.post_state.clone().expect("drawn branches carry a post-state"),
                    }],
                    status,
                })
            }
        }
    }

    /// Exact success probability for the data state `psi`.
    pub fn exact_for(&self, psi: &Ket, rounds: usize) -> Result<f64> {
        Ok(match &self.mode {
            Mode::Loop { rule, target } => {
                exact_success_with_labels(&self.proc, psi, target, rule, rounds, &self.success, DEFAULT_NODE_BUDGET)?
                    .probability
            }
            Mode::Single { program } => decompose(&self.proc, psi, program, &self.basis)?.probability_of(&self.success),
        })
    }

    /// Exact success probability averaged over Haar-random data states.
    ///
    /// Programs only depend on earlier outcomes, so the success probability
    /// is a quadratic form `⟨ψ|M|ψ⟩`; its Haar average `Tr M / D` is the
    /// mean over computational basis states.
    pub fn exact_haar_average(&self, rounds: usize) -> Result<f64> {
        let d = self.data_dim();
        let mut sum = 0.0;
        for k in 0..d {
            sum += self.exact_for(&Ket::basis(d, k), rounds)?;
        }
        Ok(sum / d as f64)
    }
}

fn fixed_state(cfg: &ExperimentConfig, dim: usize) -> Result<Option<Ket>> {
    match &cfg.data {
        DataSpec::Haar => Ok(None),
        DataSpec::Fixed { amplitudes } => {
            if amplitudes.len() != dim {
                return Err(HarnessError::usage(format!(
                    "data state has {} amplitudes, processor expects {dim}",
                    amplitudes.len()
                )));
            }
            let ket = Ket::new(amplitudes.iter().copied().map(to_c64).collect())?;
            Ok(Some(ket.normalized().map_err(|e| HarnessError::usage(format!("data state: {e}")))?))
        }
    }
}

struct TrialOutcome {
    status: LoopStatus,
    rounds_used: usize,
    record: Option<TraceRecord>,
}

/// Runs `cfg.trials` independent trajectories in parallel and summarizes them.
///
/// Trial `t` draws everything (its Haar data state first, then the
/// measurement outcomes) from [`trial_rng`]`(seed, experiment_index, t)`, and
/// results are collected in trial order, so the report does not depend on
/// the number of threads.
pub fn run_sample(cfg: &ExperimentConfig) -> Result<SampleReport> {
    cfg.validate()?;
    let setup = Setup::new(cfg).map_err(|e| match e {
        HarnessError::Core(c) => HarnessError::usage(format!("invalid experiment '{}': {c}", cfg.id)),
        other => other,
    })?;
    let fixed = fixed_state(cfg, setup.data_dim())?;
    let keep = cfg.max_traces.unwrap_or(cfg.trials);

    let outcomes: Vec<TrialOutcome> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, cfg.experiment_index, t as u32);
            let psi = match &fixed {
                Some(k) => k.clone(),
                None => haar_state(setup.data_dim(), &mut rng),
            };
            let trace = setup.run_trial(&psi, cfg.rounds, &mut rng)?;
            Ok(TrialOutcome {
                status: trace.status,
                rounds_used: trace.rounds_used(),
                record: (t < keep).then(|| TraceRecord::from_trace(t, &trace)),
            })
        })
        .collect::<Result<_>>()?;

    let exact = match &fixed {
        Some(psi) => setup.exact_for(psi, cfg.rounds)?,
        None => setup.exact_haar_average(cfg.rounds)?,
    };
    let successes = outcomes.iter().filter(|o| o.status == LoopStatus::Succeeded).count();
    let uncorrectable = outcomes.iter().filter(|o| o.status == LoopStatus::Uncorrectable).count();
    let total_rounds = outcomes.iter().map(|o| o.rounds_used).sum();
    let summary = Summary::new(cfg.trials, successes, uncorrectable, total_rounds, exact);
    let traces = outcomes.into_iter().filter_map(|o| o.record).collect();
    Ok(SampleReport { config: cfg.clone(), traces, summary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::preset;

    #[test]
    fn every_preset_runs() {
        for (id, ..) in crate::config::presets() {
            let mut cfg = preset(id).unwrap();
            cfg.trials = 20;
            let r = run_sample(&cfg).unwrap();
            assert_eq!(r.traces.len(), 20);
            assert!(r.summary.exact > 0.0 && r.summary.exact <= 1.0, "{id}");
        }
    }

    #[test]
    fn preset_exact_values() {
        let exact = |id: &str| {
            let mut cfg = preset(id).unwrap();
            cfg.trials = 1;
            run_sample(&cfg).unwrap().summary.exact
        };
        assert!((exact("u1") - 0.5).abs() < 1e-12);
        assert!((exact("u1-loop") - 0.875).abs() < 1e-12);
        assert!((exact("vmc3") - 0.75).abs() < 1e-12);
        assert!((exact("bz-average") - 0.7).abs() < 1e-12);
        assert!((exact("qutrit-loop") - (1.0 - 8.0 / 27.0)).abs() < 1e-12);
        assert!((exact("qid2-loop") - 7.0 / 16.0).abs() < 1e-12);
        assert!((exact("qidN") - 0.25).abs() < 1e-12);
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let mut cfg = preset("qidN-loop").unwrap();
        cfg.trials = 64;
        let a = run_sample(&cfg).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| run_sample(&cfg).unwrap());
        assert_eq!(a.to_json_bytes().unwrap(), b.to_json_bytes().unwrap());
    }

    #[test]
    fn rounds_on_single_round_family_rejected() {
        let mut cfg = preset("vmc3").unwrap();
        cfg.rounds = 2;
        assert_eq!(run_sample(&cfg).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn zero_z_is_usage_error() {
        let mut cfg = preset("bz-loop").unwrap();
        cfg.family = FamilySpec::Bz { z: [0.0, 0.0], program_dim: 2 };
        assert_eq!(run_sample(&cfg).unwrap_err().exit_code(), 2);
    }
}
