use alloc::string::String;
use alloc::vec::Vec;

use rand_core::RngCore;

use super::CorrectionRule;
use crate::error::{Error, Result};
use crate::processor::{decompose, ProcessorDefinition, ProgramState};
use crate::qlinalg::{Ket, Operator};

/// Stopping rule of a loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopPolicy {
    pub max_rounds: usize,
    /// Outcomes counted as success in every round; `None` uses the rule's defaults.
    pub success_labels: Option<Vec<String>>,
}

impl LoopPolicy {
    pub fn new(max_rounds: usize) -> Result<Self> {
        if max_rounds == 0 {
            return Err(Error::InvalidParameter("max_rounds must be at least 1".into()));
        }
        Ok(Self { max_rounds, success_labels: None })
    }

    pub fn with_success_labels(mut self, labels: Vec<String>) -> Self {
        self.success_labels = Some(labels);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoopStatus {
    Succeeded,
    /// Every allowed round failed.
    Exhausted,
    /// A failed branch was not invertible, so no corrected program exists.
    Uncorrectable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    pub program: ProgramState,
    pub outcome: String,
    pub probability: f64,
    pub post_state: Ket,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoopTrace {
    pub rounds: Vec<RoundRecord>,
    pub status: LoopStatus,
}

impl LoopTrace {
    pub fn succeeded(&self) -> bool {
        self.status == LoopStatus::Succeeded
    }

    pub fn rounds_used(&self) -> usize {
        self.rounds.len()
    }

    pub fn final_state(&self) -> Option<&Ket> {
        self.rounds.last().map(|r| &r.post_state)
    }
}

/// Samples rounds until a success outcome or until the policy runs out.
///
/// On success the final post-state is `target·ψ` up to normalization and phase.
pub fn run_loop<R: RngCore + ?Sized>(
    proc: &ProcessorDefinition,
    psi: &Ket,
    target: &Operator,
    rule: &CorrectionRule,
    policy: &LoopPolicy,
    rng: &mut R,
) -> Result<LoopTrace> {
    if policy.max_rounds == 0 {
        return Err(Error::InvalidParameter("max_rounds must be at least 1".into()));
    }
    psi.require_normalized()?;
    let basis = rule.basis();
    let success = policy.success_labels.clone().unwrap_or_else(|| rule.default_success_labels());

    let mut rounds = Vec::new();
    let mut state = psi.clone();
    let mut residual = Operator::identity(proc.data_dim());
    let mut program = rule.encode(target)?;
    let mut status = LoopStatus::Exhausted;

    for round in 0..policy.max_rounds {
        let dec = decompose(proc, &state, &program, &basis)?;
        let branch = dec.draw(rng);
        let post = branch.post_state.clone().expect("drawn branches carry a post-state");
        rounds.push(RoundRecord {
            program: program.clone(),
            outcome: branch.label.clone(),
            probability: branch.probability,
            post_state: post.clone(),
        });
        if success.contains(&branch.label) {
            status = LoopStatus::Succeeded;
            break;
        }
        if round + 1 == policy.max_rounds {
            break;
        }
        residual = &branch.operator * &residual;
        program = match rule.next_program(target, &residual) {
            Ok(p) => p,
            Err(Error::SingularOperator { .. } | Error::SingularProgram { .. }) => {
                status = LoopStatus::Uncorrectable;
                break;
            }
            Err(e) => return Err(e),
        };
        state = post;
    }
    Ok(LoopTrace { rounds, status })
}
