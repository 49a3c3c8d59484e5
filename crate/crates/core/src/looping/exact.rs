use num_traits::Float;
use alloc::string::String;
use alloc::vec::Vec;

use super::CorrectionRule;
use crate::error::{Error, Result};
use crate::processor::{decompose, ProcessorDefinition, ProgramState, PROB_CUTOFF};
use crate::qlinalg::{Ket, Operator};

/// Default cap on the number of nodes held in one level of the outcome tree.
pub const DEFAULT_NODE_BUDGET: usize = 4096;

/// Relative tolerance for treating branch operators as scaled unitaries.
const TOL_SCALED_UNITARY: f64 = 1e-9;

/// Spread of per-node success probabilities tolerated in a homogeneous level.
const TOL_HOMOGENEOUS: f64 = 1e-12;

/// Outcome of an exact tree evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactReport {
    pub probability: f64,
    /// Levels evaluated node by node.
    pub exact_depth: usize,
    /// True when the remaining levels were summed as a geometric tail.
    pub extrapolated: bool,
}

struct Node {
    mass: f64,
    state: Ket,
    residual: Operator,
    program: ProgramState,
}

/// Cumulative success probability of `rounds` loop rounds, see [`exact_success_report`].
pub fn exact_success(
    proc: &ProcessorDefinition,
    psi: &Ket,
    target: &Operator,
    rule: &CorrectionRule,
    rounds: usize,
) -> Result<f64> {
    exact_success_report(proc, psi, target, rule, rounds, DEFAULT_NODE_BUDGET).map(|r| r.probability)
}

/// Evaluates the loop's outcome tree level by level with [`decompose`] at every node.
///
/// When the next level would exceed `node_budget`, the tree is summed in
/// closed form only if it is homogeneous: every node seen so far (at least two
/// levels) had scaled-unitary branch operators, which makes its outcome
/// probabilities independent of the data state, and the same success
/// probability `p`. The remaining failure mass `F` then contributes
/// `F·(1 − (1 − p)^m)` over the last `m` rounds. Otherwise the evaluation
/// fails with [`Error::TreeBudgetExceeded`].
///
/// Paths whose failed branch is not invertible end there and count as failures.
pub fn exact_success_report(
    proc: &ProcessorDefinition,
    psi: &Ket,
    target: &Operator,
    rule: &CorrectionRule,
    rounds: usize,
    node_budget: usize,
) -> Result<ExactReport> {
    exact_success_with_labels(proc, psi, target, rule, rounds, &rule.default_success_labels(), node_budget)
}

/// [`exact_success_report`] with an explicit set of success outcomes, applied in every round.
pub fn exact_success_with_labels(
    proc: &ProcessorDefinition,
    psi: &Ket,
    target: &Operator,
    rule: &CorrectionRule,
    rounds: usize,
    success: &[String],
    node_budget: usize,
) -> Result<ExactReport> {
    if rounds == 0 {
        return Err(Error::InvalidParameter("at least one round is required".into()));
    }
    psi.require_normalized()?;
    let basis = rule.basis();

    let mut frontier = alloc::vec![Node {
        mass: 1.0,
        state: psi.clone(),
        residual: Operator::identity(proc.data_dim()),
        program: rule.encode(target)?,
    }];
    let mut total = 0.0;
    let mut common_p: Option<f64> = None;
    let mut homogeneous = true;

    for depth in 0..rounds {
        let mut failures = Vec::new();
        let mut failure_mass = 0.0;
        for node in &frontier {
            let dec = decompose(proc, &node.state, &node.program, &basis)?;
            let p = dec.probability_of(success);
            total += node.mass * p;
            failure_mass += node.mass * (1.0 - p);

            let scaled_unitary =
                dec.branches.iter().all(|b| b.operator.unitary_scale(TOL_SCALED_UNITARY).is_some());
            match common_p {
                None => common_p = Some(p),
                Some(q) if (q - p).abs() > TOL_HOMOGENEOUS => homogeneous = false,
                _ => {}
            }
            homogeneous &= scaled_unitary;

            if depth + 1 < rounds {
                for b in &dec.branches {
                    if success.contains(&b.label) || b.probability < PROB_CUTOFF {
                        continue;
                    }
                    failures.push((node, b.operator.clone(), b.probability, b.post_state.clone()));
                }
            }
        }

        if depth + 1 == rounds {
            return Ok(ExactReport { probability: total, exact_depth: rounds, extrapolated: false });
        }
        if failures.len() > node_budget {
            let p = common_p.unwrap_or(0.0);
            if homogeneous && depth >= 1 {
                let remaining = (rounds - depth - 1) as f64;
                let tail = -(remaining * (-p).ln_1p()).exp_m1();
                return Ok(ExactReport {
                    probability: total + failure_mass * tail,
                    exact_depth: depth + 1,
                    extrapolated: true,
                });
            }
            return Err(Error::TreeBudgetExceeded { budget: node_budget });
        }

        let mut next = Vec::with_capacity(failures.len());
        for (node, op, prob, post) in failures {
            let residual = &op * &node.residual;
            let program = match rule.next_program(target, &residual) {
                Ok(p) => p,
                // An uncorrectable branch ends its path as a failure.
                Err(Error::SingularOperator { .. } | Error::SingularProgram { .. }) => {
                    homogeneous = false;
                    continue;
                }
                Err(e) => return Err(e),
            };
            next.push(Node {
                mass: node.mass * prob,
                state: post.expect("non-negligible branches carry a post-state"),
                residual,
                program,
            });
        }
        if next.is_empty() {
            return Ok(ExactReport { probability: total, exact_depth: depth + 1, extrapolated: false });
        }
        frontier = next;
    }
    unreachable!("loop returns on the last round")
}
