//! Conditional loops: rerun a failed data register with a corrected program.
//!
//! Every rule follows the same residual scheme. After failures with branch
//! operators `F_1, …, F_k` the data carries `R = F_k ⋯ F_1 ψ`, so the next
//! program must encode `T R⁻¹` for the original target `T`; a success branch
//! proportional to that operator turns the register into `T ψ` up to scale.
//! The families differ only in how an operator is encoded as a program.

mod exact;
mod rules;
mod trace;

pub use exact::{exact_success, exact_success_report, exact_success_with_labels, ExactReport, DEFAULT_NODE_BUDGET};
pub use rules::{CorrectionRule, RuleFamily};
pub use trace::{run_loop, LoopPolicy, LoopStatus, LoopTrace, RoundRecord};
