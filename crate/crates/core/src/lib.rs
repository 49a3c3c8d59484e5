//! Simulation kernels for probabilistic programmable quantum processors.
//!
//! A processor is a fixed unitary `G` on `data ⊗ program`, written in block
//! form `G = Σ A_jk ⊗ |j⟩⟨k|`. Feeding it a program state and measuring the
//! program register applies one of several (generally non-unitary) branch
//! operators to the data. This crate provides:
//!
//! - [`qlinalg`]: the dense complex kets and operators everything is built on,
//! - [`processor`]: block assembly, validation, branch decomposition, sampling,
//! - [`zoo`]: the concrete qubit, qutrit, qudit and QID constructions together
//!   with their closed-form success probabilities,
//! - [`looping`]: conditional loops that re-run a failed data register with a
//!   corrected program, evaluated exactly or by Monte Carlo.
//!
//! The crate is `no_std` and only needs `alloc`. Randomness is drawn from any
//! [`rand_core::RngCore`] the caller supplies.
#![no_std]
// Whenever std is linked anywhere in the build (tests, std dependents), its
// inherent float methods make the `num_traits::Float` imports redundant.
#![allow(unused_imports)]

extern crate alloc;

pub mod error;
pub mod looping;
pub mod processor;
pub mod qlinalg;
pub mod random;
pub mod zoo;

pub use error::{Error, Result};
pub use looping::{
    exact_success, run_loop, CorrectionRule, LoopPolicy, LoopStatus, LoopTrace, RoundRecord,
    RuleFamily,
};
pub use processor::{
    assemble, decompose, program_operator, sample, Branch, BranchDecomposition, Encoding,
    ProcessorDefinition, ProgramBasis, ProgramState,
};
pub use qlinalg::{Ket, Operator, C64};
