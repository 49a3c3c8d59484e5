//! Experiment harness for the processors in [`qproc_core`]: published tables,
//! parameter sweeps, seeded Monte Carlo trajectories and invariant checks,
//! written as CSV or JSON.
//!
//! Randomness is ChaCha20. Trial `t` of experiment `e` under master seed `s`
//! draws from `ChaCha20Rng::seed_from_u64(s)` with stream `(e << 32) | t`
//! (see [`rng::trial_rng`]), so output bytes depend only on the seed, never
//! on thread count or platform.

pub mod config;
pub mod error;
pub mod experiments;
pub mod records;
pub mod rng;

pub use config::{preset, presets, ExperimentConfig, SweepConfig};
pub use error::{HarnessError, Result};
pub use records::{ReproRow, ResultRow, SampleReport};
