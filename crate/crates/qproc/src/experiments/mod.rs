//! The four experiment drivers behind the CLI subcommands.

pub mod reproduce;
pub mod sample;
pub mod sweep;
pub mod verify;

pub use reproduce::{reproduce, unexplained, TABLES};
pub use sample::{run_sample, Setup};
pub use sweep::sweep;
pub use verify::{run_verify, CheckStatus, VerifyOptions, VerifyReport};
