//! Library side of the `k3mirror` command: configuration, report types
//! and the checks that `run-all` dispatches.

pub mod checks;
pub mod config;
pub mod report;

pub use config::{Config, ConfigError, PREC_ENV};
pub use report::{RunReport, Status, VerificationReport};
