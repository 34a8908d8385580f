//! Parameter sweeps, figure data and verification reports for the
//! quadratic Liouvillian.

pub mod config;
pub mod error;
pub mod figures;
pub mod output;
pub mod report;
pub mod sweep;

pub use config::{Format, Mode, Overrides, SweepConfig};
pub use error::{CliError, Result};
pub use report::{verify, VerifyReport};
pub use sweep::{run_sweep, Method, ResultRow};
