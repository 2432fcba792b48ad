//! Scenario runner for frobcrys-core: reads a TOML config, runs one named
//! computation, checks the expectations it declares and emits a JSON report
//! or a CSV dimension table.

pub mod config;
pub mod error;
pub mod report;
pub mod scenarios;
pub mod table;

pub use config::ScenarioName;
pub use error::{CliError, CliResult};
pub use report::Report;
pub use scenarios::{run_config, RunOptions};
