//! Scenario runner for pmconv-core: JSON configs in, trajectory tables and a
//! manifest out.

pub mod config;
pub mod error;
pub mod output;
pub mod runner;

pub use config::{
    builtin_scenario, builtin_scenarios, ScenarioConfig, ScheduleSpec, StatisticSpec,
};
pub use error::CliError;
pub use runner::{manifest_path, run, RunManifest};
