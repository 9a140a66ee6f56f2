//! Experiment runner for majority dynamics: config files, parallel trials,
//! result files and the `majsim` command line.

pub mod cli;
pub mod config;
pub mod graph_io;
pub mod llt_report;
pub mod output;
pub mod runner;
pub mod tiny;

pub use cli::run_cli;
pub use config::{parse_config, parse_config_file, render_config, ConfigError, ConfigFile};
pub use output::ResultBundle;
pub use runner::{run_experiment_parallel, workers_from_env};
