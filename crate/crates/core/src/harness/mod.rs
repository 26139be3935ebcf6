//! Configuration, artifacts, acceptance criteria and experiment dispatch.

pub mod artifacts;
pub mod config;
pub mod criteria;
pub mod run;

pub use artifacts::{render_csv, render_json, CSV_HEADER, CSV_SCHEMA};
pub use config::{ExperimentConfig, ExperimentKind, Format, GraphKind, Scale};
pub use criteria::{run_criterion, CRITERIA};
pub use run::{execute, exact, run_experiment, simulate, verify_all, with_threads, Outcome};
