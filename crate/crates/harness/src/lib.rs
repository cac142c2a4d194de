//! Experiment runner behind the `lipdense` command: loads spaces and
//! functions, runs a density check, and persists the trace as CSV, a JSON
//! report and an optional SVG plot.

pub mod error;
pub mod experiment;
pub mod plot;
pub mod source;

pub use error::HarnessError;
pub use experiment::{compute, read_report, run_experiment, trace_csv, ExperimentConfig, ReportBundle, Verdict};
pub use plot::emit_plot;
pub use source::{ConeFunction, LoadedSpace, SpaceSpec};
