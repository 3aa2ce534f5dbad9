//! Experiment configuration, the seeded Monte Carlo runner and its outputs.

mod config;
mod output;
mod run;
pub mod seed;

pub use config::{ExperimentConfig, PilotConfig, PilotMode, SystemConfig};
pub use output::{
    format_coherence_csv, format_csv, metadata_json, parse_csv, read_csv, sidecar_path, write_coherence_csv,
    write_csv, write_report, COHERENCE_HEADER, CSV_HEADER,
};
pub use run::{
    aggregate, effective_snrs, run_coherence_experiment, run_experiment, run_experiment_with_threads, run_trials,
    shared_pattern, CoherenceRow, CurvePoint, ExperimentReport, TrialMetrics, TrialRecord,
    FAILURE_WARNING_FRACTION, MSE_DEFINITION,
};
