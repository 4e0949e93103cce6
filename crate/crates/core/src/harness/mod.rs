//! Seeded experiments, summary statistics and result files.

mod experiment;
mod field;
mod io;
mod methods;
mod stats;

pub use experiment::{build_guide, run_experiment, run_experiment_on, ExperimentConfig, RunRecord, SharedGuide};
pub use field::{export_energy_field, probe_power, EnergyField, FieldNode, FIELD_MARGIN};
pub use io::{
    field_to_csv, layout_from_csv, layout_to_csv, read_results, results_from_csv, results_to_csv, six_significant,
    trace_to_csv, write_experiment, ResultRow, RESULTS_FILE,
};
pub use methods::{run_method, GuideKind, Method, MethodParams};
pub use stats::{summarize, wilcoxon_exact, wilcoxon_normal, wilcoxon_one_tailed, Summary, EXACT_LIMIT};

#[cfg(test)]
mod tests;
