//! Metrics, cross-validation, `b0` tuning, experiments and sweeps.
//!
//! ```
//! use termweight::evaluation::{default_b0_grid, run_experiment, ExperimentConfig, GlobalChoice, Protocol};
//! use termweight::synth::{generate, SyntheticSpec};
//!
//! let corpus = generate(&SyntheticSpec { docs_per_class: 40, ..SyntheticSpec::default() }).unwrap();
//! let cfg = ExperimentConfig {
//!     global: GlobalChoice::TunedRe { grid: default_b0_grid() },
//!     protocol: Protocol::CrossValidation { folds: 5 },
//!     ..ExperimentConfig::default()
//! };
//! let record = run_experiment(&corpus, None, &cfg).unwrap();
//! assert_eq!(record.folds.len(), 5);
//! assert!(record.folds.iter().all(|f| f.chosen_b0.is_some()));
//! ```

mod experiment;
mod metrics;
mod pipeline;
pub mod report;

pub use experiment::{
    cross_validate, default_b0_grid, run_experiment, sweep, tune_b0, CvOutcome,
    ExperimentConfig, ExperimentRecord, FoldOutcome, GlobalChoice, MeanMetrics, Protocol,
    SweepAxis, SweepResult, SweepRow, TuneOutcome,
};
pub use metrics::{evaluate, EvalReport, Metric};
pub use pipeline::{FittedPipeline, PipelineSettings};
