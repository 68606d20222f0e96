//! Seeded experiment harness: parameter grids, replicates, checkpointed
//! error curves and their aggregation into mean ± standard error.
//!
//! Every cell draws its randomness from a seed derived from the master seed
//! and the cell's canonical descriptor, so results do not depend on which
//! cells run, in what order, or on how many threads.

pub mod aggregate;
pub mod certify;
pub mod config;
pub mod plan;
pub mod presets;
pub mod run;

pub use aggregate::{aggregate, mean_stderr, AggregateRow};
pub use certify::{certify_ambiguity_bound, CertifyConfig, CertifyReport};
pub use config::{Checkpoints, ExperimentConfig, Grid, ModelKind, SampleCount};
pub use plan::{cell_seed, plan_cells, CellParams, ExperimentCell, ParamColumns};
pub use presets::{preset, DEFAULT_SEED, PRESET_NAMES};
pub use run::{run_cell, run_cells, run_experiment, CellResult, ExperimentOutput, InstanceMeta, Measurement};
