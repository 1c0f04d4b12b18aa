//! Training, evaluation, gradient checking and experiment grids.

pub mod adam;
pub mod config;
pub mod eval;
pub mod gradcheck;
pub mod grid;
pub mod model;
pub mod train;

pub use adam::Adam;
pub use config::{HeadKind, Preset, RunConfig, Seeds};
pub use gradcheck::{gradcheck, GradCheckOptions, GradReport, Scope};
pub use grid::{run_grid, GridLayout, GridReport, GridSpec};
pub use eval::{MetricsReport, PerTag, Tally};
pub use model::{QaModel, Vocabularies};
pub use train::{evaluate, evaluate_choices, train, train_on, Checkpoint, TrainOutcome};
