//! Experiment drivers: two-mesh convergence studies, the manufactured
//! optimality system, the constant-exponent Mittag-Leffler check,
//! configuration and CSV reporting.

pub mod commands;
pub mod config;
pub mod convergence;
pub mod manufactured;
pub mod output;
pub mod studies;

pub use commands::{run_example, run_kernels, run_solve_control, run_solve_state, RunOutput};
pub use config::{ExampleId, StudyConfig};
pub use convergence::{
    rates_from_errors, two_mesh_spatial_error, two_mesh_temporal_error, ConvergenceReport, ConvergenceRow, Direction,
    Variable,
};
pub use manufactured::{manufactured_forcing, ManufacturedData, MemoryIntegral, Profile};
pub use studies::{
    control_two_mesh_study, manufactured_case, mittag_leffler_error, mittag_leffler_study, state_two_mesh_study,
    ControlStudy, ManufacturedOutcome,
};
