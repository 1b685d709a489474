//! Experiment drivers: convergence tables, reconstruction studies and
//! benchmark runs, plus CSV emission.

pub mod io;
pub mod runs;
pub mod study;

pub use runs::{
    l1_to_reference, run, run_benchmark, shu_osher_reference, RunOptions, RunOutcome, RunReport, Solution,
    SHU_OSHER_REFERENCE_N,
};
pub use study::{
    convergence_study, epsilon_sweep, error_norms, order, reconstruct_study, weights_trace, ConvergenceRow,
    EpsilonTable, ReconstructRow, WeightRecord,
};
