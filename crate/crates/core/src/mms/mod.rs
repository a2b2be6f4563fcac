//! Manufactured solutions and the measurements built on them: interpolants,
//! broken-norm errors, supercloseness, face jumps of the mean curl,
//! consistency residuals, discrete divergence and convergence tables.

mod convergence;
mod diagnostics;
mod exact;
pub mod expr;
mod interpolate;
mod norms;

pub use convergence::{
    convergence_study, rate, solve_level, ConvergenceRow, ConvergenceTable, Diagnostics, LevelOptions, LevelReport,
    SolvedLevel,
};
pub use diagnostics::{
    consistency_residual, consistency_residual_at, divergence_test, face_jump_report, p2_gradient_probes,
    superclose_distance, ConsistencyReport, DivergenceReport, FaceJumpReport,
};
pub use exact::{ExactSolution, LoadForm};
pub use interpolate::{
    average_local_dofs, averaged_interpolant, interpolate, local_raw, localize, nedelec_local_dofs, Interpolant,
    LocalDofs,
};
pub use norms::{broken_norms, curl_h1_norm, discrete_difference, exact_norms, NormReport, ERROR_DEGREE};
