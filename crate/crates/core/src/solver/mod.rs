//! Global assembly, constraints and the incremental Newton driver.

mod assembly;
mod field;
mod linear;
mod newton;

pub use assembly::{Model, SparsePattern, SystemMatrices};
pub use field::{apply_dirichlet, DisplacementField};
pub use linear::LinearSolver;
pub use newton::{
    incremental_solve, newton_solve, AlphaMode, BodyForce, LoadProgram, NewtonOptions, NewtonOutcome, SolveHistory,
    StepRecord,
};
