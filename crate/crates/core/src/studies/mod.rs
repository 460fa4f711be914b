//! Drivers for the verification and demonstration problems.

mod block;
mod family;
mod manufactured;
mod strip;

pub use block::{deformed_csv, solve_block, BlockReport, BlockSettings, BLOCK_POINT};
pub use family::{check_refinements, MeshFamily};
pub use manufactured::{
    alpha_comparison, alpha_comparison_csv, convergence_table, solve_manufactured, AlphaComparisonRow,
    ManufacturedErrors, ManufacturedSettings, ALPHA_COMPARISON_CSV_HEADER,
};
pub use strip::{solve_strip, StripReport, StripSettings};
