//! Verification harness for `qfrac`: seeded parameter sampling, the named
//! identity checks, depth and precision sweeps, and report serialization.

pub mod checks;
pub mod error;
pub mod eval;
pub mod input;
pub mod report;
pub mod sampler;
pub mod sweep;

pub use checks::{run_check, CheckName, CheckSpec, Points};
pub use error::{HarnessError, Result};
pub use input::ParamFile;
pub use report::{Record, Report, Status, Summary};
pub use sampler::{sample_params, Region, RegionKind};
