//! Continued fractions attached to very-well-poised balanced `10phi9`
//! basic hypergeometric functions.
//!
//! The crate is organised bottom-up:
//!
//! - [`scalar`], [`context`]: complex numbers at a chosen precision and the
//!   base `q` with its tolerance bundle.
//! - [`pochhammer`], [`series`], [`vwp`]: q-shifted factorials, `r+1 phi r`
//!   series, the balanced `10phi9`, complementary pairs and the contiguous
//!   relation.
//! - [`recurrence`]: the three-term recurrence obtained from the contiguous
//!   relation, its two explicit solutions, their limits and the minimal
//!   solution.
//! - [`cfrac`], [`closed_form`]: continued-fraction evaluation and the
//!   closed-form values it is compared against.

pub mod cfrac;
pub mod closed_form;
pub mod context;
pub mod error;
pub mod pochhammer;
pub mod recurrence;
pub mod scalar;
pub mod series;
pub mod vwp;

pub use cfrac::{eval_cf, ConvergentTrace, Method};
pub use closed_form::ReducedParams;
pub use context::QContext;
pub use error::{QError, Result};
pub use recurrence::MassonParams;
pub use scalar::Scalar;
pub use series::{SeriesResult, Termination};
