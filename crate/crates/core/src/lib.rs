//! Quantum gate entanglers for W and GHZ classes of multipartite states.
//!
//! * [`state`]: pure states, multi-index arithmetic, conjugation.
//! * [`class_ops`]: phase POVM elements and the EPR/GHZ class operators.
//! * [`concurrence`]: class condition functionals and their aggregation.
//! * [`entangler`]: the diagonal-plus-antidiagonal `R` entangler family.
//! * [`braid`]: Yang-Baxter and braid-relation residuals.
//! * [`oracle`]: independent entanglement verification.
//! * [`io`], [`cli`]: file formats, reports and the command-line tool.

pub mod braid;
pub mod class_ops;
pub mod cli;
pub mod concurrence;
pub mod entangler;
mod error;
pub mod io;
pub mod matrix;
pub mod oracle;
pub mod sample;
pub mod state;

pub use error::{Error, Result};
pub use matrix::OperatorMatrix;
pub use num_complex::Complex64;
pub use state::PureState;
