//! Power and constraint tradeoffs for impedance-mismatched, force-limited
//! wave energy converters.
//!
//! - [`mismatch`]: Thévenin mismatch theory on the reflection-coefficient disk
//!   (power, voltage and current ratios, optimal contours, Pareto fronts).
//! - [`wec`]: the physical converter, its Thévenin reduction and
//!   nondimensional design groups.
//! - [`describing`]: describing-function treatment of a current limit.
//! - [`simulation`]: nonlinear time-domain reference simulation.
//! - [`validation`]: side-by-side comparison of the two.
//! - [`cli`]: configuration, sweeps and CSV/SVG output behind `wec-satlin`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod describing;
pub mod emit;
pub mod error;
pub mod mismatch;
pub mod simulation;
pub mod validation;
pub mod wec;

pub use error::{Error, Result};
