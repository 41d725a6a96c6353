//! Configuration, sweep orchestration and CSV/SVG emission behind the
//! `wec-satlin` binary.

pub mod commands;
pub mod config;
pub mod svg;

pub use commands::{run, CommandOutput, OutputFile};
pub use config::{Analysis, PlantSpec, RunConfig};
