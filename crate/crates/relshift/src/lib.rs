//! File formats, the cross-validation suite and the command-line front end
//! for `relshift-core`.

pub mod cli;
pub mod config;
pub mod format;
pub mod harness;
pub mod report;

pub use relshift_core;
