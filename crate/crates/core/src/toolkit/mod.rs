//! Generators, file formats, reports and sweeps.

pub mod format;
pub mod generate;
pub mod report;
pub mod rng;
pub mod sweep;
