//! Data files, reports and the command-line front end for `linecover-core`.

pub mod cli;
pub mod input;
pub mod report;
pub mod svg;
pub mod sweep;
