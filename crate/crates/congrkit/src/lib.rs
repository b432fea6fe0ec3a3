//! Command-line tool, text formats and reports for `congrkit-core`.

pub mod cli;
pub mod commands;
pub mod error;
pub mod formats;
pub mod random;
pub mod report;
pub mod scan;
pub mod selftest;
