//! Library side of the experiment harness: runners, config files, output.

pub mod config;
pub mod experiments;
pub mod output;
