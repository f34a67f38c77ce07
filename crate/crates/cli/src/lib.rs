//! File formats, representation conversion and the command-line front end
//! for `splitgiou-core`.

pub mod annotations;
pub mod cli;
pub mod config;
mod synthetic;
