//! Std companion to `twoxor-core`: reproducible parallel Monte Carlo, the
//! exhaustive oracle, output records and the command-line front end.

pub mod cli;
pub mod config;
pub mod io;
pub mod montecarlo;
pub mod oracle;
