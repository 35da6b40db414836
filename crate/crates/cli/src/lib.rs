//! Experiment runner for the `hyperbargmann` library: configuration,
//! verification suites and output files.
pub mod config;
pub mod criteria;
pub mod emit;
pub mod experiments;
