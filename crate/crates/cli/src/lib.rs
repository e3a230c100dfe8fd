//! Experiment runner for the `mtb-dqm` solver.

pub mod commands;
pub mod config;
pub mod error;
pub mod manifest;
