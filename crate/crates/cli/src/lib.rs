// SPDX-License-Identifier: Apache-2.0

//! Command-line harness for `qdsim_core`: configuration, subcommands and
//! deterministic reports.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;

pub use cli::run;
