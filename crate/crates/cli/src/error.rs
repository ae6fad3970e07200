// SPDX-License-Identifier: Apache-2.0

use std::fmt;

/// Failure that prevents a report from being produced.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or configuration; exit status 2.
    Usage(String),
    /// The physics itself broke down (e.g. an empty heralded branch); exit
    /// status 1.
    Physics(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Physics(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Physics(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<qdsim_core::Error> for CliError {
    fn from(e: qdsim_core::Error) -> Self {
        match e {
            qdsim_core::Error::VanishingBranch { .. } => CliError::Physics(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}
