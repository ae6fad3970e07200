// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("state is not normalized (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("reference operator is identically zero")]
    ZeroOperator,

    #[error("charge branch probability {probability:e} is too small to condition on")]
    VanishingBranch { probability: f64 },

    #[error("bias pulse has no segments")]
    EmptyPulse,

    #[error("invalid pulse: {0}")]
    InvalidPulse(String),

    #[error("detuning must be non-zero")]
    ZeroDetuning,

    #[error("rotation angle must be positive, got {0}")]
    NonPositiveAngle(f64),

    #[error("invalid step sequence: {0}")]
    InvalidSequence(String),

    #[error("invalid rotation `{0}`: expected AXIS:MULTIPLE_OF_PI, e.g. Z:1.5")]
    RotationSyntax(String),

    #[error("decomposition needs at least one rotation on the right-hand side")]
    EmptyDecomposition,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
