// SPDX-License-Identifier: Apache-2.0

//! State-vector simulator for a CNOT gate on two electron-spin qubits in a
//! six-dot semiconductor array.
//!
//! Each of the two unit cells holds one excess electron whose spin is the
//! qubit. The gate never couples the spins directly: the electrons are split
//! into a four-dot coherent cellular-automaton square, a bias polarization
//! imprints a relative phase between the two diagonal charge configurations,
//! charge-conditioned single-spin rotations act on dots A and C, and the
//! electrons are returned to their home dots. Two final local rotations turn
//! the resulting entangler into CNOT.
//!
//! Modules:
//!
//! * [`statespace`] - the 36-dimensional charge x spin basis, states, operators
//!   and phase-insensitive comparisons.
//! * [`cqca`] - split, bias-phase evolution and recombination of the charge
//!   ancilla.
//! * [`spin`] - rotation algebra and charge-conditioned rotations.
//! * [`raman`] - two-laser Raman synthesis of single-spin rotations and the
//!   three-level validation of the adiabatic elimination.
//! * [`protocol`] - the four-step CNOT sequence, gate reports and the timing
//!   budget.

pub mod cqca;
pub mod error;
pub mod linalg;
pub mod protocol;
pub mod raman;
pub mod spin;
pub mod statespace;

pub use num_complex::Complex64 as C64;

pub use error::{Error, Result};

pub use cqca::{BiasPulse, BiasSegment, PolarizationFrame, RecombineMode, SweepRow};
pub use protocol::{
    BiasSpec, GateReport, ProtocolStep, StepKind, TimingBudget, TimingReport, TruthRow,
};
pub use raman::{Envelope, LambdaOutcome, LambdaState, RamanPulsePair};
pub use spin::{Axis, Dot, ProductOrder, Rotation};
pub use statespace::{
    ChargeConfig, ChargeProjection, DeviceOperator, JointState, OperatorKind, SiteOne, SiteTwo,
    SpinConfig, SpinOperator, SpinState, SpinTarget,
};

/// Tolerance for closed-form operators.
pub const EXACT_TOL: f64 = 1e-12;

/// Default tolerance for quantities produced by numerical integration.
pub const INTEGRATED_TOL: f64 = 1e-9;
