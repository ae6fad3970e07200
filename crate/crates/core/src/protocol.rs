// SPDX-License-Identifier: Apache-2.0

//! The four-step CNOT sequence.
//!
//! 1. Split the electrons into the diagonal superposition of the square.
//! 2. Bias the square (phase `π/4`), then rotate the spin on dot A by
//!    `R_Z(3π)` and the spin on dot C by `R_X(π)`.
//! 3. Return the electrons to their home dots.
//! 4. Rotate the home-dot spins by `R_Z(3π/2)` and `R_X(3π/2)`.
//!
//! Step durations are bookkeeping only; the dynamics is the composition of
//! the ideal operators. Times are in picoseconds.

use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use crate::cqca::{
    self, bias_evolve, bias_phase_ideal, split_operator, BiasPulse, RecombineMode,
};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, PhaseMatch, ONE, ZERO};
use crate::spin::{conditional_rotation, Axis, Dot, Rotation};
use crate::statespace::{
    project_charge, ChargeConfig, DeviceOperator, JointState, SpinConfig, SpinState, DEVICE_DIM,
    SPIN_DIM,
};
use crate::{C64, EXACT_TOL};

/// How the bias stage is modeled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BiasSpec {
    /// `γ = 0` limit with the given pulse area (radians).
    Ideal { area: f64 },
    /// Time-ordered evolution under a finite-γ pulse.
    Pulse(BiasPulse),
}

impl Default for BiasSpec {
    fn default() -> Self {
        BiasSpec::Ideal { area: FRAC_PI_4 }
    }
}

impl BiasSpec {
    pub fn operator(&self) -> Result<DeviceOperator> {
        match self {
            BiasSpec::Ideal { area } => Ok(bias_phase_ideal(*area)),
            BiasSpec::Pulse(p) => bias_evolve(p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "kebab-case")]
pub enum StepKind {
    Split,
    BiasPhase(BiasSpec),
    /// Rotation on dot A or C, acting only where that dot is occupied.
    ConditionalRotation { dot: Dot, rotation: Rotation },
    Recombine { mode: RecombineMode },
    /// Rotation on the home dot of cell 1 or 2.
    LocalRotation { cell: u8, rotation: Rotation },
}

impl StepKind {
    pub fn label(&self) -> &'static str {
        match self {
            StepKind::Split => "split",
            StepKind::BiasPhase(_) => "bias-phase",
            StepKind::ConditionalRotation { .. } => "conditional-rotation",
            StepKind::Recombine { .. } => "recombine",
            StepKind::LocalRotation { .. } => "local-rotation",
        }
    }

    /// Linear operator of the step. Ideal recombination is returned as its
    /// partial isometry; renormalization happens in [`execute`].
    pub fn operator(&self) -> Result<DeviceOperator> {
        match self {
            StepKind::Split => Ok(split_operator()),
            StepKind::BiasPhase(b) => b.operator(),
            StepKind::ConditionalRotation { dot, rotation } => match dot {
                Dot::A | Dot::C => Ok(conditional_rotation(*dot, rotation)),
                _ => Err(Error::InvalidSequence(format!(
                    "conditional rotations address dot A or C, got {dot:?}"
                ))),
            },
            StepKind::Recombine { mode } => Ok(cqca::recombine_operator(*mode)),
            StepKind::LocalRotation { cell, rotation } => {
                let dot = match cell {
                    1 => Dot::One,
                    2 => Dot::Two,
                    _ => {
                        return Err(Error::InvalidSequence(format!(
                            "local rotations address cell 1 or 2, got {cell}"
                        )))
                    }
                };
                Ok(conditional_rotation(dot, rotation))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolStep {
    #[serde(flatten)]
    pub kind: StepKind,
    /// Physical duration in ps.
    pub duration: f64,
}

/// Timescales of the device, all in ps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimingBudget {
    /// Spin decoherence time (50 µs in GaAs dots).
    pub t2_spin: f64,
    /// One split or recombination (single-electron tunneling).
    pub t_tunnel: f64,
    /// One laser rotation.
    pub t_pulse: f64,
    /// Bias stage when modeled by its ideal area.
    pub t_bias: f64,
    /// Largest acceptable `total_time / t2_spin`.
    pub threshold: f64,
}

impl Default for TimingBudget {
    fn default() -> Self {
        TimingBudget {
            t2_spin: 50.0e6,
            t_tunnel: 100.0,
            t_pulse: 5.0,
            t_bias: 100.0,
            threshold: 1e-3,
        }
    }
}

impl TimingBudget {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("t2_spin", self.t2_spin),
            ("t_tunnel", self.t_tunnel),
            ("t_pulse", self.t_pulse),
            ("t_bias", self.t_bias),
            ("threshold", self.threshold),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be finite and >= 0")));
            }
        }
        if self.t2_spin <= 0.0 {
            return Err(Error::InvalidParameter("t2_spin must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimingReport {
    pub total_time: f64,
    pub ratio_to_t2: f64,
    pub ok: bool,
}

pub fn timing_budget(budget: &TimingBudget, steps: &[ProtocolStep]) -> Result<TimingReport> {
    budget.validate()?;
    let total_time: f64 = steps.iter().map(|s| s.duration).sum();
    let ratio_to_t2 = total_time / budget.t2_spin;
    Ok(TimingReport {
        total_time,
        ratio_to_t2,
        ok: ratio_to_t2 < budget.threshold,
    })
}

/// The seven-operation CNOT sequence with durations from `budget`.
pub fn cnot_sequence(
    mode: RecombineMode,
    bias: BiasSpec,
    budget: &TimingBudget,
) -> Vec<ProtocolStep> {
    let bias_time = match &bias {
        BiasSpec::Ideal { .. } => budget.t_bias,
        BiasSpec::Pulse(p) => p.duration(),
    };
    let step = |kind, duration| ProtocolStep { kind, duration };
    vec![
        step(StepKind::Split, budget.t_tunnel),
        step(StepKind::BiasPhase(bias), bias_time),
        step(
            StepKind::ConditionalRotation {
                dot: Dot::A,
                rotation: Rotation::pi(Axis::Z, 3.0),
            },
            budget.t_pulse,
        ),
        step(
            StepKind::ConditionalRotation {
                dot: Dot::C,
                rotation: Rotation::pi(Axis::X, 1.0),
            },
            budget.t_pulse,
        ),
        step(StepKind::Recombine { mode }, budget.t_tunnel),
        step(
            StepKind::LocalRotation {
                cell: 1,
                rotation: Rotation::pi(Axis::Z, 1.5),
            },
            budget.t_pulse,
        ),
        step(
            StepKind::LocalRotation {
                cell: 2,
                rotation: Rotation::pi(Axis::X, 1.5),
            },
            budget.t_pulse,
        ),
    ]
}

/// Steps up to and including the first recombination.
pub fn through_recombine(steps: &[ProtocolStep]) -> &[ProtocolStep] {
    match steps
        .iter()
        .position(|s| matches!(s.kind, StepKind::Recombine { .. }))
    {
        Some(k) => &steps[..=k],
        None => steps,
    }
}

fn validate_sequence(steps: &[ProtocolStep]) -> Result<()> {
    let mut open_splits = 0usize;
    for (k, s) in steps.iter().enumerate() {
        if !(s.duration.is_finite() && s.duration >= 0.0) {
            return Err(Error::InvalidSequence(format!(
                "step {k}: duration must be finite and >= 0"
            )));
        }
        match s.kind {
            StepKind::Split => open_splits += 1,
            StepKind::Recombine { .. } => {
                if open_splits == 0 {
                    return Err(Error::InvalidSequence(format!(
                        "step {k}: recombine without a preceding split"
                    )));
                }
                open_splits -= 1;
            }
            _ => {}
        }
    }
    Ok(())
}

/// State after one step of [`trace`].
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub step: ProtocolStep,
    pub state: JointState,
    /// Set on recombination steps.
    pub recombination: Option<cqca::Recombined>,
}

/// Runs `steps` on `|G1,G2⟩ ⊗ initial`, recording the state after each step.
pub fn trace(steps: &[ProtocolStep], initial: &SpinState) -> Result<Vec<TraceEntry>> {
    validate_sequence(steps)?;
    check_spin_state(initial)?;
    let mut state = JointState::product(ChargeConfig::GROUND, initial);
    let mut out = Vec::with_capacity(steps.len());
    for step in steps {
        let mut recombination = None;
        state = match &step.kind {
            StepKind::Recombine { mode } => {
                let r = cqca::recombine(&state, *mode)?;
                let s = r.state.clone();
                recombination = Some(r);
                s
            }
            kind => kind.operator()?.apply(&state),
        };
        out.push(TraceEntry {
            step: step.clone(),
            state: state.clone(),
            recombination,
        });
    }
    Ok(out)
}

fn check_spin_state(s: &SpinState) -> Result<()> {
    let n = s.norm_sqr();
    if (n - 1.0).abs() > EXACT_TOL {
        return Err(Error::NotNormalized { norm_sqr: n });
    }
    Ok(())
}

/// Outcome of running the sequence on one input.
#[derive(Debug, Clone, PartialEq)]
pub struct GateReport {
    /// Spin state conditioned on the home configuration at the end.
    pub output_spin: SpinState,
    /// Induced 4×4 spin map, rescaled to unit mean success probability.
    pub spin_map: CMatrix,
    /// Against CNOT.
    pub process_fidelity: f64,
    /// Probability of ending in (G1,G2).
    pub success_probability: f64,
    /// Probability removed by an ideal recombination.
    pub discarded_probability: f64,
    /// Probability outside the protocol charge configurations just before
    /// recombination.
    pub leakage: f64,
    pub total_time: f64,
    /// `φ` with `spin_map ≈ e^{iφ} CNOT`.
    pub global_phase: f64,
    /// Probability outside (G1,G2) at the end.
    pub outside_probability: f64,
}

pub fn execute(steps: &[ProtocolStep], initial: &SpinState) -> Result<GateReport> {
    let entries = trace(steps, initial)?;
    let mut leakage = 0.0;
    let mut discarded = 0.0;
    let mut prev = JointState::product(ChargeConfig::GROUND, initial);
    let mut seen_recombine = false;
    for e in &entries {
        if let Some(r) = &e.recombination {
            if !seen_recombine {
                leakage = prev.leakage();
                seen_recombine = true;
            }
            discarded += r.discarded_probability;
        }
        prev = e.state.clone();
    }
    let final_state = entries
        .last()
        .map(|e| e.state.clone())
        .unwrap_or_else(|| JointState::product(ChargeConfig::GROUND, initial));
    let projection = project_charge(&final_state, ChargeConfig::GROUND);
    let output_spin = *projection.conditional()?;

    let spin_map = normalized_spin_map(steps)?;
    let target = cnot_matrix();
    let phase = linalg::equal_up_to_global_phase(&spin_map, &target, f64::INFINITY)?;
    Ok(GateReport {
        output_spin,
        process_fidelity: linalg::process_fidelity(&spin_map, &target),
        spin_map,
        success_probability: projection.probability,
        discarded_probability: discarded,
        leakage,
        total_time: steps.iter().map(|s| s.duration).sum(),
        global_phase: phase.phase,
        outside_probability: final_state.norm_sqr() - projection.probability,
    })
}

/// Home-to-home spin block of the composed linear operators, columns from the
/// four basis inputs; no renormalization.
pub fn heralded_spin_map(steps: &[ProtocolStep]) -> Result<CMatrix> {
    validate_sequence(steps)?;
    let home = SPIN_DIM * ChargeConfig::GROUND.index();
    let mut columns = CMatrix::zeros(DEVICE_DIM, SPIN_DIM);
    for s in 0..SPIN_DIM {
        columns[(home + s, s)] = ONE;
    }
    for s in steps {
        columns = s.kind.operator()?.matrix() * columns;
    }
    Ok(columns.rows(home, SPIN_DIM).into_owned())
}

/// [`heralded_spin_map`] rescaled so that `Tr(M†M) = 4`.
pub fn normalized_spin_map(steps: &[ProtocolStep]) -> Result<CMatrix> {
    let k = heralded_spin_map(steps)?;
    let mean_success = k.iter().map(|z| z.norm_sqr()).sum::<f64>() / 4.0;
    if mean_success < crate::statespace::MIN_BRANCH_PROBABILITY {
        return Err(Error::VanishingBranch {
            probability: mean_success,
        });
    }
    Ok(k / C64::from(mean_success.sqrt()))
}

pub fn cnot_matrix() -> CMatrix {
    CMatrix::from_row_slice(
        4,
        4,
        &[
            ONE, ZERO, ZERO, ZERO, //
            ZERO, ONE, ZERO, ZERO, //
            ZERO, ZERO, ZERO, ONE, //
            ZERO, ZERO, ONE, ZERO,
        ],
    )
}

/// Phase-insensitive `|Tr(T†M)|² / (d Tr(M†M))`.
pub fn process_fidelity(spin_map: &CMatrix, target: &CMatrix) -> Result<f64> {
    if spin_map.shape() != (4, 4) || target.shape() != (4, 4) {
        return Err(Error::DimensionMismatch {
            expected: 16,
            actual: spin_map.len(),
        });
    }
    Ok(linalg::process_fidelity(spin_map, target))
}

/// Compares steps 1–3 of the default sequence with `exp(−i(π/4) σz⊗σx)`.
pub fn entangler_check(mode: RecombineMode, bias: BiasSpec, tol: f64) -> Result<PhaseMatch> {
    let steps = cnot_sequence(mode, bias, &TimingBudget::default());
    let map = normalized_spin_map(through_recombine(&steps))?;
    linalg::equal_up_to_global_phase(&map, &cqca::entangler_target(), tol)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruthRow {
    pub input: SpinConfig,
    pub expected: SpinConfig,
    /// Heralded output; all zero when the home branch is empty.
    pub output: SpinState,
    /// Probability of ending in (G1,G2).
    pub success_probability: f64,
    /// Phase of the output amplitude on `expected`.
    pub phase: f64,
    /// `max |output − e^{iφ₀} |expected⟩|` with the common phase `φ₀`.
    pub max_error: f64,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruthTable {
    pub rows: Vec<TruthRow>,
    /// Phase of the first row, shared by all rows.
    pub common_phase: f64,
    pub all_match: bool,
}

fn cnot_image(s: SpinConfig) -> SpinConfig {
    SpinConfig {
        s1: s.s1,
        s2: s.s2 ^ s.s1,
    }
}

/// Runs the basis states through `steps` and checks the CNOT images up to one
/// common global phase. An input whose home branch vanishes gives a zero
/// output row instead of an error.
pub fn truth_table(steps: &[ProtocolStep], tol: f64) -> Result<TruthTable> {
    let mut raw = Vec::with_capacity(4);
    for input in SpinConfig::ALL {
        let (output, success) = match execute(steps, &SpinState::basis(input)) {
            Ok(r) => (r.output_spin, r.success_probability),
            Err(Error::VanishingBranch { .. }) => (SpinState([ZERO; 4]), 0.0),
            Err(e) => return Err(e),
        };
        let expected = cnot_image(input);
        let phase = output.0[expected.index()].arg();
        raw.push((input, expected, output, success, phase));
    }
    let common_phase = raw[0].4;
    let reference = C64::from_polar(1.0, common_phase);
    let rows: Vec<TruthRow> = raw
        .into_iter()
        .map(|(input, expected, output, success_probability, phase)| {
            let target = SpinState::basis(expected);
            let max_error = output
                .0
                .iter()
                .zip(target.0.iter())
                .map(|(o, t)| (o - reference * t).norm())
                .fold(0.0, f64::max);
            TruthRow {
                input,
                expected,
                output,
                success_probability,
                phase,
                max_error,
                matches: max_error <= tol && linalg::phase_distance(phase, common_phase) <= tol,
            }
        })
        .collect();
    Ok(TruthTable {
        all_match: rows.iter().all(|r| r.matches),
        rows,
        common_phase,
    })
}
