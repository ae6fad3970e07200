// SPDX-License-Identifier: Apache-2.0

//! Charge dynamics of the four-dot coherent cellular-automaton square.
//!
//! Inside the square the two electrons sit on one of the two diagonals, (A,C)
//! or (B,D). These two full-polarization states form a pseudo-spin with
//! `σz = +1` on (A,C) and `σz = −1` on (B,D). The bias polarization couples as
//! `E₀P_bias σz`, and vertical tunneling `γ` enters as `γσx`.
//!
//! The split sends the home configuration (G1,G2) to `(|A,C⟩ + |B,D⟩)/√2`.
//! It is completed to a unitary on the 3-dimensional span of
//! `{(G1,G2), (A,C), (B,D)}` by swapping `|G1,G2⟩ ↔ |+⟩` and fixing
//! `|−⟩ = (|A,C⟩ − |B,D⟩)/√2`, with identity on the six remaining configs.
//! Under the strict adjoint, amplitude left in `|−⟩` therefore stays in the
//! square instead of returning home.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ONE, ZERO};
use crate::spin::{conditional_rotation, Axis, Dot, Rotation};
use crate::statespace::{
    ChargeConfig, DeviceOperator, JointState, OperatorKind, CHARGE_DIM, MIN_BRANCH_PROBABILITY,
    SPIN_DIM,
};
use crate::C64;

/// The two full-polarization branches and their `σz` eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolarizationFrame {
    pub plus_branch: ChargeConfig,
    pub minus_branch: ChargeConfig,
}

impl PolarizationFrame {
    pub const STANDARD: PolarizationFrame = PolarizationFrame {
        plus_branch: ChargeConfig::AC,
        minus_branch: ChargeConfig::BD,
    };

    pub fn eigenvalue(&self, config: ChargeConfig) -> Option<f64> {
        if config == self.plus_branch {
            Some(1.0)
        } else if config == self.minus_branch {
            Some(-1.0)
        } else {
            None
        }
    }
}

/// One constant piece of the bias schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BiasSegment {
    pub duration: f64,
    /// `E₀ · P_bias` during the segment.
    pub bias_energy: f64,
}

/// Piecewise-constant bias schedule plus the vertical tunneling energy.
///
/// Units: time in ps, energies as angular frequencies in rad/ps (ħ = 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BiasPulse {
    pub segments: Vec<BiasSegment>,
    pub gamma: f64,
}

impl BiasPulse {
    pub fn new(segments: Vec<BiasSegment>, gamma: f64) -> Result<Self> {
        let p = BiasPulse { segments, gamma };
        p.validate()?;
        Ok(p)
    }

    /// Single segment with the given area and ratio `E₀P_bias / γ`.
    ///
    /// For finite positive ratios the bias is 1 and `γ = 1/ratio`; an infinite
    /// ratio means `γ = 0`. A zero ratio switches the bias off and keeps
    /// `γ = 1` for the same duration, i.e. pure tunneling.
    pub fn with_ratio(area: f64, ratio: f64) -> Result<Self> {
        if ratio.is_nan() || ratio < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "bias ratio must be non-negative, got {ratio}"
            )));
        }
        let duration = area.abs().max(f64::MIN_POSITIVE);
        let sign = if area < 0.0 { -1.0 } else { 1.0 };
        let (bias_energy, gamma) = if ratio == 0.0 {
            (0.0, 1.0)
        } else {
            (sign, 1.0 / ratio)
        };
        Self::new(
            vec![BiasSegment {
                duration,
                bias_energy,
            }],
            gamma,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.segments.is_empty() {
            return Err(Error::EmptyPulse);
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(Error::InvalidPulse(format!(
                "gamma must be finite and >= 0, got {}",
                self.gamma
            )));
        }
        for (k, s) in self.segments.iter().enumerate() {
            if !(s.duration.is_finite() && s.duration > 0.0) {
                return Err(Error::InvalidPulse(format!(
                    "segment {k}: duration must be finite and > 0, got {}",
                    s.duration
                )));
            }
            if !s.bias_energy.is_finite() {
                return Err(Error::InvalidPulse(format!(
                    "segment {k}: bias energy must be finite"
                )));
            }
        }
        if !self.area().is_finite() {
            return Err(Error::InvalidPulse("pulse area is not finite".into()));
        }
        Ok(())
    }

    /// `Σ duration · bias_energy`.
    pub fn area(&self) -> f64 {
        self.segments.iter().map(|s| s.duration * s.bias_energy).sum()
    }

    pub fn duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }
}

/// Which reading of the return-to-home step to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecombineMode {
    /// Deterministic collapse onto (G1,G2): adjoint split, projection onto the
    /// home configuration, renormalization.
    #[default]
    Ideal,
    /// Strict adjoint of the split; the home configuration is reached with a
    /// reported (heralded) probability.
    Unitary,
}

impl std::str::FromStr for RecombineMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ideal" => Ok(RecombineMode::Ideal),
            "unitary" => Ok(RecombineMode::Unitary),
            _ => Err(Error::InvalidParameter(format!(
                "recombine mode must be `ideal` or `unitary`, got `{s}`"
            ))),
        }
    }
}

fn lift_charge_operator(charge: &CMatrix, kind: OperatorKind) -> DeviceOperator {
    debug_assert_eq!(charge.shape(), (CHARGE_DIM, CHARGE_DIM));
    DeviceOperator::from_parts(linalg::kron(charge, &linalg::identity(SPIN_DIM)), kind)
}

/// Embeds a 2×2 operator on `(|A,C⟩, |B,D⟩)` into the 9×9 charge space.
fn polarization_to_charge(block: &CMatrix) -> CMatrix {
    let idx = [ChargeConfig::AC.index(), ChargeConfig::BD.index()];
    let mut m = linalg::identity(CHARGE_DIM);
    for (r, &i) in idx.iter().enumerate() {
        for (c, &j) in idx.iter().enumerate() {
            m[(i, j)] = block[(r, c)];
        }
    }
    m
}

/// Unitary split of the home configuration into the diagonal superposition.
pub fn split_operator() -> DeviceOperator {
    lift_charge_operator(&split_charge_matrix(), OperatorKind::Unitary)
}

fn split_charge_matrix() -> CMatrix {
    let g = ChargeConfig::GROUND.index();
    let ac = ChargeConfig::AC.index();
    let bd = ChargeConfig::BD.index();
    let h = C64::from(FRAC_1_SQRT_2);
    let half = C64::from(0.5);

    let mut m = linalg::identity(CHARGE_DIM);
    // |+⟩⟨G| + |G⟩⟨+| + |−⟩⟨−|
    m[(g, g)] = ZERO;
    m[(ac, g)] = h;
    m[(bd, g)] = h;
    m[(g, ac)] = h;
    m[(g, bd)] = h;
    m[(ac, ac)] = half;
    m[(bd, bd)] = half;
    m[(ac, bd)] = -half;
    m[(bd, ac)] = -half;
    m
}

/// `e^{−i·area}` on (A,C), `e^{+i·area}` on (B,D), identity elsewhere.
pub fn bias_phase_ideal(area: f64) -> DeviceOperator {
    let frame = PolarizationFrame::STANDARD;
    DeviceOperator::charge_diagonal(|c| match frame.eigenvalue(c) {
        Some(z) => C64::from_polar(1.0, -z * area),
        None => ONE,
    })
}

/// Time-ordered 2×2 propagator of `H(t) = bias(t)·σz + γ·σx` on
/// `(|A,C⟩, |B,D⟩)`.
pub fn polarization_propagator(pulse: &BiasPulse) -> Result<CMatrix> {
    pulse.validate()?;
    let mut u = linalg::identity(2);
    for s in &pulse.segments {
        u = linalg::su2_exp(s.duration, 0.0, pulse.gamma, 0.0, s.bias_energy) * u;
    }
    Ok(u)
}

/// Bias-pulse evolution on the full device space.
pub fn bias_evolve(pulse: &BiasPulse) -> Result<DeviceOperator> {
    let u = polarization_propagator(pulse)?;
    Ok(lift_charge_operator(
        &polarization_to_charge(&u),
        OperatorKind::Unitary,
    ))
}

/// Return-to-home operator.
///
/// `Unitary` is the adjoint of [`split_operator`]. `Ideal` is the adjoint
/// followed by projection onto (G1,G2), a partial isometry; the
/// renormalization that completes the ideal reading is done by [`recombine`].
pub fn recombine_operator(mode: RecombineMode) -> DeviceOperator {
    let mut back = split_charge_matrix().adjoint();
    match mode {
        RecombineMode::Unitary => lift_charge_operator(&back, OperatorKind::Unitary),
        RecombineMode::Ideal => {
            let g = ChargeConfig::GROUND.index();
            for row in (0..CHARGE_DIM).filter(|&r| r != g) {
                back.row_mut(row).fill(ZERO);
            }
            lift_charge_operator(&back, OperatorKind::PartialIsometry)
        }
    }
}

/// State after the return-to-home step.
#[derive(Debug, Clone, PartialEq)]
pub struct Recombined {
    pub state: JointState,
    /// Probability of the home configuration right after the adjoint split.
    pub ground_probability: f64,
    /// Probability removed by the projection (zero in unitary mode).
    pub discarded_probability: f64,
}

pub fn recombine(state: &JointState, mode: RecombineMode) -> Result<Recombined> {
    let norm_in = state.norm_sqr();
    let out = recombine_operator(mode).apply(state);
    match mode {
        RecombineMode::Unitary => Ok(Recombined {
            ground_probability: out.charge_probability(ChargeConfig::GROUND),
            discarded_probability: 0.0,
            state: out,
        }),
        RecombineMode::Ideal => {
            let p = out.norm_sqr();
            if p < MIN_BRANCH_PROBABILITY {
                return Err(Error::VanishingBranch { probability: p });
            }
            Ok(Recombined {
                ground_probability: p,
                discarded_probability: norm_in - p,
                state: out.renormalized()?,
            })
        }
    }
}

/// Target of steps 1–3: `exp(−i(π/4) σz⊗σx) = (I − i σz⊗σx)/√2`.
pub fn entangler_target() -> CMatrix {
    let zx = linalg::kron(&linalg::pauli_z(), &linalg::pauli_x());
    (linalg::identity(4) - zx * linalg::I) * C64::from(FRAC_1_SQRT_2)
}

/// Operator of steps 1–3 (split, bias, conditional rotations, recombine)
/// with an arbitrary bias stage.
pub fn entangling_stage(bias: &DeviceOperator, mode: RecombineMode) -> DeviceOperator {
    split_operator()
        .then(bias)
        .then(&conditional_rotation(Dot::A, &Rotation::pi(Axis::Z, 3.0)))
        .then(&conditional_rotation(Dot::C, &Rotation::pi(Axis::X, 1.0)))
        .then(&recombine_operator(mode))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub ratio: f64,
    pub fidelity: f64,
}

/// Entangler process fidelity as a function of `E₀P_bias / γ` at fixed area.
///
/// The spin map is the (G1,G2)→(G1,G2) block of steps 1–3; the fidelity is
/// insensitive to its overall scale, so ideal and heralded readings agree.
pub fn bias_ratio_sweep(ratios: &[f64], area: f64) -> Result<Vec<SweepRow>> {
    let target = entangler_target();
    ratios
        .iter()
        .map(|&ratio| {
            let pulse = BiasPulse::with_ratio(area, ratio)?;
            let stage = entangling_stage(&bias_evolve(&pulse)?, RecombineMode::Unitary);
            let map = stage.spin_block(ChargeConfig::GROUND, ChargeConfig::GROUND);
            Ok(SweepRow {
                ratio,
                fidelity: linalg::process_fidelity(&map, &target),
            })
        })
        .collect()
}
