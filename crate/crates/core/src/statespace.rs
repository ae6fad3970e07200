// SPDX-License-Identifier: Apache-2.0

//! Joint charge x spin Hilbert space of the two-cell device.
//!
//! Cell 1 holds one electron on dot `1`, `A` or `B`; cell 2 holds one electron
//! on dot `2`, `C` or `D`. Tunneling between cells is forbidden, so the charge
//! space is the 9-element product of the two site labels, and each electron
//! carries a spin qubit. Basis states are ordered charge-major, spin-minor:
//!
//! ```text
//! index = 4 * charge_index + 2 * s1 + s2
//! charge_index = 3 * site1 + site2,  site1 ∈ {G1, A, B}, site2 ∈ {G2, C, D}
//! ```
//!
//! which lists the charge pairs as (G1,G2), (G1,C), (G1,D), (A,G2), (A,C),
//! (A,D), (B,G2), (B,C), (B,D). Spin `0` is spin-up, the Zeeman ground state.

use std::fmt;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ZERO};
use crate::{C64, EXACT_TOL};

pub const CHARGE_DIM: usize = 9;
pub const SPIN_DIM: usize = 4;
pub const DEVICE_DIM: usize = CHARGE_DIM * SPIN_DIM;

/// Branch probabilities below this are treated as zero when conditioning.
pub const MIN_BRANCH_PROBABILITY: f64 = 1e-15;

/// Site of the cell-1 electron.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SiteOne {
    /// Home dot `1`.
    G1,
    A,
    B,
}

/// Site of the cell-2 electron.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SiteTwo {
    /// Home dot `2`.
    G2,
    C,
    D,
}

impl SiteOne {
    pub const ALL: [SiteOne; 3] = [SiteOne::G1, SiteOne::A, SiteOne::B];

    fn ordinal(self) -> usize {
        self as usize
    }
}

impl SiteTwo {
    pub const ALL: [SiteTwo; 3] = [SiteTwo::G2, SiteTwo::C, SiteTwo::D];

    fn ordinal(self) -> usize {
        self as usize
    }
}

/// Positions of the two excess electrons, one per cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChargeConfig {
    pub cell1: SiteOne,
    pub cell2: SiteTwo,
}

impl ChargeConfig {
    pub const GROUND: ChargeConfig = ChargeConfig::new(SiteOne::G1, SiteTwo::G2);
    /// Diagonal occupation A-C of the four-dot square.
    pub const AC: ChargeConfig = ChargeConfig::new(SiteOne::A, SiteTwo::C);
    /// Diagonal occupation B-D of the four-dot square.
    pub const BD: ChargeConfig = ChargeConfig::new(SiteOne::B, SiteTwo::D);

    /// Configurations visited by the protocol.
    pub const PROTOCOL: [ChargeConfig; 3] = [Self::GROUND, Self::AC, Self::BD];

    pub const fn new(cell1: SiteOne, cell2: SiteTwo) -> Self {
        ChargeConfig { cell1, cell2 }
    }

    /// All nine configurations in basis order.
    pub fn all() -> impl Iterator<Item = ChargeConfig> {
        SiteOne::ALL
            .into_iter()
            .flat_map(|a| SiteTwo::ALL.into_iter().map(move |b| ChargeConfig::new(a, b)))
    }

    pub fn index(self) -> usize {
        3 * self.cell1.ordinal() + self.cell2.ordinal()
    }

    pub fn from_index(index: usize) -> Option<ChargeConfig> {
        (index < CHARGE_DIM).then(|| {
            ChargeConfig::new(SiteOne::ALL[index / 3], SiteTwo::ALL[index % 3])
        })
    }

    pub fn is_protocol(self) -> bool {
        Self::PROTOCOL.contains(&self)
    }
}

impl fmt::Display for ChargeConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?},{:?})", self.cell1, self.cell2)
    }
}

/// Computational-basis configuration of the two spins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpinConfig {
    pub s1: u8,
    pub s2: u8,
}

impl SpinConfig {
    pub const ALL: [SpinConfig; 4] = [
        SpinConfig { s1: 0, s2: 0 },
        SpinConfig { s1: 0, s2: 1 },
        SpinConfig { s1: 1, s2: 0 },
        SpinConfig { s1: 1, s2: 1 },
    ];

    pub fn new(s1: u8, s2: u8) -> Result<Self> {
        if s1 > 1 || s2 > 1 {
            return Err(Error::InvalidParameter(format!(
                "spin bits must be 0 or 1, got ({s1},{s2})"
            )));
        }
        Ok(SpinConfig { s1, s2 })
    }

    pub fn index(self) -> usize {
        2 * self.s1 as usize + self.s2 as usize
    }

    pub fn from_index(index: usize) -> Option<SpinConfig> {
        Self::ALL.get(index).copied()
    }
}

impl fmt::Display for SpinConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.s1, self.s2)
    }
}

/// Position of `(charge, spin)` in the 36-dimensional basis.
pub fn basis_index(charge: ChargeConfig, spin: SpinConfig) -> usize {
    SPIN_DIM * charge.index() + spin.index()
}

/// Inverse of [`basis_index`].
pub fn basis_label(index: usize) -> Option<(ChargeConfig, SpinConfig)> {
    (index < DEVICE_DIM).then(|| {
        (
            ChargeConfig::from_index(index / SPIN_DIM).unwrap(),
            SpinConfig::from_index(index % SPIN_DIM).unwrap(),
        )
    })
}

/// Pure state of the two spins, amplitudes indexed by [`SpinConfig::index`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinState(pub [C64; SPIN_DIM]);

impl SpinState {
    pub fn basis(config: SpinConfig) -> Self {
        let mut amps = [ZERO; SPIN_DIM];
        amps[config.index()] = C64::new(1.0, 0.0);
        SpinState(amps)
    }

    /// Validates normalization to `tol` in squared norm.
    pub fn new(amps: [C64; SPIN_DIM], tol: f64) -> Result<Self> {
        let s = SpinState(amps);
        let n = s.norm_sqr();
        if (n - 1.0).abs() > tol {
            return Err(Error::NotNormalized { norm_sqr: n });
        }
        Ok(s)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn to_vector(&self) -> DVector<C64> {
        DVector::from_column_slice(&self.0)
    }

    pub fn as_matrix(&self) -> CMatrix {
        CMatrix::from_column_slice(SPIN_DIM, 1, &self.0)
    }
}

/// Amplitudes over the 36 charge x spin basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    amplitudes: DVector<C64>,
    subnormalized: bool,
}

impl JointState {
    /// Builds a physical (normalized) state.
    pub fn new(amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != DEVICE_DIM {
            return Err(Error::DimensionMismatch {
                expected: DEVICE_DIM,
                actual: amplitudes.len(),
            });
        }
        let n = amplitudes.norm_squared();
        if (n - 1.0).abs() > EXACT_TOL {
            return Err(Error::NotNormalized { norm_sqr: n });
        }
        Ok(JointState {
            amplitudes,
            subnormalized: false,
        })
    }

    /// `|charge⟩ ⊗ |spin⟩`.
    pub fn product(charge: ChargeConfig, spin: &SpinState) -> Self {
        let mut amplitudes = DVector::from_element(DEVICE_DIM, ZERO);
        for (s, amp) in spin.0.iter().enumerate() {
            amplitudes[SPIN_DIM * charge.index() + s] = *amp;
        }
        let subnormalized = (spin.norm_sqr() - 1.0).abs() > EXACT_TOL;
        JointState {
            amplitudes,
            subnormalized,
        }
    }

    /// `|config⟩` as a single basis vector.
    pub fn basis(charge: ChargeConfig, spin: SpinConfig) -> Self {
        Self::product(charge, &SpinState::basis(spin))
    }

    pub(crate) fn from_raw(amplitudes: DVector<C64>) -> Self {
        let subnormalized = (amplitudes.norm_squared() - 1.0).abs() > EXACT_TOL;
        JointState {
            amplitudes,
            subnormalized,
        }
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, charge: ChargeConfig, spin: SpinConfig) -> C64 {
        self.amplitudes[basis_index(charge, spin)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    /// True for the output of a projection that has not been renormalized.
    pub fn is_subnormalized(&self) -> bool {
        self.subnormalized
    }

    pub fn renormalized(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n < MIN_BRANCH_PROBABILITY {
            return Err(Error::VanishingBranch { probability: n });
        }
        Ok(JointState {
            amplitudes: &self.amplitudes / C64::from(n.sqrt()),
            subnormalized: false,
        })
    }

    /// Probability of finding the electrons in `charge`.
    pub fn charge_probability(&self, charge: ChargeConfig) -> f64 {
        let start = SPIN_DIM * charge.index();
        (start..start + SPIN_DIM)
            .map(|i| self.amplitudes[i].norm_sqr())
            .sum()
    }

    /// Total probability outside `{(G1,G2), (A,C), (B,D)}`.
    pub fn leakage(&self) -> f64 {
        ChargeConfig::all()
            .filter(|c| !c.is_protocol())
            .map(|c| self.charge_probability(c))
            .sum()
    }

    pub fn spin_block(&self, charge: ChargeConfig) -> [C64; SPIN_DIM] {
        let start = SPIN_DIM * charge.index();
        std::array::from_fn(|s| self.amplitudes[start + s])
    }
}

/// Structural tag of a [`DeviceOperator`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorKind {
    Unitary,
    PartialIsometry,
    General,
}

/// Linear map on the 36-dimensional device space.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviceOperator {
    matrix: CMatrix,
    kind: OperatorKind,
}

impl DeviceOperator {
    /// Wraps `matrix`, checking the invariant implied by `kind` to `tol`.
    pub fn new(matrix: CMatrix, kind: OperatorKind, tol: f64) -> Result<Self> {
        if matrix.shape() != (DEVICE_DIM, DEVICE_DIM) {
            return Err(Error::DimensionMismatch {
                expected: DEVICE_DIM * DEVICE_DIM,
                actual: matrix.len(),
            });
        }
        let err = match kind {
            OperatorKind::Unitary => linalg::unitarity_error(&matrix),
            OperatorKind::PartialIsometry => linalg::partial_isometry_error(&matrix),
            OperatorKind::General => 0.0,
        };
        if err > tol {
            return Err(Error::InvalidParameter(format!(
                "operator tagged {kind:?} violates its invariant by {err:e}"
            )));
        }
        Ok(DeviceOperator { matrix, kind })
    }

    pub(crate) fn from_parts(matrix: CMatrix, kind: OperatorKind) -> Self {
        debug_assert_eq!(matrix.shape(), (DEVICE_DIM, DEVICE_DIM));
        DeviceOperator { matrix, kind }
    }

    pub fn identity() -> Self {
        Self::from_parts(linalg::identity(DEVICE_DIM), OperatorKind::Unitary)
    }

    /// Diagonal operator multiplying every spin state of `charge` by `phases[charge]`.
    pub(crate) fn charge_diagonal(phases: impl Fn(ChargeConfig) -> C64) -> Self {
        let mut m = CMatrix::zeros(DEVICE_DIM, DEVICE_DIM);
        for c in ChargeConfig::all() {
            let p = phases(c);
            for s in 0..SPIN_DIM {
                let i = SPIN_DIM * c.index() + s;
                m[(i, i)] = p;
            }
        }
        let kind = if m.diagonal().iter().all(|z| (z.norm() - 1.0).abs() <= EXACT_TOL) {
            OperatorKind::Unitary
        } else {
            OperatorKind::General
        };
        Self::from_parts(m, kind)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn adjoint(&self) -> Self {
        Self::from_parts(self.matrix.adjoint(), self.kind)
    }

    /// Operator for "apply `self`, then `next`".
    pub fn then(&self, next: &DeviceOperator) -> DeviceOperator {
        use OperatorKind::*;
        let kind = match (self.kind, next.kind) {
            (Unitary, Unitary) => Unitary,
            (Unitary, PartialIsometry) | (PartialIsometry, Unitary) => PartialIsometry,
            _ => General,
        };
        Self::from_parts(&next.matrix * &self.matrix, kind)
    }

    pub fn apply(&self, state: &JointState) -> JointState {
        JointState::from_raw(&self.matrix * state.amplitudes())
    }

    /// 4×4 block mapping spins in charge `from` to spins in charge `to`.
    pub fn spin_block(&self, to: ChargeConfig, from: ChargeConfig) -> CMatrix {
        self.matrix
            .view((SPIN_DIM * to.index(), SPIN_DIM * from.index()), (SPIN_DIM, SPIN_DIM))
            .into_owned()
    }

    pub fn unitarity_error(&self) -> f64 {
        linalg::unitarity_error(&self.matrix)
    }
}

/// 2×2 (one spin) or 4×4 (both spins) operator on spin space only.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOperator {
    matrix: CMatrix,
}

impl SpinOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        match matrix.shape() {
            (2, 2) | (4, 4) => Ok(SpinOperator { matrix }),
            (r, _) => Err(Error::DimensionMismatch {
                expected: 2,
                actual: r,
            }),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        linalg::unitarity_error(&self.matrix) <= tol
    }
}

/// Which spin factor an embedded operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinSlot {
    One,
    Two,
    Both,
}

/// Target of [`embed_spin_operator`]: spin factor(s) plus an optional set of
/// charge branches (all nine when `None`).
#[derive(Debug, Clone, PartialEq)]
pub struct SpinTarget {
    pub slot: SpinSlot,
    pub branches: Option<Vec<ChargeConfig>>,
}

impl SpinTarget {
    pub fn everywhere(slot: SpinSlot) -> Self {
        SpinTarget {
            slot,
            branches: None,
        }
    }

    pub fn within(slot: SpinSlot, branches: impl IntoIterator<Item = ChargeConfig>) -> Self {
        SpinTarget {
            slot,
            branches: Some(branches.into_iter().collect()),
        }
    }

    fn covers(&self, charge: ChargeConfig) -> bool {
        self.branches
            .as_ref()
            .is_none_or(|set| set.contains(&charge))
    }
}

/// Lifts a spin operator to the device space, acting within the listed
/// charge branches and as the identity on every other branch.
pub fn embed_spin_operator(op: &SpinOperator, target: &SpinTarget) -> Result<DeviceOperator> {
    let id2 = linalg::identity(2);
    let block = match (target.slot, op.dim()) {
        (SpinSlot::One, 2) => linalg::kron(op.matrix(), &id2),
        (SpinSlot::Two, 2) => linalg::kron(&id2, op.matrix()),
        (SpinSlot::Both, 4) => op.matrix().clone(),
        (SpinSlot::Both, d) => {
            return Err(Error::DimensionMismatch {
                expected: 4,
                actual: d,
            })
        }
        (_, d) => {
            return Err(Error::DimensionMismatch {
                expected: 2,
                actual: d,
            })
        }
    };
    let mut m = linalg::identity(DEVICE_DIM);
    for c in ChargeConfig::all().filter(|c| target.covers(*c)) {
        let o = SPIN_DIM * c.index();
        m.view_mut((o, o), (SPIN_DIM, SPIN_DIM)).copy_from(&block);
    }
    let kind = if op.is_unitary(EXACT_TOL) {
        OperatorKind::Unitary
    } else {
        OperatorKind::General
    };
    Ok(DeviceOperator::from_parts(m, kind))
}

/// `|⟨a|b⟩|²` for normalized states.
pub fn fidelity(a: &JointState, b: &JointState) -> Result<f64> {
    for s in [a, b] {
        let n = s.norm_sqr();
        if (n - 1.0).abs() > EXACT_TOL {
            return Err(Error::NotNormalized { norm_sqr: n });
        }
    }
    Ok(a.amplitudes().dotc(b.amplitudes()).norm_sqr().min(1.0))
}

/// Result of conditioning a joint state on one charge configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeProjection {
    pub probability: f64,
    /// Renormalized spin state; `None` when the branch is (numerically) empty.
    pub conditional: Option<SpinState>,
}

impl ChargeProjection {
    pub fn conditional(&self) -> Result<&SpinState> {
        self.conditional.as_ref().ok_or(Error::VanishingBranch {
            probability: self.probability,
        })
    }
}

pub fn project_charge(state: &JointState, config: ChargeConfig) -> ChargeProjection {
    let block = state.spin_block(config);
    let probability: f64 = block.iter().map(|z| z.norm_sqr()).sum();
    let conditional = (probability >= MIN_BRANCH_PROBABILITY).then(|| {
        let scale = probability.sqrt();
        SpinState(block.map(|z| z / scale))
    });
    ChargeProjection {
        probability,
        conditional,
    }
}
