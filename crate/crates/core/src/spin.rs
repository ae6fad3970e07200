// SPDX-License-Identifier: Apache-2.0

//! Single-spin rotations `R_a(θ) = exp(-iθσ_a/2)` and their charge-conditioned
//! embeddings.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, PhaseMatch};
use crate::statespace::{
    embed_spin_operator, ChargeConfig, DeviceOperator, SiteOne, SiteTwo, SpinOperator, SpinSlot,
    SpinTarget,
};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn pauli(self) -> CMatrix {
        match self {
            Axis::X => linalg::pauli_x(),
            Axis::Y => linalg::pauli_y(),
            Axis::Z => linalg::pauli_z(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rotation {
    pub axis: Axis,
    /// Radians.
    pub angle: f64,
}

impl Rotation {
    pub fn new(axis: Axis, angle: f64) -> Result<Self> {
        if !angle.is_finite() {
            return Err(Error::InvalidParameter(format!("rotation angle {angle} is not finite")));
        }
        Ok(Rotation { axis, angle })
    }

    /// Rotation by `multiple · π`.
    pub fn pi(axis: Axis, multiple: f64) -> Self {
        Rotation {
            axis,
            angle: multiple * PI,
        }
    }

    pub fn inverse(self) -> Self {
        Rotation {
            axis: self.axis,
            angle: -self.angle,
        }
    }

    pub fn matrix(&self) -> CMatrix {
        let (s, c) = (self.angle / 2.0).sin_cos();
        linalg::identity(2) * C64::from(c) - self.axis.pauli() * C64::new(0.0, s)
    }
}

/// Writes the rotation in the `AXIS:MULTIPLE_OF_PI` grammar.
impl fmt::Display for Rotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}:{}", self.axis, self.angle / PI)
    }
}

/// Parses `AXIS:MULTIPLE_OF_PI`.
///
/// ```text
/// rotation := axis ":" number
/// axis     := "X" | "Y" | "Z"
/// number   := ["-"] digit+ ["." digit+]
/// ```
///
/// The angle is `number · π`, so `Z:1.5` is `R_Z(3π/2)`.
impl FromStr for Rotation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::RotationSyntax(s.to_string());
        let (axis, number) = s.split_once(':').ok_or_else(bad)?;
        let axis = match axis {
            "X" => Axis::X,
            "Y" => Axis::Y,
            "Z" => Axis::Z,
            _ => return Err(bad()),
        };
        let digits = number.strip_prefix('-').unwrap_or(number);
        let (int, frac) = match digits.split_once('.') {
            Some((i, f)) => (i, Some(f)),
            None => (digits, None),
        };
        let all_digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        if !all_digits(int) || !frac.is_none_or(all_digits) {
            return Err(bad());
        }
        let multiple: f64 = number.parse().map_err(|_| bad())?;
        Ok(Rotation::pi(axis, multiple))
    }
}

/// `R_a(θ)` as a 2×2 spin operator.
pub fn rotation_matrix(r: &Rotation) -> SpinOperator {
    SpinOperator::new(r.matrix()).expect("2x2 by construction")
}

/// Dots that can be addressed by a rotation pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dot {
    /// Home dot of cell 1.
    One,
    /// Home dot of cell 2.
    Two,
    A,
    C,
}

impl Dot {
    fn slot(self) -> SpinSlot {
        match self {
            Dot::One | Dot::A => SpinSlot::One,
            Dot::Two | Dot::C => SpinSlot::Two,
        }
    }

    /// Every charge configuration with an electron on this dot.
    pub fn occupied_configs(self) -> Vec<ChargeConfig> {
        ChargeConfig::all()
            .filter(|c| match self {
                Dot::One => c.cell1 == SiteOne::G1,
                Dot::A => c.cell1 == SiteOne::A,
                Dot::Two => c.cell2 == SiteTwo::G2,
                Dot::C => c.cell2 == SiteTwo::C,
            })
            .collect()
    }
}

/// Rotates the spin of whichever electron sits on `dot`, in every charge
/// configuration where that dot is occupied; identity elsewhere.
pub fn conditional_rotation(dot: Dot, r: &Rotation) -> DeviceOperator {
    let target = SpinTarget::within(dot.slot(), dot.occupied_configs());
    embed_spin_operator(&rotation_matrix(r), &target).expect("2x2 on a single slot")
}

/// How a written rotation sequence maps onto a matrix product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProductOrder {
    /// Operator notation: the rightmost rotation acts first.
    #[default]
    RightToLeft,
    /// Time order: the leftmost rotation acts first.
    LeftToRight,
}

/// Matrix product of a written rotation sequence under `order`.
pub fn sequence_matrix(rotations: &[Rotation], order: ProductOrder) -> CMatrix {
    let mut m = linalg::identity(2);
    match order {
        ProductOrder::RightToLeft => {
            for r in rotations {
                m *= r.matrix();
            }
        }
        ProductOrder::LeftToRight => {
            for r in rotations {
                m = r.matrix() * m;
            }
        }
    }
    m
}

/// Checks `lhs ≈ e^{iφ} · (product of rhs)` and returns the comparison with `φ`.
pub fn check_decomposition(
    lhs: &Rotation,
    rhs: &[Rotation],
    order: ProductOrder,
    tol: f64,
) -> Result<PhaseMatch> {
    if rhs.is_empty() {
        return Err(Error::EmptyDecomposition);
    }
    linalg::equal_up_to_global_phase(&lhs.matrix(), &sequence_matrix(rhs, order), tol)
}
