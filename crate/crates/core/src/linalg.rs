// SPDX-License-Identifier: Apache-2.0

//! Small dense complex linear-algebra helpers shared by the physics modules.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::C64;

pub type CMatrix = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

/// Kronecker product with `a` as the outer (more significant) factor.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Largest entry-wise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `‖U†U − I‖_max`.
pub fn unitarity_error(u: &CMatrix) -> f64 {
    let gram = u.adjoint() * u;
    max_abs_diff(&gram, &identity(u.ncols()))
}

/// `‖P² − P‖_max + ‖P − P†‖_max` for `P = U†U`.
pub fn partial_isometry_error(u: &CMatrix) -> f64 {
    let p = u.adjoint() * u;
    max_abs_diff(&(&p * &p), &p) + max_abs_diff(&p, &p.adjoint())
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_phase(phase: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut p = phase.rem_euclid(TAU);
    if p > PI {
        p -= TAU;
    }
    p
}

/// Distance between two phases on the circle.
pub fn phase_distance(a: f64, b: f64) -> f64 {
    wrap_phase(a - b).abs()
}

/// Outcome of a phase-insensitive comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseMatch {
    pub equal: bool,
    /// `φ` such that `u ≈ e^{iφ} v`, wrapped into `(-π, π]`.
    pub phase: f64,
    /// `‖u − e^{iφ} v‖_max`.
    pub error: f64,
}

/// Tests `u ≈ e^{iφ} v`, extracting `φ` from the largest-modulus entry of `v`.
///
/// Ties between entries of equal modulus go to the first entry in row-major
/// order, so the extracted phase is reproducible.
pub fn equal_up_to_global_phase(u: &CMatrix, v: &CMatrix, tol: f64) -> Result<PhaseMatch> {
    if u.shape() != v.shape() {
        return Err(Error::DimensionMismatch {
            expected: v.len(),
            actual: u.len(),
        });
    }
    let (rows, cols) = v.shape();
    let mut best = (0, 0);
    let mut best_mod = -1.0;
    for r in 0..rows {
        for c in 0..cols {
            let m = v[(r, c)].norm();
            if m > best_mod {
                best_mod = m;
                best = (r, c);
            }
        }
    }
    if best_mod <= 0.0 {
        return Err(Error::ZeroOperator);
    }
    let phase = wrap_phase(u[best].arg() - v[best].arg());
    let rotated = v * C64::from_polar(1.0, phase);
    let error = max_abs_diff(u, &rotated);
    Ok(PhaseMatch {
        equal: error <= tol,
        phase,
        error,
    })
}

/// Phase-insensitive process fidelity `|Tr(T†M)|² / (d · Tr(M†M))`.
///
/// Reduces to `|Tr(T†M)|²/d²` when `M` is unitary and is invariant under
/// rescaling `M`, so heralded (sub-normalized) maps can be scored directly.
pub fn process_fidelity(map: &CMatrix, target: &CMatrix) -> f64 {
    assert_eq!(map.shape(), target.shape(), "shape mismatch in process_fidelity");
    let d = target.nrows() as f64;
    let overlap = (target.adjoint() * map).trace().norm_sqr();
    let weight = map.iter().map(|z| z.norm_sqr()).sum::<f64>();
    if weight == 0.0 {
        return 0.0;
    }
    (overlap / (d * weight)).clamp(0.0, 1.0)
}

/// Exact exponential `exp(-i t (h0 I + hx σx + hy σy + hz σz))` of a 2×2
/// Hermitian generator given by its Pauli components.
pub fn su2_exp(t: f64, h0: f64, hx: f64, hy: f64, hz: f64) -> CMatrix {
    let omega = (hx * hx + hy * hy + hz * hz).sqrt();
    let (c, s) = ((omega * t).cos(), (omega * t).sin());
    let global = C64::from_polar(1.0, -h0 * t);
    if omega == 0.0 {
        return identity(2) * global;
    }
    let (nx, ny, nz) = (hx / omega, hy / omega, hz / omega);
    let m = CMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(c, -s * nz),
            C64::new(-s * ny, -s * nx),
            C64::new(s * ny, -s * nx),
            C64::new(c, s * nz),
        ],
    );
    m * global
}
