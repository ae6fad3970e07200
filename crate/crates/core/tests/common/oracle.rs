// SPDX-License-Identifier: Apache-2.0

//! Reference values built from index arithmetic and closed forms only.

use nalgebra::{DMatrix, Matrix3};
use num_complex::Complex64 as C;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

const fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Index of `|cell1, cell2⟩|s1 s2⟩`; cell1 ∈ {G1, A, B}, cell2 ∈ {G2, C, D}.
pub fn idx(cell1: usize, cell2: usize, s1: usize, s2: usize) -> usize {
    4 * (3 * cell1 + cell2) + 2 * s1 + s2
}

pub fn rx(t: f64) -> [[C; 2]; 2] {
    let (s, co) = (t / 2.0).sin_cos();
    [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
}

pub fn ry(t: f64) -> [[C; 2]; 2] {
    let (s, co) = (t / 2.0).sin_cos();
    [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
}

pub fn rz(t: f64) -> [[C; 2]; 2] {
    [[C::from_polar(1.0, -t / 2.0), c(0.0, 0.0)], [c(0.0, 0.0), C::from_polar(1.0, t / 2.0)]]
}

pub fn mat2(m: [[C; 2]; 2]) -> DMatrix<C> {
    DMatrix::from_fn(2, 2, |i, j| m[i][j])
}

/// Steps 1–3 as a 36×36 matrix; `ideal` keeps only the (G1,G2) rows after
/// the adjoint split.
pub fn entangling_stage(area: f64, ideal: bool) -> DMatrix<C> {
    let n = 36;
    let r = c(FRAC_1_SQRT_2, 0.0);
    let mut split = DMatrix::<C>::identity(n, n);
    for s1 in 0..2 {
        for s2 in 0..2 {
            let (g, ac, bd) = (idx(0, 0, s1, s2), idx(1, 1, s1, s2), idx(2, 2, s1, s2));
            split[(g, g)] = c(0.0, 0.0);
            for k in [ac, bd] {
                split[(k, g)] = r;
                split[(g, k)] = r;
            }
            split[(ac, ac)] = c(0.5, 0.0);
            split[(bd, bd)] = c(0.5, 0.0);
            split[(ac, bd)] = c(-0.5, 0.0);
            split[(bd, ac)] = c(-0.5, 0.0);
        }
    }
    let mut bias = DMatrix::<C>::identity(n, n);
    for s1 in 0..2 {
        for s2 in 0..2 {
            bias[(idx(1, 1, s1, s2), idx(1, 1, s1, s2))] = C::from_polar(1.0, -area);
            bias[(idx(2, 2, s1, s2), idx(2, 2, s1, s2))] = C::from_polar(1.0, area);
        }
    }
    let z3 = rz(3.0 * PI);
    let mut on_a = DMatrix::<C>::zeros(n, n);
    let x1 = rx(PI);
    let mut on_c = DMatrix::<C>::zeros(n, n);
    for c1 in 0..3 {
        for c2 in 0..3 {
            for s1 in 0..2 {
                for s2 in 0..2 {
                    for t in 0..2 {
                        let a_el = if c1 == 1 { z3[t][s1] } else if t == s1 { c(1.0, 0.0) } else { c(0.0, 0.0) };
                        on_a[(idx(c1, c2, t, s2), idx(c1, c2, s1, s2))] = a_el;
                        let c_el = if c2 == 1 { x1[t][s2] } else if t == s2 { c(1.0, 0.0) } else { c(0.0, 0.0) };
                        on_c[(idx(c1, c2, s1, t), idx(c1, c2, s1, s2))] = c_el;
                    }
                }
            }
        }
    }
    let mut back = split.adjoint();
    if ideal {
        for row in 0..n {
            if row >= 4 {
                back.row_mut(row).fill(c(0.0, 0.0));
            }
        }
    }
    back * on_c * on_a * bias * split
}

/// (G1,G2) → (G1,G2) block of a 36×36 operator.
pub fn home_block(m: &DMatrix<C>) -> DMatrix<C> {
    m.view((0, 0), (4, 4)).into_owned()
}

/// `(I − i σz⊗σx)/√2`.
pub fn entangler() -> DMatrix<C> {
    let h = FRAC_1_SQRT_2;
    let z = c(0.0, 0.0);
    DMatrix::from_row_slice(
        4,
        4,
        &[
            c(h, 0.0), c(0.0, -h), z, z,
            c(0.0, -h), c(h, 0.0), z, z,
            z, z, c(h, 0.0), c(0.0, h),
            z, z, c(0.0, h), c(h, 0.0),
        ],
    )
}

/// Post-recombination spin states for inputs 00, 01, 10, 11, as written
/// (global phase e^{iπ/4} dropped).
pub fn intermediate_states() -> [[C; 4]; 4] {
    let h = FRAC_1_SQRT_2;
    let z = c(0.0, 0.0);
    [
        [c(h, 0.0), c(0.0, -h), z, z],
        [c(0.0, -h), c(h, 0.0), z, z],
        [z, z, c(h, 0.0), c(0.0, h)],
        [z, z, c(0.0, h), c(h, 0.0)],
    ]
}

/// CNOT image of each basis input, control on spin 1.
pub const CNOT_TABLE: [(usize, usize); 4] = [(0, 0), (1, 1), (2, 3), (3, 2)];

/// Entangler fidelity at bias ratio `r` from the two-level Rabi formula.
///
/// On (AC, BD) the polarization evolves under `H = σz + σx/r` for `t = π/4`
/// from `(1, 1)/√2`; the heralded spin map is `(α σz⊗σx + β I)/√2`, which has
/// fidelity `|β + iα|²/2` against the entangler.
pub fn sweep_fidelity(r: f64) -> f64 {
    let (b, g, t) = (1.0, 1.0 / r, PI / 4.0);
    let w = (b * b + g * g).sqrt();
    let (s, co) = (w * t).sin_cos();
    let u00 = c(co, -s * b / w);
    let u11 = c(co, s * b / w);
    let u01 = c(0.0, -s * g / w);
    let alpha = (u00 + u01) * FRAC_1_SQRT_2;
    let beta = (u01 + u11) * FRAC_1_SQRT_2;
    (beta + c(0.0, 1.0) * alpha).norm_sqr() / 2.0
}

/// `exp(A)` by Taylor series with scaling and squaring.
pub fn expm3(a: &Matrix3<C>) -> Matrix3<C> {
    let norm: f64 = a.iter().map(|z| z.norm()).sum();
    let mut squarings = 0;
    let mut scaled = *a;
    let mut n = norm;
    while n > 0.25 {
        scaled /= c(2.0, 0.0);
        n /= 2.0;
        squarings += 1;
    }
    let mut term = Matrix3::<C>::identity();
    let mut sum = Matrix3::<C>::identity();
    for k in 1..=30 {
        term = term * scaled / c(k as f64, 0.0);
        sum += term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

/// Infidelity of the renormalized qubit block of the Λ system against R_X(π)
/// for a square pulse with `Ω̄ = 1`, `Ω₁ = Ω₂ = √Δ`, `T = π/2`.
pub fn lambda_infidelity_x_pi(delta: f64) -> f64 {
    let om = c(delta.sqrt(), 0.0);
    let z = c(0.0, 0.0);
    let h = Matrix3::new(z, z, om, z, z, om, om, om, c(-delta, 0.0));
    let u = expm3(&(h * c(0.0, -PI / 2.0)));
    let target = rx(PI);
    let mut overlap = c(0.0, 0.0);
    let mut weight = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            overlap += target[i][j].conj() * u[(i, j)];
            weight += u[(i, j)].norm_sqr();
        }
    }
    1.0 - overlap.norm_sqr() / (2.0 * weight)
}

/// Sweep fidelities at ratios 10, 30, 100, 300, 1000 (independent dense
/// exponentials).
pub const FROZEN_SWEEP: [(f64, f64); 5] = [
    (10.0, 0.9975033267064082),
    (30.0, 0.9997222633150215),
    (100.0, 0.9999750003328722),
    (300.0, 0.9999972222263315),
    (1000.0, 0.999999750000033),
];

/// Λ-system infidelities against R_X(π) at Δ/Ω̄ = 20, 50, 100, 200
/// (independent dense exponentials).
pub const FROZEN_LAMBDA: [(f64, f64); 4] = [
    (20.0, 0.012547372206829555),
    (50.0, 0.005249714861509158),
    (100.0, 0.0008454519222301782),
    (200.0, 0.00022806953255083418),
];
