// SPDX-License-Identifier: Apache-2.0

//! Randomized invariants shared by the `invariants` and `acceptance` targets.

#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use qdsim_core::cqca::{
    bias_evolve, bias_phase_ideal, polarization_propagator, recombine_operator, split_operator,
    BiasPulse, BiasSegment, RecombineMode,
};
use qdsim_core::linalg::{
    self, equal_up_to_global_phase, kron, max_abs_diff, partial_isometry_error, CMatrix,
};
use qdsim_core::protocol::{cnot_sequence, execute, BiasSpec, TimingBudget};
use qdsim_core::raman::{requested_rotation, simulate_effective, synthesize};
use qdsim_core::spin::{conditional_rotation, sequence_matrix, Axis, Dot, ProductOrder, Rotation};
use qdsim_core::statespace::{
    basis_index, basis_label, fidelity, project_charge, ChargeConfig, JointState, SpinConfig,
    SpinState,
};
use qdsim_core::C64;

pub const CASES: u32 = 1000;
const TOL: f64 = 1e-12;

pub fn runner() -> TestRunner {
    let config = Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

pub fn axis() -> impl Strategy<Value = Axis> {
    prop::sample::select(Axis::ALL.to_vec())
}

pub fn rotation() -> impl Strategy<Value = Rotation> {
    (axis(), -20.0..20.0f64).prop_map(|(axis, angle)| Rotation { axis, angle })
}

fn normalized(raw: &[f64]) -> Option<Vec<C64>> {
    let amps: Vec<C64> = raw.chunks(2).map(|p| C64::new(p[0], p[1])).collect();
    let n = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    (n > 1e-3).then(|| amps.into_iter().map(|z| z / n).collect())
}

pub fn spin_state() -> impl Strategy<Value = SpinState> {
    prop::collection::vec(-1.0..1.0f64, 8).prop_filter_map("zero vector", |raw| {
        let v = normalized(&raw)?;
        Some(SpinState([v[0], v[1], v[2], v[3]]))
    })
}

pub fn joint_state() -> impl Strategy<Value = JointState> {
    prop::collection::vec(-1.0..1.0f64, 72).prop_filter_map("zero vector", |raw| {
        let v = normalized(&raw)?;
        JointState::new(nalgebra::DVector::from_vec(v)).ok()
    })
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

pub type Property = (&'static str, fn(&mut TestRunner) -> Result<(), String>);

pub const PROPERTIES: &[Property] = &[
    ("basis index is a bijection", basis_bijection),
    ("operators are unitary or partial isometries", unitarity),
    ("norm accounting through the gate", norm_accounting),
    ("spinor double cover", double_cover),
    ("product orderings are mirror images", ordering_equivalence),
    ("state fidelity is symmetric and bounded", fidelity_symmetry),
    ("charge projections sum to the norm", projection_sum),
    ("bias evolution is segmentation independent", segmentation_independence),
    ("process fidelity ignores global phase", process_fidelity_phase),
    ("effective Raman pulse realizes R_X", raman_effective_x),
];

fn basis_bijection(r: &mut TestRunner) -> Result<(), String> {
    let mut seen = [false; 36];
    for c in 0..9 {
        for s in 0..4 {
            let i = basis_index(
                ChargeConfig::from_index(c).unwrap(),
                SpinConfig::from_index(s).unwrap(),
            );
            if i >= 36 || seen[i] {
                return Err(format!("index {i} out of range or repeated"));
            }
            seen[i] = true;
        }
    }
    r.run(&(0..9usize, 0..4usize), |(c, s)| {
        let (charge, spin) = (ChargeConfig::from_index(c).unwrap(), SpinConfig::from_index(s).unwrap());
        let i = basis_index(charge, spin);
        check(i == 4 * c + s, || format!("index {i} for ({c},{s})"))?;
        check(basis_label(i) == Some((charge, spin)), || format!("label of {i}"))
    })
    .map_err(|e| e.to_string())
}

fn unitarity(r: &mut TestRunner) -> Result<(), String> {
    let dots = prop::sample::select(vec![Dot::One, Dot::Two, Dot::A, Dot::C]);
    let strat = (rotation(), dots, -10.0..10.0f64, 0.01..5.0f64, -3.0..3.0f64, 0.0..2.0f64);
    r.run(&strat, |(rot, dot, area, dur, bias, gamma)| {
        let pulse = BiasPulse::new(vec![BiasSegment { duration: dur, bias_energy: bias }], gamma)
            .unwrap();
        for (name, op) in [
            ("rotation", conditional_rotation(dot, &rot)),
            ("ideal bias", bias_phase_ideal(area)),
            ("bias pulse", bias_evolve(&pulse).unwrap()),
            ("split", split_operator()),
            ("unitary recombine", recombine_operator(RecombineMode::Unitary)),
        ] {
            let err = op.unitarity_error();
            check(err <= TOL, || format!("{name}: unitarity error {err:e}"))?;
        }
        let err = partial_isometry_error(recombine_operator(RecombineMode::Ideal).matrix());
        check(err <= TOL, || format!("ideal recombine: {err:e}"))
    })
    .map_err(|e| e.to_string())
}

fn norm_accounting(r: &mut TestRunner) -> Result<(), String> {
    let budget = TimingBudget::default();
    let ideal = cnot_sequence(RecombineMode::Ideal, BiasSpec::default(), &budget);
    let heralded = cnot_sequence(RecombineMode::Unitary, BiasSpec::default(), &budget);
    r.run(&spin_state(), |s| {
        let h = execute(&heralded, &s).unwrap();
        let total = h.success_probability + h.outside_probability;
        check((total - 1.0).abs() <= TOL, || format!("heralded total {total}"))?;
        check((h.success_probability - 0.5).abs() <= TOL, || {
            format!("heralded success {}", h.success_probability)
        })?;
        let i = execute(&ideal, &s).unwrap();
        check((i.success_probability - 1.0).abs() <= TOL, || {
            format!("ideal success {}", i.success_probability)
        })?;
        check((i.discarded_probability - 0.5).abs() <= TOL, || {
            format!("ideal discarded {}", i.discarded_probability)
        })?;
        check((i.output_spin.norm_sqr() - 1.0).abs() <= TOL, || "output norm".into())
    })
    .map_err(|e| e.to_string())
}

fn double_cover(r: &mut TestRunner) -> Result<(), String> {
    r.run(&rotation(), |rot| {
        let m = rot.matrix();
        let m2 = Rotation { angle: rot.angle + 2.0 * std::f64::consts::PI, ..rot }.matrix();
        let m4 = Rotation { angle: rot.angle + 4.0 * std::f64::consts::PI, ..rot }.matrix();
        let e2 = max_abs_diff(&m2, &(-&m));
        let e4 = max_abs_diff(&m4, &m);
        check(e2 <= TOL && e4 <= TOL, || format!("2π: {e2:e}, 4π: {e4:e}"))
    })
    .map_err(|e| e.to_string())
}

fn ordering_equivalence(r: &mut TestRunner) -> Result<(), String> {
    r.run(&prop::collection::vec(rotation(), 1..6), |rs| {
        let mut rev = rs.clone();
        rev.reverse();
        let e = max_abs_diff(
            &sequence_matrix(&rs, ProductOrder::RightToLeft),
            &sequence_matrix(&rev, ProductOrder::LeftToRight),
        );
        check(e <= TOL, || format!("mismatch {e:e}"))
    })
    .map_err(|e| e.to_string())
}

fn fidelity_symmetry(r: &mut TestRunner) -> Result<(), String> {
    r.run(&(joint_state(), joint_state()), |(a, b)| {
        let ab = fidelity(&a, &b).unwrap();
        let ba = fidelity(&b, &a).unwrap();
        let aa = fidelity(&a, &a).unwrap();
        check((ab - ba).abs() <= TOL, || format!("{ab} vs {ba}"))?;
        check((0.0..=1.0).contains(&ab), || format!("out of range {ab}"))?;
        check((aa - 1.0).abs() <= TOL, || format!("self fidelity {aa}"))
    })
    .map_err(|e| e.to_string())
}

fn projection_sum(r: &mut TestRunner) -> Result<(), String> {
    r.run(&joint_state(), |s| {
        let mut total = 0.0;
        for c in ChargeConfig::all() {
            let p = project_charge(&s, c);
            total += p.probability;
            if let Some(cond) = p.conditional {
                check((cond.norm_sqr() - 1.0).abs() <= TOL, || "conditional norm".into())?;
            }
        }
        check((total - 1.0).abs() <= TOL, || format!("sum {total}"))
    })
    .map_err(|e| e.to_string())
}

fn segmentation_independence(r: &mut TestRunner) -> Result<(), String> {
    let strat = (0.01..5.0f64, -3.0..3.0f64, 0.0..2.0f64, 0.05..0.95f64);
    r.run(&strat, |(dur, bias, gamma, frac)| {
        let whole = BiasPulse::new(vec![BiasSegment { duration: dur, bias_energy: bias }], gamma)
            .unwrap();
        let parts = BiasPulse::new(
            vec![
                BiasSegment { duration: dur * frac, bias_energy: bias },
                BiasSegment { duration: dur * (1.0 - frac), bias_energy: bias },
            ],
            gamma,
        )
        .unwrap();
        let e = max_abs_diff(
            &polarization_propagator(&whole).unwrap(),
            &polarization_propagator(&parts).unwrap(),
        );
        check(e <= TOL, || format!("mismatch {e:e}"))
    })
    .map_err(|e| e.to_string())
}

fn process_fidelity_phase(r: &mut TestRunner) -> Result<(), String> {
    let strat = (rotation(), rotation(), rotation(), rotation(), -10.0..10.0f64);
    r.run(&strat, |(a, b, c, d, phase)| {
        let u: CMatrix = kron(&a.matrix(), &b.matrix());
        let v: CMatrix = kron(&c.matrix(), &d.matrix());
        let phased = &u * C64::from_polar(1.0, phase);
        let f = linalg::process_fidelity(&phased, &u);
        check((f - 1.0).abs() <= TOL, || format!("F = {f}"))?;
        let (uv, vu) = (linalg::process_fidelity(&u, &v), linalg::process_fidelity(&v, &u));
        check((uv - vu).abs() <= TOL, || format!("asymmetric {uv} vs {vu}"))
    })
    .map_err(|e| e.to_string())
}

fn raman_effective_x(r: &mut TestRunner) -> Result<(), String> {
    let strat = (0.01..10.0f64, 0.1..5.0f64, 10.0..1000.0f64, -3i64..3);
    r.run(&strat, |(theta, omega_bar, delta, n)| {
        let p = synthesize(Axis::X, theta, omega_bar, delta, n).unwrap();
        let u = simulate_effective(&p).unwrap();
        let m = equal_up_to_global_phase(u.matrix(), &requested_rotation(Axis::X, theta), 1e-9)
            .unwrap();
        check(m.equal, || format!("error {:e}", m.error))
    })
    .map_err(|e| e.to_string())
}

pub mod oracle;
