// SPDX-License-Identifier: Apache-2.0

//! One function per subcommand. Each returns the report and its CSV table;
//! `pass` in the report drives the exit status.

use std::f64::consts::PI;

use qdsim_core::cqca::bias_ratio_sweep;
use qdsim_core::linalg::{equal_up_to_global_phase, process_fidelity};
use qdsim_core::protocol::{
    cnot_matrix, cnot_sequence, normalized_spin_map, timing_budget, trace, truth_table, BiasSpec,
    ProtocolStep, StepKind,
};
use qdsim_core::raman::{
    requested_rotation, rotation_parameters, simulate_effective, simulate_lambda,
    synthesize_with_freq_diff, LambdaState, RamanPulsePair,
};
use qdsim_core::spin::{check_decomposition, ProductOrder, Rotation};
use qdsim_core::statespace::{basis_label, SpinConfig, SpinState, DEVICE_DIM};
use qdsim_core::{ChargeConfig, C64};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{amplitudes, cell, matrix, Check, Output, Report, Table, TOOL, VERSION};

fn finish(
    command: &'static str,
    arguments: Value,
    config: &RunConfig,
    checks: Vec<Check>,
    result: Value,
    table: Table,
) -> Output {
    Output {
        report: Report {
            tool: TOOL,
            version: VERSION,
            command,
            arguments,
            config: config.clone(),
            pass: checks.iter().all(|c| c.pass),
            checks,
            result,
        },
        table,
    }
}

fn sequence(config: &RunConfig) -> Result<Vec<ProtocolStep>, CliError> {
    Ok(cnot_sequence(
        config.recombine_mode,
        config.bias.spec()?,
        &config.timing,
    ))
}

fn spin_label(s: SpinConfig) -> String {
    s.to_string()
}

pub fn truth_table_cmd(config: &RunConfig) -> Result<Output, CliError> {
    let steps = sequence(config)?;
    let tol = config.tolerances.exact;
    let table = truth_table(&steps, tol)?;
    let map = normalized_spin_map(&steps)?;
    let target = cnot_matrix();
    let phase = equal_up_to_global_phase(&map, &target, tol)?;

    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| {
            json!({
                "input": spin_label(r.input),
                "expected": spin_label(r.expected),
                "output": amplitudes(&r.output.0),
                "success_probability": r.success_probability,
                "phase": r.phase,
                "max_error": r.max_error,
                "matches": r.matches,
            })
        })
        .collect();
    let result = json!({
        "rows": rows,
        "common_phase": table.common_phase,
        "all_match": table.all_match,
        "spin_map": matrix(&map),
        "process_fidelity": process_fidelity(&map, &target),
        "global_phase": phase.phase,
        "map_error": phase.error,
    });

    let mut csv = Table::new(&[
        "input", "expected", "matches", "phase", "max_error", "success_probability",
        "out_00_re", "out_00_im", "out_01_re", "out_01_im", "out_10_re", "out_10_im",
        "out_11_re", "out_11_im",
    ]);
    for r in &table.rows {
        let mut row = vec![
            cell(spin_label(r.input)),
            cell(spin_label(r.expected)),
            cell(r.matches),
            cell(r.phase),
            cell(r.max_error),
            cell(r.success_probability),
        ];
        for z in r.output.0 {
            row.push(cell(z.re));
            row.push(cell(z.im));
        }
        csv.push(row);
    }
    let checks = vec![Check {
        name: "cnot-truth-table",
        pass: table.all_match,
    }];
    Ok(finish("truth-table", json!({}), config, checks, result, csv))
}

/// Input of `trace`: a basis label or eight reals `re0,im0,...,re3,im3`.
pub fn parse_input(input: Option<&str>, amplitudes: Option<&str>) -> Result<SpinState, CliError> {
    if let Some(text) = amplitudes {
        let values: Vec<f64> = text
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::usage(format!("amplitudes: {e}")))?;
        if values.len() != 8 || values.iter().any(|v| !v.is_finite()) {
            return Err(CliError::usage(
                "amplitudes: expected 8 finite reals re0,im0,re1,im1,re2,im2,re3,im3",
            ));
        }
        let amps: Vec<C64> = values.chunks(2).map(|p| C64::new(p[0], p[1])).collect();
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm * norm - 1.0).abs() > qdsim_core::INTEGRATED_TOL {
            return Err(CliError::usage(format!(
                "amplitudes: squared norm is {}, expected 1",
                norm * norm
            )));
        }
        return Ok(SpinState([amps[0] / norm, amps[1] / norm, amps[2] / norm, amps[3] / norm]));
    }
    let label = input.unwrap_or("00");
    let config = match label {
        "00" => SpinConfig::ALL[0],
        "01" => SpinConfig::ALL[1],
        "10" => SpinConfig::ALL[2],
        "11" => SpinConfig::ALL[3],
        _ => {
            return Err(CliError::usage(format!(
                "input must be one of 00, 01, 10, 11, got `{label}`"
            )))
        }
    };
    Ok(SpinState::basis(config))
}

pub fn basis_labels() -> Vec<String> {
    (0..DEVICE_DIM)
        .map(|i| {
            let (c, s) = basis_label(i).expect("index in range");
            format!("{c}|{s}>")
        })
        .collect()
}

pub fn trace_cmd(config: &RunConfig, arguments: Value, initial: &SpinState) -> Result<Output, CliError> {
    let steps = sequence(config)?;
    let entries = trace(&steps, initial)?;
    let labels = basis_labels();
    let tol = config.tolerances.exact;

    let mut norm_ok = true;
    let mut records = Vec::with_capacity(entries.len());
    let mut csv = Table::new(&["step", "label", "basis_index", "basis_label", "re", "im"]);
    for (k, e) in entries.iter().enumerate() {
        let norm = e.state.norm_sqr();
        norm_ok &= (norm - 1.0).abs() <= tol;
        let mut record = json!({
            "index": k + 1,
            "step": e.step.kind.label(),
            "duration": e.step.duration,
            "operation": serde_json::to_value(&e.step.kind).expect("plain data"),
            "norm": norm,
            "home_probability": e.state.charge_probability(ChargeConfig::GROUND),
            "leakage": e.state.leakage(),
            "amplitudes": amplitudes(e.state.amplitudes().iter()),
        });
        if let StepKind::BiasPhase(BiasSpec::Ideal { area }) = &e.step.kind {
            // The state equals e^{i·area}(e^{−2i·area}|A,C⟩ + |B,D⟩)/√2 ⊗ spin.
            record["discarded_phase"] = json!(area);
        }
        if let Some(r) = &e.recombination {
            record["recombined_home_probability"] = json!(r.ground_probability);
            record["discarded_probability"] = json!(r.discarded_probability);
        }
        records.push(record);
        for (i, z) in e.state.amplitudes().iter().enumerate() {
            csv.push(vec![
                cell(k + 1),
                cell(e.step.kind.label()),
                cell(i),
                cell(labels[i].clone()),
                cell(z.re),
                cell(z.im),
            ]);
        }
    }
    let result = json!({
        "basis": labels,
        "input": amplitudes(&initial.0),
        "steps": records,
    });
    let checks = vec![Check {
        name: "norm-preserved",
        pass: norm_ok,
    }];
    Ok(finish("trace", arguments, config, checks, result, csv))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepKind {
    BiasRatio,
    RamanDetuning,
}

impl SweepKind {
    pub fn label(self) -> &'static str {
        match self {
            SweepKind::BiasRatio => "bias-ratio",
            SweepKind::RamanDetuning => "raman-detuning",
        }
    }

    pub fn default_points(self) -> Vec<f64> {
        match self {
            SweepKind::BiasRatio => vec![10.0, 30.0, 100.0, 300.0, 1000.0],
            SweepKind::RamanDetuning => vec![20.0, 50.0, 100.0, 200.0],
        }
    }
}

fn synthesize_from(config: &RunConfig, delta: f64) -> Result<RamanPulsePair, CliError> {
    let r = &config.raman;
    Ok(synthesize_with_freq_diff(
        r.axis,
        r.theta_pi * PI,
        r.omega_bar,
        delta,
        r.n,
        r.freq_diff,
    )?)
}

pub fn sweep_cmd(config: &RunConfig, kind: SweepKind, points: &[f64]) -> Result<Output, CliError> {
    if points.len() < 2 {
        return Err(CliError::usage("a sweep needs at least 2 points"));
    }
    if let Some(p) = points.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
        return Err(CliError::usage(format!("sweep points must be positive, got {p}")));
    }
    let arguments = json!({ "kind": kind.label(), "points": points });
    match kind {
        SweepKind::BiasRatio => {
            let area = config.bias.area()?;
            let rows = bias_ratio_sweep(points, area)?;
            let monotone = rows.windows(2).all(|w| w[1].fidelity >= w[0].fidelity);
            let mut csv = Table::new(&["ratio", "fidelity", "infidelity"]);
            let json_rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    csv.push(vec![cell(r.ratio), cell(r.fidelity), cell(1.0 - r.fidelity)]);
                    json!({ "ratio": r.ratio, "fidelity": r.fidelity, "infidelity": 1.0 - r.fidelity })
                })
                .collect();
            let result = json!({
                "parameter": "bias_ratio",
                "area": area,
                "rows": json_rows,
                "monotone": monotone,
            });
            let checks = vec![Check {
                name: "fidelity-non-decreasing",
                pass: monotone,
            }];
            Ok(finish("sweep", arguments, config, checks, result, csv))
        }
        SweepKind::RamanDetuning => {
            let omega_bar = config.raman.omega_bar;
            let steps = config.raman.steps_per_segment;
            let pulses: Vec<RamanPulsePair> = points
                .iter()
                .map(|&ratio| synthesize_from(config, ratio * omega_bar))
                .collect::<Result<_, _>>()?;
            // Points are independent; results are collected in input order.
            let outcomes: Vec<_> = std::thread::scope(|scope| {
                let handles: Vec<_> = pulses
                    .iter()
                    .map(|p| scope.spawn(move || simulate_lambda(p, &LambdaState::spin_up(), steps)))
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("sweep worker panicked"))
                    .collect()
            });
            let outcomes: Vec<_> = outcomes.into_iter().collect::<Result<_, _>>()?;
            let monotone = outcomes
                .windows(2)
                .all(|w| w[1].infidelity_vs_effective < w[0].infidelity_vs_effective);
            let mut csv = Table::new(&[
                "detuning_ratio",
                "infidelity",
                "final_leakage",
                "max_excited_population",
            ]);
            let json_rows: Vec<Value> = points
                .iter()
                .zip(&outcomes)
                .map(|(&ratio, o)| {
                    csv.push(vec![
                        cell(ratio),
                        cell(o.infidelity_vs_effective),
                        cell(o.final_leakage),
                        cell(o.max_excited_population),
                    ]);
                    json!({
                        "detuning_ratio": ratio,
                        "infidelity": o.infidelity_vs_effective,
                        "final_leakage": o.final_leakage,
                        "max_excited_population": o.max_excited_population,
                    })
                })
                .collect();
            let result = json!({
                "parameter": "detuning_ratio",
                "axis": config.raman.axis,
                "theta": config.raman.theta_pi * PI,
                "steps_per_segment": steps,
                "rows": json_rows,
                "monotone": monotone,
            });
            let checks = vec![Check {
                name: "infidelity-decreasing",
                pass: monotone,
            }];
            Ok(finish("sweep", arguments, config, checks, result, csv))
        }
    }
}

/// Parses `LHS = R1 R2 ...` from whitespace-separated tokens.
pub fn parse_equation(tokens: &[String]) -> Result<(Rotation, Vec<Rotation>), CliError> {
    let text = tokens.join(" ");
    let (lhs, rhs) = text
        .split_once('=')
        .ok_or_else(|| CliError::usage("decomposition must have the form `LHS = R1 R2 ...`"))?;
    let parse = |t: &str| {
        t.parse::<Rotation>()
            .map_err(|e| CliError::usage(e.to_string()))
    };
    let lhs: Vec<&str> = lhs.split_whitespace().collect();
    let [lhs] = lhs.as_slice() else {
        return Err(CliError::usage("exactly one rotation is allowed left of `=`"));
    };
    let rhs: Vec<Rotation> = rhs.split_whitespace().map(parse).collect::<Result<_, _>>()?;
    if rhs.is_empty() {
        return Err(CliError::usage("no rotations right of `=`"));
    }
    Ok((parse(lhs)?, rhs))
}

fn order_label(order: ProductOrder) -> &'static str {
    match order {
        ProductOrder::RightToLeft => "rtl",
        ProductOrder::LeftToRight => "ltr",
    }
}

pub fn decompose_cmd(
    config: &RunConfig,
    tokens: &[String],
    order: ProductOrder,
) -> Result<Output, CliError> {
    let (lhs, rhs) = parse_equation(tokens)?;
    let m = check_decomposition(&lhs, &rhs, order, config.tolerances.exact)?;
    let rhs_text: Vec<String> = rhs.iter().map(|r| r.to_string()).collect();
    let arguments = json!({ "equation": tokens.join(" "), "order": order_label(order) });
    let result = json!({
        "lhs": lhs.to_string(),
        "rhs": rhs_text,
        "order": order_label(order),
        "equal": m.equal,
        "phase": m.phase,
        "error": m.error,
    });
    let mut csv = Table::new(&["lhs", "rhs", "order", "equal", "phase", "error"]);
    csv.push(vec![
        cell(lhs.to_string()),
        cell(rhs_text.join(" ")),
        cell(order_label(order)),
        cell(m.equal),
        cell(m.phase),
        cell(m.error),
    ]);
    let checks = vec![Check {
        name: "decomposition-holds",
        pass: m.equal,
    }];
    Ok(finish("decompose", arguments, config, checks, result, csv))
}

pub fn budget_cmd(config: &RunConfig) -> Result<Output, CliError> {
    let steps = sequence(config)?;
    let t = timing_budget(&config.timing, &steps)?;
    let mut csv = Table::new(&["step", "duration"]);
    let json_steps: Vec<Value> = steps
        .iter()
        .map(|s| {
            csv.push(vec![cell(s.kind.label()), cell(s.duration)]);
            json!({ "step": s.kind.label(), "duration": s.duration })
        })
        .collect();
    csv.push(vec![cell("total"), cell(t.total_time)]);
    let result = json!({
        "steps": json_steps,
        "total_time": t.total_time,
        "t2_spin": config.timing.t2_spin,
        "ratio_to_t2": t.ratio_to_t2,
        "threshold": config.timing.threshold,
        "ok": t.ok,
    });
    let checks = vec![Check {
        name: "within-coherence-budget",
        pass: t.ok,
    }];
    Ok(finish("budget", json!({}), config, checks, result, csv))
}

pub fn raman_cmd(config: &RunConfig) -> Result<Output, CliError> {
    let r = &config.raman;
    let theta = r.theta_pi * PI;
    let pulse = synthesize_from(config, r.delta)?;
    let effective = simulate_effective(&pulse)?;
    let requested = requested_rotation(r.axis, theta);
    let matched = equal_up_to_global_phase(effective.matrix(), &requested, config.tolerances.integrated)?;
    let realized = rotation_parameters(effective.matrix());

    let up = simulate_lambda(&pulse, &LambdaState::spin_up(), r.steps_per_segment)?;
    let norm_error = (up.final_state.norm_sqr() - 1.0).abs();

    let segments: Vec<Value> = pulse
        .segments
        .iter()
        .map(|s| json!({ "duration": s.duration, "omega1": s.omega1, "omega2": s.omega2 }))
        .collect();
    let result = json!({
        "pulse": {
            "segments": segments,
            "delta1": pulse.delta1,
            "delta2": pulse.delta2,
            "freq_diff": pulse.freq_diff,
            "phase_diff": pulse.phase_diff,
            "duration": pulse.duration(),
            "end_phase": pulse.end_phase(),
            "effective_area": pulse.effective_area()?,
        },
        "detuning_ratio": r.delta / r.omega_bar,
        "requested": { "axis": r.axis, "angle": theta, "matrix": matrix(&requested) },
        "effective": {
            "matrix": matrix(effective.matrix()),
            "equal_to_requested": matched.equal,
            "phase": matched.phase,
            "error": matched.error,
            "angle": realized.angle,
            "axis_vector": realized.axis,
            "global_phase": realized.global_phase,
        },
        "lambda": {
            "qubit_map": matrix(&up.qubit_map),
            "infidelity_vs_effective": up.infidelity_vs_effective,
            "final_leakage": up.final_leakage,
            "max_excited_population": up.max_excited_population,
            "final_state": amplitudes(&up.final_state.0),
            "norm_error": norm_error,
            "steps_per_segment": r.steps_per_segment,
        },
    });
    let mut csv = Table::new(&[
        "axis", "theta", "detuning_ratio", "effective_error", "effective_phase",
        "realized_angle", "axis_x", "axis_y", "axis_z", "infidelity", "final_leakage",
        "max_excited_population",
    ]);
    csv.push(vec![
        cell(format!("{:?}", r.axis)),
        cell(theta),
        cell(r.delta / r.omega_bar),
        cell(matched.error),
        cell(matched.phase),
        cell(realized.angle),
        cell(realized.axis[0]),
        cell(realized.axis[1]),
        cell(realized.axis[2]),
        cell(up.infidelity_vs_effective),
        cell(up.final_leakage),
        cell(up.max_excited_population),
    ]);
    let checks = vec![
        Check {
            name: "effective-matches-requested",
            pass: matched.equal,
        },
        Check {
            name: "lambda-norm-preserved",
            pass: norm_error <= config.tolerances.integrated,
        },
    ];
    Ok(finish("raman", json!({}), config, checks, result, csv))
}
