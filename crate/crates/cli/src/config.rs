// SPDX-License-Identifier: Apache-2.0

//! Run configuration. Angles are in units of π; times in ps; energies in
//! rad/ps.

use std::path::Path;

use qdsim_core::cqca::{BiasPulse, BiasSegment, RecombineMode};
use qdsim_core::protocol::{BiasSpec, TimingBudget};
use qdsim_core::raman::DEFAULT_STEPS_PER_SEGMENT;
use qdsim_core::{Axis, EXACT_TOL, INTEGRATED_TOL};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::CliError;
use crate::report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BiasConfig {
    Ideal { area_pi: f64 },
    Pulse { gamma: f64, segments: Vec<BiasSegment> },
}

impl Default for BiasConfig {
    fn default() -> Self {
        BiasConfig::Ideal { area_pi: 0.25 }
    }
}

impl BiasConfig {
    pub fn spec(&self) -> Result<BiasSpec, CliError> {
        match self {
            BiasConfig::Ideal { area_pi } => {
                if !area_pi.is_finite() {
                    return Err(CliError::usage("bias.area_pi must be finite"));
                }
                Ok(BiasSpec::Ideal { area: area_pi * PI })
            }
            BiasConfig::Pulse { gamma, segments } => BiasPulse::new(segments.clone(), *gamma)
                .map(BiasSpec::Pulse)
                .map_err(|e| CliError::usage(format!("bias pulse: {e}"))),
        }
    }

    /// Pulse area in radians.
    pub fn area(&self) -> Result<f64, CliError> {
        Ok(match self.spec()? {
            BiasSpec::Ideal { area } => area,
            BiasSpec::Pulse(p) => p.area(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RamanConfig {
    pub axis: Axis,
    pub theta_pi: f64,
    pub omega_bar: f64,
    pub delta: f64,
    pub n: i64,
    pub freq_diff: f64,
    pub steps_per_segment: usize,
}

impl Default for RamanConfig {
    fn default() -> Self {
        RamanConfig {
            axis: Axis::X,
            theta_pi: 1.0,
            omega_bar: 1.0,
            delta: 100.0,
            n: 0,
            freq_diff: 0.0,
            steps_per_segment: DEFAULT_STEPS_PER_SEGMENT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Closed-form comparisons.
    pub exact: f64,
    /// Comparisons involving numerical integration.
    pub integrated: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            exact: EXACT_TOL,
            integrated: INTEGRATED_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub recombine_mode: RecombineMode,
    pub bias: BiasConfig,
    pub raman: RamanConfig,
    pub timing: TimingBudget,
    pub format: Format,
    pub tolerances: Tolerances,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let config: RunConfig =
            serde_json::from_str(text).map_err(|e| CliError::usage(format!("config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Canonical JSON: fields in declaration order, 17 significant digits.
    pub fn to_json(&self) -> String {
        report::to_canonical_json(self)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.bias.spec()?;
        self.timing
            .validate()
            .map_err(|e| CliError::usage(format!("timing: {e}")))?;
        let r = &self.raman;
        for (name, v) in [
            ("raman.theta_pi", r.theta_pi),
            ("raman.omega_bar", r.omega_bar),
            ("raman.delta", r.delta),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::usage(format!("{name} must be positive, got {v}")));
            }
        }
        if !r.freq_diff.is_finite() {
            return Err(CliError::usage("raman.freq_diff must be finite"));
        }
        if r.steps_per_segment == 0 {
            return Err(CliError::usage("raman.steps_per_segment must be >= 1"));
        }
        check_tolerance("tolerances.exact", self.tolerances.exact)?;
        check_tolerance("tolerances.integrated", self.tolerances.integrated)
    }
}

pub fn check_tolerance(name: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CliError::usage(format!("{name} must be positive and finite, got {v}")))
    }
}
