//! Declarative scenario configuration: a single JSON document selecting the
//! spin, drive parameters, grid and requested outputs, plus named presets.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::FieldParams;
use crate::elliptic::EllipticModulus;
use crate::spin::{Spin, MAX_MATRIX_SPIN};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config is not valid JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("config field `{field}`: {message}")]
    Invalid { field: &'static str, message: String },
}

fn invalid(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { field, message: message.into() }
}

/// Output file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Data products a scenario can emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    /// Time series of the coherence vector and basic observables.
    Trajectory,
    /// The Bloch hodograph as a bare space curve.
    Hodograph,
    /// Frenet data (speed, curvature, torsion, arc length) of the
    /// standard-deviation curve, with S3 alongside.
    Frenet,
    /// The standard-deviation curve `(ΔS1, ΔS2, ΔS3)(t)`.
    DeviationCurve,
    /// Speed-limit bound values and Mandelstam-Tamm margins.
    QslReport,
    /// Mutual/conditional uncertainty series for the (1,2) pair.
    UncertaintyReport,
    /// Harmonic/geometric/arithmetic products of the deviations over time.
    BoundsTable,
    /// Limit-ratio table over a list of spins.
    RatioTable,
}

impl OutputKind {
    pub fn file_stem(self) -> &'static str {
        match self {
            OutputKind::Trajectory => "trajectory",
            OutputKind::Hodograph => "hodograph",
            OutputKind::Frenet => "frenet",
            OutputKind::DeviationCurve => "deviation_curve",
            OutputKind::QslReport => "qsl_report",
            OutputKind::UncertaintyReport => "uncertainty_report",
            OutputKind::BoundsTable => "bounds_table",
            OutputKind::RatioTable => "ratio_table",
        }
    }

    /// Kinds that need a propagated trajectory.
    pub fn needs_trajectory(self) -> bool {
        !matches!(self, OutputKind::RatioTable)
    }
}

/// Driving-field block of the config; `H` is the longitudinal amplitude.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FieldConfig {
    pub h1: f64,
    pub h2: f64,
    #[serde(rename = "H")]
    pub hz: f64,
    pub omega: f64,
    pub k: f64,
}

/// One declarative scenario. Deterministic: equal configs produce
/// byte-identical outputs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub spin: f64,
    pub field: FieldConfig,
    pub t_end: f64,
    /// Grid steps; omitted means the automatic density rule
    /// (100 points per unit of the fastest frequency).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_steps: Option<usize>,
    pub outputs: Vec<OutputKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<String>,
    #[serde(default)]
    pub format: Format,
    /// Spins for the ratio table (defaults to a standard list).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spin_list: Option<Vec<f64>>,
}

impl ScenarioConfig {
    /// Parses and validates a JSON document.
    pub fn from_json_str(text: &str) -> Result<ScenarioConfig, ConfigError> {
        let cfg: ScenarioConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Field-level validation with actionable messages.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let spin = Spin::new(self.spin).map_err(|e| invalid("spin", e.to_string()))?;
        let needs_matrices = self.outputs.iter().any(|o| o.needs_trajectory());
        if needs_matrices && spin.value() > MAX_MATRIX_SPIN {
            return Err(invalid(
                "spin",
                format!(
                    "dynamical outputs support S <= {MAX_MATRIX_SPIN}, got {}",
                    self.spin
                ),
            ));
        }
        let f = &self.field;
        if !(f.h1 >= 0.0 && f.h1.is_finite()) {
            return Err(invalid("field.h1", "must be finite and nonnegative"));
        }
        if !(f.h2 >= 0.0 && f.h2.is_finite()) {
            return Err(invalid("field.h2", "must be finite and nonnegative"));
        }
        if !(f.hz >= 0.0 && f.hz.is_finite()) {
            return Err(invalid("field.H", "must be finite and nonnegative"));
        }
        if !(f.omega > 0.0 && f.omega.is_finite()) {
            return Err(invalid("field.omega", "must be finite and positive"));
        }
        if !(0.0..=1.0).contains(&f.k) {
            return Err(invalid("field.k", "elliptic modulus must lie in [0, 1]"));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(invalid("t_end", "must be finite and positive"));
        }
        if let Some(n) = self.n_steps {
            if n < 1 {
                return Err(invalid("n_steps", "must be at least 1"));
            }
            if n > 50_000_000 {
                return Err(invalid("n_steps", "grid too large"));
            }
        }
        if self.outputs.is_empty() {
            return Err(invalid("outputs", "at least one output must be requested"));
        }
        for (i, kind) in self.outputs.iter().enumerate() {
            if self.outputs[..i].contains(kind) {
                return Err(invalid(
                    "outputs",
                    format!("duplicate output kind `{}`", kind.file_stem()),
                ));
            }
        }
        if let Some(list) = &self.spin_list {
            if list.is_empty() {
                return Err(invalid("spin_list", "must not be empty when present"));
            }
            for &s in list {
                Spin::new(s).map_err(|e| invalid("spin_list", e.to_string()))?;
            }
        }
        // the automatic density rule must not explode the grid either
        if self.n_steps.is_none() && self.outputs.iter().any(|o| o.needs_trajectory()) {
            let fastest = f.h1.max(f.h2).max(f.hz).max(f.omega);
            if 100.0 * self.t_end * fastest > 50_000_000.0 {
                return Err(invalid(
                    "t_end",
                    "automatic step rule exceeds 5e7 steps; set n_steps explicitly",
                ));
            }
        }
        Ok(())
    }

    /// The validated elliptic modulus.
    pub fn modulus(&self) -> EllipticModulus {
        EllipticModulus::new(self.field.k).expect("validated")
    }

    /// The validated field parameters.
    pub fn field_params(&self) -> FieldParams {
        FieldParams::new(
            self.field.h1,
            self.field.h2,
            self.field.hz,
            self.field.omega,
            self.modulus(),
        )
        .expect("validated")
    }

    /// Effective step count (explicit or by the density rule).
    pub fn step_count(&self) -> usize {
        self.n_steps
            .unwrap_or_else(|| crate::dynamics::default_step_count(self.t_end, &self.field_params()))
    }

    /// Built-in preset by name.
    pub fn preset(name: &str) -> Option<ScenarioConfig> {
        let circular_resonance = |hz: f64| FieldConfig {
            h1: 2.0,
            h2: 2.0,
            hz,
            omega: hz,
            k: 0.0,
        };
        let base = |outputs: Vec<OutputKind>, field: FieldConfig, n: usize| ScenarioConfig {
            spin: 1.0,
            field,
            t_end: std::f64::consts::PI,
            n_steps: Some(n),
            outputs,
            out_dir: None,
            format: Format::Csv,
            spin_list: None,
        };
        match name {
            "fig1" => Some(base(vec![OutputKind::DeviationCurve], circular_resonance(1.0), 2000)),
            "fig2" => Some(base(
                vec![OutputKind::Frenet, OutputKind::Trajectory],
                circular_resonance(1.0),
                2000,
            )),
            "fig3" => Some(base(vec![OutputKind::BoundsTable], circular_resonance(1.0), 2000)),
            "fig4" => Some(base(
                vec![OutputKind::UncertaintyReport],
                circular_resonance(1.0),
                2000,
            )),
            "fig5" => Some(base(
                vec![OutputKind::UncertaintyReport],
                circular_resonance(20.0),
                8000,
            )),
            "qsl_report" => {
                let mut cfg = base(
                    vec![OutputKind::QslReport, OutputKind::Hodograph],
                    circular_resonance(1.0),
                    4000,
                );
                cfg.spin = 0.5;
                // covers tau = pi/h = pi/2 and the closed hodograph period pi
                cfg.t_end = std::f64::consts::PI;
                Some(cfg)
            }
            "ratio_table" => {
                let mut cfg = base(vec![OutputKind::RatioTable], circular_resonance(1.0), 1);
                cfg.spin_list = Some(vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 10.0, 50.0]);
                Some(cfg)
            }
            _ => None,
        }
    }

    pub fn preset_names() -> &'static [&'static str] {
        &["fig1", "fig2", "fig3", "fig4", "fig5", "qsl_report", "ratio_table"]
    }
}
