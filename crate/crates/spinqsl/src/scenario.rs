//! Scenario runner: turns a validated config into data files plus a result
//! manifest. Regime restrictions surface as applicability flags in the
//! manifest, never as crashes or silent omissions.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{Format, OutputKind, ScenarioConfig};
use crate::dynamics::{propagate_numeric, Trajectory};
use crate::geometry::frenet_analyze;
use crate::qsl::{mt_check, qsl_ratio_limit, tau1_qsl_limit, tau_qsl_limit, MtHorizon};
use crate::spin::{make_spin_system, QuantumState, Spin};
use crate::uncertainty::{
    conditional_measures, conservation_applies, deviation_curve, product_bounds, BoundSelector,
};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Config(#[from] crate::config::ConfigError),
    #[error(transparent)]
    Dynamics(#[from] crate::dynamics::DynamicsError),
    #[error(transparent)]
    Spin(#[from] crate::spin::SpinError),
    #[error("writing `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Manifest entry for one requested output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutputRecord {
    pub kind: OutputKind,
    pub path: Option<String>,
    pub columns: Vec<String>,
    pub rows: usize,
    /// Whether the regime guarantees behind this output hold; data is still
    /// written when computable, with the restriction noted.
    pub applicable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub checksum: Option<String>,
}

/// Accounting of everything a scenario produced.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultManifest {
    pub config: ScenarioConfig,
    pub outputs: Vec<OutputRecord>,
}

/// One tabular output before serialization.
struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Option<f64>>>,
}

fn fmt_value(v: f64) -> String {
    // 17 significant digits: round-trips f64 exactly
    format!("{v:.16e}")
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325_u64;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

impl Table {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = String::new();
                out.push_str(&self.columns.join(","));
                out.push('\n');
                for row in &self.rows {
                    let line: Vec<String> = row
                        .iter()
                        .map(|v| v.map(fmt_value).unwrap_or_default())
                        .collect();
                    out.push_str(&line.join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                #[derive(Serialize)]
                struct JsonTable<'a> {
                    columns: &'a [String],
                    rows: &'a [Vec<Option<f64>>],
                }
                let mut text = serde_json::to_string_pretty(&JsonTable {
                    columns: &self.columns,
                    rows: &self.rows,
                })
                .expect("table serializes");
                text.push('\n');
                text
            }
        }
    }
}

fn write_output(
    dir: &Path,
    kind: OutputKind,
    format: Format,
    table: &Table,
    applicable: bool,
    note: Option<String>,
) -> Result<OutputRecord, ScenarioError> {
    let file_name = format!("{}.{}", kind.file_stem(), format.extension());
    let path = dir.join(&file_name);
    let body = table.render(format);
    fs::write(&path, &body).map_err(|source| ScenarioError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(OutputRecord {
        kind,
        path: Some(file_name),
        columns: table.columns.clone(),
        rows: table.rows.len(),
        applicable,
        note,
        checksum: Some(format!("fnv1a64:{:016x}", fnv1a64(body.as_bytes()))),
    })
}

fn some_row(values: &[f64]) -> Vec<Option<f64>> {
    values.iter().map(|&v| Some(v)).collect()
}

/// Runs one scenario: computes every requested output, writes the data
/// files and `manifest.json` into the output directory, and returns the
/// manifest. Deterministic for a fixed config.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ResultManifest, ScenarioError> {
    cfg.validate()?;
    let out_dir = PathBuf::from(cfg.out_dir.as_deref().unwrap_or("out"));
    fs::create_dir_all(&out_dir).map_err(|source| ScenarioError::Io {
        path: out_dir.display().to_string(),
        source,
    })?;

    let needs_traj = cfg.outputs.iter().any(|o| o.needs_trajectory());
    let trajectory = if needs_traj {
        let sys = make_spin_system(cfg.spin)?;
        let rho0 = QuantumState::highest_weight(sys.dim());
        Some(propagate_numeric(
            &rho0,
            &cfg.field_params(),
            &sys,
            cfg.t_end,
            cfg.step_count(),
        )?)
    } else {
        None
    };

    let mut outputs = Vec::with_capacity(cfg.outputs.len());
    for &kind in &cfg.outputs {
        let record = match kind {
            OutputKind::Trajectory => {
                let traj = trajectory.as_ref().expect("trajectory built");
                emit_trajectory(&out_dir, cfg, traj)?
            }
            OutputKind::Hodograph => {
                let traj = trajectory.as_ref().expect("trajectory built");
                emit_hodograph(&out_dir, cfg, traj)?
            }
            OutputKind::Frenet => {
                let traj = trajectory.as_ref().expect("trajectory built");
                emit_frenet(&out_dir, cfg, traj)?
            }
            OutputKind::DeviationCurve => {
                let traj = trajectory.as_ref().expect("trajectory built");
                emit_deviation(&out_dir, cfg, traj)?
            }
            OutputKind::QslReport => {
                let traj = trajectory.as_ref().expect("trajectory built");
                emit_qsl_report(&out_dir, cfg, traj)?
            }
            OutputKind::UncertaintyReport => {
                let traj = trajectory.as_ref().expect("trajectory built");
                emit_uncertainty(&out_dir, cfg, traj)?
            }
            OutputKind::BoundsTable => {
                let traj = trajectory.as_ref().expect("trajectory built");
                emit_bounds_table(&out_dir, cfg, traj)?
            }
            OutputKind::RatioTable => emit_ratio_table(&out_dir, cfg)?,
        };
        outputs.push(record);
    }

    let manifest = ResultManifest { config: cfg.clone(), outputs };
    let manifest_path = out_dir.join("manifest.json");
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    fs::write(&manifest_path, text).map_err(|source| ScenarioError::Io {
        path: manifest_path.display().to_string(),
        source,
    })?;
    Ok(manifest)
}

fn emit_trajectory(
    dir: &Path,
    cfg: &ScenarioConfig,
    traj: &Trajectory,
) -> Result<OutputRecord, ScenarioError> {
    let columns = ["t[1/omega]", "R1", "R2", "R3", "S3", "purity"]
        .map(String::from)
        .to_vec();
    let rows = traj
        .times()
        .iter()
        .zip(traj.states())
        .zip(traj.coherence())
        .map(|((&t, s), c)| {
            some_row(&[t, c.r[0], c.r[1], c.r[2], s.expectation(traj.system().c3()), s.purity()])
        })
        .collect();
    write_output(dir, OutputKind::Trajectory, cfg.format, &Table { columns, rows }, true, None)
}

fn emit_hodograph(
    dir: &Path,
    cfg: &ScenarioConfig,
    traj: &Trajectory,
) -> Result<OutputRecord, ScenarioError> {
    let columns = ["t[1/omega]", "x", "y", "z"].map(String::from).to_vec();
    let rows = traj
        .times()
        .iter()
        .zip(traj.coherence())
        .map(|(&t, c)| some_row(&[t, c.r[0], c.r[1], c.r[2]]))
        .collect();
    write_output(dir, OutputKind::Hodograph, cfg.format, &Table { columns, rows }, true, None)
}

fn emit_frenet(
    dir: &Path,
    cfg: &ScenarioConfig,
    traj: &Trajectory,
) -> Result<OutputRecord, ScenarioError> {
    let columns = ["t[1/omega]", "S3", "V", "curvature", "torsion", "arclength"]
        .map(String::from)
        .to_vec();
    let curve = deviation_curve(traj);
    let frenet = match frenet_analyze(&curve) {
        Ok(f) => f,
        Err(e) => {
            return Ok(OutputRecord {
                kind: OutputKind::Frenet,
                path: None,
                columns,
                rows: 0,
                applicable: false,
                note: Some(e.to_string()),
                checksum: None,
            })
        }
    };
    let rows = traj
        .times()
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            vec![
                Some(t),
                Some(traj.states()[i].expectation(traj.system().c3())),
                Some(frenet.speed[i]),
                Some(frenet.curvature[i]),
                frenet.torsion[i],
                Some(frenet.arclength[i]),
            ]
        })
        .collect();
    write_output(dir, OutputKind::Frenet, cfg.format, &Table { columns, rows }, true, None)
}

fn emit_deviation(
    dir: &Path,
    cfg: &ScenarioConfig,
    traj: &Trajectory,
) -> Result<OutputRecord, ScenarioError> {
    let curve = deviation_curve(traj);
    let spin = traj.spin();
    let applicable = conservation_applies(traj.params(), spin);
    let note = (!applicable).then(|| {
        "variance-sum conservation is asserted only at resonance in the consistent drive \
         (any spin at k = 0; spin 1/2 and 1 otherwise)"
            .to_string()
    });
    let columns = ["t[1/omega]", "dS1", "dS2", "dS3", "sum_of_squares"]
        .map(String::from)
        .to_vec();
    let rows = curve
        .times()
        .iter()
        .zip(curve.points())
        .map(|(&t, p)| {
            some_row(&[t, p[0], p[1], p[2], p[0] * p[0] + p[1] * p[1] + p[2] * p[2]])
        })
        .collect();
    write_output(
        dir,
        OutputKind::DeviationCurve,
        cfg.format,
        &Table { columns, rows },
        applicable,
        note,
    )
}

fn emit_qsl_report(
    dir: &Path,
    cfg: &ScenarioConfig,
    traj: &Trajectory,
) -> Result<OutputRecord, ScenarioError> {
    let columns = [
        "S",
        "h",
        "H",
        "tau",
        "tau1",
        "tau_qsl",
        "tau1_qsl",
        "avg_dE_tau",
        "avg_dE_tau1",
        "mt_margin",
        "mt1_margin",
        "p_factor",
    ]
    .map(String::from)
    .to_vec();
    match mt_check(traj, MtHorizon::Full) {
        Ok(report) => {
            let rows = vec![vec![
                Some(report.spin),
                Some(report.h),
                Some(report.hz),
                Some(report.tau),
                Some(report.tau1),
                Some(report.tau_qsl),
                Some(report.tau1_qsl),
                report.avg_std_dev_tau,
                Some(report.avg_std_dev_tau1),
                report.mt_margin,
                Some(report.mt1_margin),
                Some(report.p_factor),
            ]];
            let note = (!report.eq5_valid).then(|| {
                "outside the resonance closed form's domain the margins are reported, \
                 not guaranteed"
                    .to_string()
            });
            write_output(
                dir,
                OutputKind::QslReport,
                cfg.format,
                &Table { columns, rows },
                report.eq5_valid,
                note,
            )
        }
        Err(e) => Ok(OutputRecord {
            kind: OutputKind::QslReport,
            path: None,
            columns,
            rows: 0,
            applicable: false,
            note: Some(e.to_string()),
            checksum: None,
        }),
    }
}

fn emit_uncertainty(
    dir: &Path,
    cfg: &ScenarioConfig,
    traj: &Trajectory,
) -> Result<OutputRecord, ScenarioError> {
    let columns = ["t[1/omega]", "S3", "M_12", "Delta_1_given_2", "Var_1_given_2"]
        .map(String::from)
        .to_vec();
    let rows = traj
        .times()
        .iter()
        .zip(traj.states())
        .map(|(&t, s)| {
            let rep = conditional_measures(s, traj.system())
                .expect("trajectory states match their system");
            some_row(&[
                t,
                s.expectation(traj.system().c3()),
                rep.mutual[0][1],
                rep.conditional[0][1],
                rep.conditional_variance[0][1],
            ])
        })
        .collect();
    write_output(
        dir,
        OutputKind::UncertaintyReport,
        cfg.format,
        &Table { columns, rows },
        true,
        None,
    )
}

fn emit_bounds_table(
    dir: &Path,
    cfg: &ScenarioConfig,
    traj: &Trajectory,
) -> Result<OutputRecord, ScenarioError> {
    let curve = deviation_curve(traj);
    let selectors = [
        ("12", BoundSelector::Pair(0, 1)),
        ("13", BoundSelector::Pair(0, 2)),
        ("23", BoundSelector::Pair(1, 2)),
        ("123", BoundSelector::Triple),
    ];
    let mut columns = vec!["t[1/omega]".to_string()];
    for (tag, _) in &selectors {
        columns.push(format!("hm_{tag}"));
        columns.push(format!("gm_{tag}"));
        columns.push(format!("am_{tag}"));
    }
    let rows = curve
        .times()
        .iter()
        .zip(curve.points())
        .map(|(&t, p)| {
            let mut row = vec![t];
            for (_, sel) in &selectors {
                let b = product_bounds(*p, *sel);
                row.extend([b.harmonic, b.geometric, b.arithmetic]);
            }
            some_row(&row)
        })
        .collect();
    write_output(
        dir,
        OutputKind::BoundsTable,
        cfg.format,
        &Table { columns, rows },
        true,
        None,
    )
}

fn emit_ratio_table(dir: &Path, cfg: &ScenarioConfig) -> Result<OutputRecord, ScenarioError> {
    let default_list = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 10.0, 50.0];
    let spins: Vec<f64> = cfg
        .spin_list
        .clone()
        .unwrap_or_else(|| default_list.to_vec());
    let columns = ["S", "tau_qsl_limit[H=1]", "tau1_qsl_limit[H=1]", "ratio"]
        .map(String::from)
        .to_vec();
    let rows = spins
        .iter()
        .map(|&s| {
            let spin = Spin::new(s).expect("validated");
            some_row(&[
                s,
                tau_qsl_limit(spin, 1.0),
                tau1_qsl_limit(spin, 1.0),
                qsl_ratio_limit(spin),
            ])
        })
        .collect();
    write_output(
        dir,
        OutputKind::RatioTable,
        cfg.format,
        &Table { columns, rows },
        true,
        None,
    )
}
