//! Command-line scenario runner and validator for the spinqsl library.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use spinqsl::config::{Format, ScenarioConfig};
use spinqsl::scenario::run_scenario;
use spinqsl::validate::{run_suite, Suite};

#[derive(Parser)]
#[command(
    name = "spinqsl",
    about = "Spin-qudit dynamics in elliptically modulated drives: \
             scenario data export and validation suites",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario from a JSON config file or a built-in preset.
    Run {
        /// Path to a scenario config (JSON).
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        config: Option<PathBuf>,
        /// Name of a built-in preset (see `list-presets`).
        #[arg(long)]
        preset: Option<String>,
        /// Output directory (overrides the config).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Output format (overrides the config).
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Run a validation suite; nonzero exit on any applicable failure.
    Validate {
        /// Suite name: special_functions, dynamics, conservation, qsl, all.
        #[arg(long)]
        suite: String,
    },
    /// List the built-in presets.
    ListPresets,
}

fn load_config(
    config: Option<PathBuf>,
    preset: Option<String>,
) -> Result<ScenarioConfig, String> {
    match (config, preset) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            ScenarioConfig::from_json_str(&text).map_err(|e| e.to_string())
        }
        (None, Some(name)) => ScenarioConfig::preset(&name).ok_or_else(|| {
            format!(
                "unknown preset `{name}`; available: {}",
                ScenarioConfig::preset_names().join(", ")
            )
        }),
        _ => Err("exactly one of --config or --preset is required".into()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, preset, out, format } => {
            let mut cfg = match load_config(config, preset) {
                Ok(cfg) => cfg,
                Err(msg) => {
                    eprintln!("error: {msg}");
                    return ExitCode::FAILURE;
                }
            };
            if let Some(dir) = out {
                cfg.out_dir = Some(dir.display().to_string());
            }
            if let Some(f) = format {
                cfg.format = f.into();
            }
            match run_scenario(&cfg) {
                Ok(manifest) => {
                    let dir = cfg.out_dir.as_deref().unwrap_or("out");
                    for rec in &manifest.outputs {
                        let status = if rec.applicable { "ok" } else { "not applicable" };
                        match &rec.path {
                            Some(p) => println!(
                                "{:<20} {} ({} rows) [{status}]",
                                rec.kind.file_stem(),
                                p,
                                rec.rows
                            ),
                            None => println!(
                                "{:<20} -- [{status}] {}",
                                rec.kind.file_stem(),
                                rec.note.as_deref().unwrap_or("")
                            ),
                        }
                    }
                    println!("manifest written to {dir}/manifest.json");
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            }
        }
        Command::Validate { suite } => {
            let suite: Suite = match suite.parse() {
                Ok(s) => s,
                Err(msg) => {
                    eprintln!("error: {msg}");
                    return ExitCode::FAILURE;
                }
            };
            let report = run_suite(suite);
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
            eprintln!("{}", report.summary());
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Command::ListPresets => {
            for name in ScenarioConfig::preset_names() {
                let cfg = ScenarioConfig::preset(name).expect("preset exists");
                let outputs: Vec<&str> =
                    cfg.outputs.iter().map(|o| o.file_stem()).collect();
                println!(
                    "{name:<12} S={:<4} h1=h2={:<4} H={:<4} omega={:<4} k={:<4} -> {}",
                    cfg.spin,
                    cfg.field.h1,
                    cfg.field.hz,
                    cfg.field.omega,
                    cfg.field.k,
                    outputs.join(", ")
                );
            }
            ExitCode::SUCCESS
        }
    }
}
