//! The `stratscope` command line. [`run`] takes its streams as arguments so
//! tests can drive it in-process.
//!
//! Exit codes: 0 success, 1 invalid data (row errors, validation
//! violations, stage failures), 2 usage, configuration or I/O errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::config::{AnalysisConfig, StandoutThreshold, StdMode};
use crate::ingest::{load_bundle_with_warnings, DatasetBundle, LoadError};
use crate::pipeline::analyze;
use crate::report::{self, to_json, ReportData};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const DEFAULT_OUT_DIR: &str = "out";

#[derive(Debug, Parser)]
#[command(name = "stratscope", version, about = "Indicator prevalence, axis alignment and gap analysis for national AI strategies")]
struct Cli {
    /// Dataset directory.
    #[arg(long, global = true, env = "STRATSCOPE_DATA_DIR")]
    data_dir: Option<PathBuf>,
    /// Output directory; stage commands also cache `<stage>.json` here.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Weight of a partial match, in [0, 1].
    #[arg(long, global = true)]
    partial_weight: Option<f64>,
    /// `population` or `sample`.
    #[arg(long, global = true)]
    std_mode: Option<StdMode>,
    /// A non-negative integer or `auto`.
    #[arg(long, global = true)]
    standout_threshold: Option<StandoutThreshold>,
    /// Axes with fewer distinct indicators are flagged.
    #[arg(long, global = true)]
    min_axis_coverage: Option<u32>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
enum Command {
    /// Check the dataset for consistency.
    Validate,
    /// Frequencies, statistics and prevalence classes.
    Prevalence,
    /// Per-country indicator counts and standout strategies.
    Standout,
    /// Country strata.
    Stratify,
    /// The consolidated indicator set.
    Consolidate,
    /// Extended matrix, frequency table and axis coverage.
    Align,
    /// Blind spot, overflow ratios and coverage flags.
    Patterns,
    /// Write the full report into the output directory.
    Report,
    /// Every stage in order, then the report.
    All,
}

impl Command {
    fn stage_name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Prevalence => "prevalence",
            Command::Standout => "standout",
            Command::Stratify => "stratify",
            Command::Consolidate => "consolidate",
            Command::Align => "align",
            Command::Patterns => "patterns",
            Command::Report => "report",
            Command::All => "all",
        }
    }
}

const STAGES: [Command; 6] = [
    Command::Prevalence,
    Command::Standout,
    Command::Stratify,
    Command::Consolidate,
    Command::Align,
    Command::Patterns,
];

struct Failure(i32, String);

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure(EXIT_USAGE, msg.into())
    }
}

#[derive(Serialize)]
struct ValidationSummary {
    valid: bool,
    dimensions: usize,
    indicators: usize,
    countries: usize,
    matches: usize,
    axes: usize,
    correspondences: usize,
    proposals: usize,
    warnings: Vec<String>,
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(Failure(code, msg)) => {
            if !msg.is_empty() {
                let _ = writeln!(err, "error: {msg}");
            }
            code
        }
    }
}

fn resolve_config(cli: &Cli, base: AnalysisConfig) -> Result<AnalysisConfig, Failure> {
    let mut config = base;
    if let Some(w) = cli.partial_weight {
        config.partial_weight = w;
    }
    if let Some(m) = cli.std_mode {
        config.std_mode = m;
    }
    if let Some(t) = cli.standout_threshold {
        config.standout_threshold = t;
    }
    if let Some(n) = cli.min_axis_coverage {
        config.min_axis_coverage = n;
    }
    config.check().map_err(|e| Failure::usage(e.to_string()))?;
    Ok(config)
}

fn same_dir(a: &Path, b: &Path) -> bool {
    match (fs::canonicalize(a), fs::canonicalize(b)) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::usage(format!("cannot write output: {e}")))
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let data_dir = cli
        .data_dir
        .as_deref()
        .ok_or_else(|| Failure::usage("--data-dir (or STRATSCOPE_DATA_DIR) is required"))?;
    if let Some(out_dir) = &cli.out_dir {
        if same_dir(out_dir, data_dir) {
            return Err(Failure::usage("--out-dir must differ from the data directory"));
        }
    }
    let loaded = match load_bundle_with_warnings(data_dir) {
        Ok(l) => l,
        Err(LoadError::Invalid(diags)) => {
            for d in &diags {
                let _ = writeln!(err, "{d}");
            }
            return Err(Failure(
                EXIT_INVALID,
                format!("{} problem(s) in {}", diags.len(), data_dir.display()),
            ));
        }
        Err(e) => return Err(Failure::usage(e.to_string())),
    };
    for w in &loaded.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    let bundle = loaded.bundle;
    let config = resolve_config(cli, bundle.config)?;
    let warnings: Vec<String> = loaded.warnings.iter().map(ToString::to_string).collect();

    if cli.command == Command::Validate {
        return write_out(out, &validation_output(&bundle, &warnings, cli.json));
    }

    let analysis = analyze(&bundle, &config).map_err(|e| Failure(EXIT_INVALID, e.to_string()))?;
    let data = ReportData::new(&bundle, &analysis);
    match cli.command {
        Command::Report => {
            let text = report_output(&bundle, &analysis, cli, err)?;
            write_out(out, &text)
        }
        Command::All => {
            let mut text = validation_output(&bundle, &warnings, cli.json);
            for stage in STAGES {
                text += &stage_output(stage, &data, cli.json);
            }
            text += &report_output(&bundle, &analysis, cli, err)?;
            write_out(out, &text)
        }
        stage => {
            let text = stage_output(stage, &data, cli.json);
            if let Some(dir) = &cli.out_dir {
                let json = stage_output(stage, &data, true);
                let path = dir.join(format!("{}.json", stage.stage_name()));
                fs::create_dir_all(dir)
                    .and_then(|_| fs::write(&path, json))
                    .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
            }
            write_out(out, &text)
        }
    }
}

fn validation_output(bundle: &DatasetBundle, warnings: &[String], json: bool) -> String {
    let summary = ValidationSummary {
        valid: true,
        dimensions: bundle.dimensions.len(),
        indicators: bundle.indicators.len(),
        countries: bundle.countries.len(),
        matches: bundle.matches.len(),
        axes: bundle.axis_scheme.vertical_axes.len() + bundle.axis_scheme.transversal_axes.len(),
        correspondences: bundle.correspondences.len(),
        proposals: bundle.proposals.len(),
        warnings: warnings.to_vec(),
    };
    if json {
        return to_json(&summary);
    }
    format!(
        "Dataset is valid: {} dimensions, {} indicators, {} countries, {} matches, {} axes, {} correspondences, {} proposals.\n",
        summary.dimensions,
        summary.indicators,
        summary.countries,
        summary.matches,
        summary.axes,
        summary.correspondences,
        summary.proposals
    )
}

/// Stage output; text outputs end with a blank line so they concatenate
/// cleanly.
fn stage_output(stage: Command, data: &ReportData, json: bool) -> String {
    if json {
        return match stage {
            Command::Prevalence => to_json(&data.prevalence),
            Command::Standout => to_json(&data.standouts),
            Command::Stratify => to_json(&data.strata),
            Command::Consolidate => to_json(&data.consolidation),
            Command::Align => to_json(&data.alignment),
            Command::Patterns => to_json(&data.patterns),
            _ => unreachable!("not an analysis stage"),
        };
    }
    let mut text = match stage {
        Command::Prevalence => report::render_prevalence(&data.prevalence),
        Command::Standout => report::render_standouts(&data.standouts),
        Command::Stratify => report::render_strata(&data.strata),
        Command::Consolidate => report::render_consolidation(&data.consolidation),
        Command::Align => report::render_alignment(&data.alignment),
        Command::Patterns => report::render_patterns(&data.patterns),
        _ => unreachable!("not an analysis stage"),
    };
    text.push('\n');
    text
}

fn report_output(
    bundle: &DatasetBundle,
    analysis: &crate::pipeline::Analysis,
    cli: &Cli,
    err: &mut dyn Write,
) -> Result<String, Failure> {
    let dir = cli
        .out_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
    if let Some(data_dir) = &cli.data_dir {
        if same_dir(&dir, data_dir) {
            return Err(Failure::usage("output directory must differ from the data directory"));
        }
    }
    let manifest = report::write_report(bundle, analysis, &dir).map_err(|e| {
        let _ = writeln!(err, "{e}");
        Failure::usage("report not written")
    })?;
    if cli.json {
        return Ok(to_json(&manifest));
    }
    let mut text = String::new();
    for f in &manifest.files {
        text += &format!("wrote {} ({})\n", f.path, f.roles.join(", "));
    }
    text += &format!("wrote {}\n", report::MANIFEST_JSON);
    Ok(text)
}
