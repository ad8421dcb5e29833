//! Deterministic outputs: a markdown report with a JSON twin, the matrix as
//! CSV, three SVG figures and a manifest with content hashes.
//!
//! Every real number is rounded to four decimals (ties to even) before it is
//! stored in [`ReportData`], so the markdown and JSON always agree.

mod markdown;
mod svg;

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::alignment::{AxisCoverage, FrequencyTable, MatrixExport};
use crate::config::AnalysisConfig;
use crate::ingest::DatasetBundle;
use crate::model::{Dimension, ExtendedMatrix, IndicatorCode, PrevalenceStats};
use crate::patterns::{AxisOverflow, OverflowPair};
use crate::pipeline::{Analysis, CodedProposal};
use crate::prevalence::{Prevalence, Stratum};
use crate::reference::ReferenceCheck;

pub use markdown::{
    render_alignment, render_consolidation, render_full_report, render_matrix_markdown,
    render_patterns, render_prevalence, render_standouts, render_strata,
};
pub use svg::{render_bar_chart, render_heatmap, Bar};

pub const REPORT_MD: &str = "report.md";
pub const REPORT_JSON: &str = "report.json";
pub const MATRIX_CSV: &str = "matrix.csv";
pub const HEATMAP_SVG: &str = "heatmap.svg";
pub const COUNTRIES_SVG: &str = "countries.svg";
pub const INDICATORS_SVG: &str = "indicators.svg";
pub const MANIFEST_JSON: &str = "manifest.json";

/// Four decimals, ties to even; never prints a negative zero.
pub fn fmt4(x: f64) -> String {
    let s = format!("{x:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

/// The value [`fmt4`] prints, as a number.
pub fn round4(x: f64) -> f64 {
    fmt4(x).parse().unwrap_or(x)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrevalenceRow {
    pub indicator: IndicatorCode,
    pub name: String,
    pub frequency: f64,
    pub label: Prevalence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrevalenceSection {
    pub std_mode: crate::config::StdMode,
    pub partial_weight: f64,
    pub stats: PrevalenceStats,
    pub rows: Vec<PrevalenceRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountryCount {
    pub country: String,
    pub name: String,
    pub count: u32,
    pub standout: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandoutSection {
    pub threshold: f64,
    pub counts: Vec<CountryCount>,
    pub standouts: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumRow {
    pub country: String,
    pub name: String,
    pub stratum: Stratum,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsolidatedRow {
    pub code: IndicatorCode,
    pub dimension: char,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsolidationSection {
    pub highly_prevalent: Vec<IndicatorCode>,
    pub new_dimensions: Vec<Dimension>,
    pub coded_proposals: Vec<CodedProposal>,
    pub consolidated_count: usize,
    pub indicators: Vec<ConsolidatedRow>,
    pub discrepancies: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlignmentSection {
    pub matrix: MatrixExport,
    pub frequency_table: FrequencyTable,
    pub coverage: Vec<AxisCoverage>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternSection {
    pub blind_spot: Vec<IndicatorCode>,
    pub blind_spot_share: f64,
    pub vertical_overflow: OverflowPair,
    pub transversal_overflow: OverflowPair,
    pub per_axis_overflow: Vec<AxisOverflow>,
    pub min_axis_coverage: u32,
    pub low_coverage_axes: Vec<AxisCoverage>,
    pub uncovered_axes: Vec<AxisCoverage>,
    pub reference_checks: Vec<ReferenceCheck>,
}

/// Everything the report shows, in the shape written to `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportData {
    pub config: AnalysisConfig,
    pub prevalence: PrevalenceSection,
    pub standouts: StandoutSection,
    pub strata: Vec<StratumRow>,
    pub consolidation: ConsolidationSection,
    pub alignment: AlignmentSection,
    pub patterns: PatternSection,
}

impl ReportData {
    pub fn new(bundle: &DatasetBundle, analysis: &Analysis) -> Self {
        let indicator_names: BTreeMap<IndicatorCode, &str> = bundle
            .indicators
            .iter()
            .map(|i| (i.code, i.name.as_str()))
            .collect();
        let s = &analysis.stats;
        let prevalence = PrevalenceSection {
            std_mode: analysis.config.std_mode,
            partial_weight: round4(analysis.config.partial_weight),
            stats: PrevalenceStats {
                mean: round4(s.mean),
                std_dev: round4(s.std_dev),
                hp_threshold: round4(s.hp_threshold),
                irrelevant_threshold: round4(s.irrelevant_threshold),
            },
            rows: analysis
                .labels
                .iter()
                .map(|l| PrevalenceRow {
                    indicator: l.indicator,
                    name: indicator_names.get(&l.indicator).unwrap_or(&"").to_string(),
                    frequency: round4(l.frequency),
                    label: l.label,
                })
                .collect(),
        };
        let standouts = StandoutSection {
            threshold: round4(analysis.standouts.threshold),
            counts: analysis
                .standouts
                .counts
                .iter()
                .map(|(id, &count)| CountryCount {
                    country: id.clone(),
                    name: bundle.country_name(id).to_string(),
                    count,
                    standout: analysis.standouts.standouts.contains(id),
                })
                .collect(),
            standouts: analysis.standouts.standouts.iter().cloned().collect(),
        };
        let strata = analysis
            .strata
            .iter()
            .map(|(id, &stratum)| StratumRow {
                country: id.clone(),
                name: bundle.country_name(id).to_string(),
                stratum,
            })
            .collect();
        let c = &analysis.consolidation;
        let consolidation = ConsolidationSection {
            highly_prevalent: c.highly_prevalent.clone(),
            new_dimensions: c.new_dimensions.clone(),
            coded_proposals: c.coded_proposals.clone(),
            consolidated_count: c.indicators.len(),
            indicators: c
                .indicators
                .iter()
                .map(|i| ConsolidatedRow {
                    code: i.code,
                    dimension: i.dimension,
                    name: i.name.clone(),
                })
                .collect(),
            discrepancies: c.discrepancies.clone(),
        };
        let alignment = AlignmentSection {
            matrix: MatrixExport::from(&analysis.matrix),
            frequency_table: analysis.table.clone(),
            coverage: analysis.coverage.clone(),
        };
        let p = &analysis.patterns;
        let patterns = PatternSection {
            blind_spot: p.blind_spot.iter().copied().collect(),
            blind_spot_share: round4(p.blind_spot_share),
            vertical_overflow: p.vertical_overflow,
            transversal_overflow: p.transversal_overflow,
            per_axis_overflow: p.per_axis_overflow.clone(),
            min_axis_coverage: analysis.config.min_axis_coverage,
            low_coverage_axes: p.low_coverage_axes.clone(),
            uncovered_axes: p.uncovered_axes.clone(),
            reference_checks: analysis.reference_checks.clone(),
        };
        Self {
            config: analysis.config,
            prevalence,
            standouts,
            strata,
            consolidation,
            alignment,
            patterns,
        }
    }
}

/// JSON with a trailing newline, as written to every `.json` output.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

/// The matrix as a CSV cross-tab: one row per transversal axis plus the
/// overflow row, codes joined by `", "`, distinct totals in the margins.
pub fn render_matrix_csv(matrix: &ExtendedMatrix, table: &FrequencyTable) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let mut header = vec!["axis".to_string()];
    header.extend(table.columns.iter().cloned());
    header.push("distinct".into());
    w.write_record(&header).expect("in-memory write");
    for (r, row) in table.rows.iter().enumerate() {
        let mut rec = vec![row.clone()];
        for c in 0..table.columns.len() {
            rec.push(
                matrix
                    .cell_at(r, c)
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(", "),
            );
        }
        rec.push(table.row_totals_distinct[r].to_string());
        w.write_record(&rec).expect("in-memory write");
    }
    let mut footer = vec!["distinct".to_string()];
    footer.extend(table.column_totals.iter().map(ToString::to_string));
    footer.push(table.total_entries.to_string());
    w.write_record(&footer).expect("in-memory write");
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}

/// Matched-indicator counts per country, nonzero only.
pub fn country_bars(data: &ReportData) -> Vec<Bar> {
    sorted_bars(
        data.standouts
            .counts
            .iter()
            .map(|c| Bar::new(&c.country, f64::from(c.count))),
    )
}

/// Matching-country counts per indicator, nonzero only.
pub fn indicator_bars(bundle: &DatasetBundle) -> Vec<Bar> {
    let documented: std::collections::HashSet<&str> = bundle
        .countries
        .iter()
        .filter(|c| c.has_document)
        .map(|c| c.id.as_str())
        .collect();
    let mut counts: BTreeMap<IndicatorCode, u32> = BTreeMap::new();
    for m in &bundle.matches {
        if documented.contains(m.country.as_str()) {
            *counts.entry(m.indicator).or_default() += 1;
        }
    }
    sorted_bars(
        counts
            .into_iter()
            .map(|(code, n)| Bar::new(&code.to_string(), f64::from(n))),
    )
}

fn sorted_bars(bars: impl Iterator<Item = Bar>) -> Vec<Bar> {
    let mut bars: Vec<Bar> = bars.filter(|b| b.value > 0.0).collect();
    bars.sort_by(|a, b| b.value.total_cmp(&a.value).then_with(|| a.key.cmp(&b.key)));
    bars
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub path: String,
    pub roles: Vec<String>,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportManifest {
    pub files: Vec<ManifestEntry>,
}

#[derive(Debug, thiserror::Error)]
#[error("cannot write {}: {source}", path.display())]
pub struct ReportError {
    pub path: PathBuf,
    pub source: io::Error,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Renders every artifact in memory, in output order, with its roles.
pub fn render_all(bundle: &DatasetBundle, analysis: &Analysis) -> Vec<(&'static str, Vec<&'static str>, String)> {
    let data = ReportData::new(bundle, analysis);
    let summary = vec!["full_report", "prevalence_table", "frequency_table", "pattern_summary"];
    vec![
        (REPORT_MD, summary.clone(), render_full_report(&data, bundle)),
        (REPORT_JSON, summary, to_json(&data)),
        (
            MATRIX_CSV,
            vec!["matrix_table"],
            render_matrix_csv(&analysis.matrix, &analysis.table),
        ),
        (HEATMAP_SVG, vec!["matrix_heatmap"], render_heatmap(&analysis.table)),
        (
            COUNTRIES_SVG,
            vec!["standout_chart"],
            render_bar_chart("Indicators found per strategy", &country_bars(&data)),
        ),
        (
            INDICATORS_SVG,
            vec!["indicator_chart"],
            render_bar_chart("Strategies using each indicator", &indicator_bars(bundle)),
        ),
    ]
}

/// Writes the six artifacts plus `manifest.json` into `out_dir`.
pub fn write_report(
    bundle: &DatasetBundle,
    analysis: &Analysis,
    out_dir: &Path,
) -> Result<ReportManifest, ReportError> {
    let fail = |path: &Path| {
        let path = path.to_path_buf();
        move |source| ReportError { path, source }
    };
    fs::create_dir_all(out_dir).map_err(fail(out_dir))?;
    let mut files = Vec::new();
    for (name, roles, body) in render_all(bundle, analysis) {
        let path = out_dir.join(name);
        fs::write(&path, &body).map_err(fail(&path))?;
        files.push(ManifestEntry {
            path: name.into(),
            roles: roles.into_iter().map(String::from).collect(),
            bytes: body.len(),
            sha256: sha256_hex(body.as_bytes()),
        });
    }
    let manifest = ReportManifest { files };
    let path = out_dir.join(MANIFEST_JSON);
    fs::write(&path, to_json(&manifest)).map_err(fail(&path))?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_decimals_round_half_even() {
        assert_eq!(fmt4(0.125), "0.1250");
        // Exact binary ties: 1/32 and 3/32.
        assert_eq!(fmt4(0.03125), "0.0312");
        assert_eq!(fmt4(0.09375), "0.0938");
        assert_eq!(fmt4(2.0 + 4.5f64.sqrt()), "4.1213");
        assert_eq!(fmt4(-0.00001), "0.0000");
        assert_eq!(round4(1.0 / 3.0), 0.3333);
    }

    #[test]
    fn bars_sort_descending_then_by_key() {
        let bars = sorted_bars(
            [("B", 2.0), ("A", 2.0), ("C", 5.0), ("D", 0.0)]
                .into_iter()
                .map(|(k, v)| Bar::new(k, v)),
        );
        let keys: Vec<_> = bars.iter().map(|b| b.key.as_str()).collect();
        assert_eq!(keys, ["C", "A", "B"]);
    }
}
